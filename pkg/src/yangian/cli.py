"""Batch command-line interface with canonical JSON output.

Exit codes: 0 success, 1 mathematical failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import YangianError
from .symbolics import AffineForm, GammaProduct, LaurentLeading, ParamPoly, U, V, aux, two_ell

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_SYMBOL = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class UsageError(Exception):
    pass


def parse_value(tok: str) -> AffineForm:
    """Exact rational ("3", "-2", "1/2") or a symbol name; floats are rejected."""
    tok = tok.strip()
    if _RATIONAL.match(tok):
        try:
            return AffineForm.of(Fraction(tok))
        except ZeroDivisionError:
            raise UsageError(f"zero denominator in {tok!r}") from None
    if _SYMBOL.match(tok):
        return AffineForm.of(aux(tok))
    raise UsageError(f"not an exact rational or symbol name: {tok!r}")


def parse_values(text: str | None) -> list[AffineForm] | None:
    if text is None:
        return None
    toks = [t for t in text.split(",") if t.strip()]
    if not toks:
        raise UsageError("empty parameter list")
    return [parse_value(t) for t in toks]


# ---------------------------------------------------------------- canonical output


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, AffineForm) and obj.is_constant():
        return str(obj.const)
    if isinstance(obj, (AffineForm, ParamPoly, GammaProduct)):
        return str(obj)
    if isinstance(obj, LaurentLeading):
        return {
            "order": obj.order,
            "coefficient": to_jsonable(obj.coefficient),
            "transcendental": None if obj.exact else str(obj.transcendental),
            "sign": obj.sign,
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float):
        raise TypeError("floats are not part of the output contract")
    return str(obj)


def canonical_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, ensure_ascii=True, indent=1) + "\n"


def _flatten(prefix: str, obj: Any, out: list[str]) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append(f"{prefix}: {json.dumps(obj) if not isinstance(obj, str) else obj}")


def render_table(doc: dict) -> str:
    lines: list[str] = []
    _flatten("", to_jsonable(doc), lines)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- job spec


@dataclass
class JobSpec:
    command: str
    action: str | None = None
    n: int | None = None
    N: int | None = None
    params: list | None = None
    deg: int | None = None
    relation: str | None = None
    shift_w: int = 0
    mode: str | None = None
    i: int | None = None
    trace: bool = False
    swap_n: bool = False
    sweep_values: list | None = None
    fmt: str = "json"

    def echo(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None and k != "fmt"}
        return to_jsonable(d)


@dataclass
class ResultDocument:
    spec: JobSpec
    passed: bool
    payload: dict
    notes: list = field(default_factory=list)
    seconds: float | None = None

    def as_dict(self) -> dict:
        d = {
            "spec": self.spec.echo(),
            "passed": self.passed,
            "result": self.payload,
            "notes": list(self.notes),
            "version": __version__,
        }
        if self.seconds is not None:
            d["timing"] = {"milliseconds": int(round(self.seconds * 1000))}
        return d


# ---------------------------------------------------------------- verify


def _js_pair(n: int):
    from .loperators import js_L

    return js_L(n, -1, (1,), U), js_L(n, -1, (2,), V)


def _biedenharn_factors(n: int, N: int, params: list | None):
    from .loperators import biedenharn_L

    if params is None:
        params = [two_ell(a, I) for I in range(1, N + 1) for a in range(1, n + 1)]
    if len(params) != n * N:
        raise UsageError(f"need {n * N} parameters (n per factor), got {len(params)}")
    return [biedenharn_L(n, params[I * n:(I + 1) * n], (I + 1,)) for I in range(N)]


def cmd_verify(spec: JobSpec) -> ResultDocument:
    from .intertwiners import verify_fundamental_yb, verify_rll
    from .loperators import check_hw, monodromy, qdet, qdet_orderings, weight_prediction
    from .weyl import weyl_mul

    n = spec.n or 2
    if n < 2:
        raise UsageError("rank n >= 2 required")
    if spec.action == "rll":
        L1, L2 = _js_pair(n)
        rel = spec.relation or "v-minus"
        if rel == "fund-yb":
            r = verify_fundamental_yb(L1)
        else:
            if rel not in ("v-minus", "u-plus"):
                raise UsageError(f"unknown relation {rel!r}")
            r = verify_rll(L1, L2, rel, d=3 if spec.deg is None else spec.deg, shift_w=spec.shift_w)
        payload = {"relation": r.relation, "checked": r.checked, "argument": r.argument,
                   "firstFailure": r.mismatch}
        return ResultDocument(spec, r.passed, payload)
    if spec.action == "hw":
        N = spec.N or 1
        T = monodromy(_biedenharn_factors(n, N, spec.params), n)
        got = list(check_hw(T).weights)
        pred = weight_prediction(T)
        ok = all((a - b).is_zero() for a, b in zip(got, pred))
        payload = {"weights": got, "predicted": pred, "agree": ok}
        return ResultDocument(spec, ok, payload)
    if spec.action == "qdet":
        N = spec.N or 2
        factors = _biedenharn_factors(n, N, spec.params)
        first, second = qdet_orderings(monodromy(factors, n))
        central = first == second
        singles = [qdet(monodromy([L], n)) for L in factors]
        prod = singles[0]
        for q in singles[1:]:
            prod = weyl_mul(prod, q)
        mult = central and first == prod
        payload = {
            "qdet": str(first),
            "factorQdets": [str(q) for q in singles],
            "orderingsAgree": central,
            "multiplicative": mult,
        }
        return ResultDocument(spec, central and mult, payload)
    raise UsageError(f"unknown verify target {spec.action!r}")


# ---------------------------------------------------------------- gl2


def _gl2_params(spec: JobSpec, need: int | None = None):
    from .gl2 import Gl2Params

    if spec.params is None:
        raise UsageError("--params is required")
    if len(spec.params) % 2:
        raise UsageError("parameters come in pairs 2l^I_2, 2l^I_1 per factor")
    if need is not None and len(spec.params) != 2 * need:
        raise UsageError(f"need {2 * need} parameters")
    if len(spec.params) // 2 not in (1, 2, 4):
        raise UsageError("one, two or four factors supported")
    return Gl2Params.of(spec.params)


def cmd_gl2(spec: JobSpec) -> ResultDocument:
    from . import gl2

    if spec.action == "sweep":
        pts = gl2.sweep_points(spec.sweep_values) if spec.sweep_values else gl2.sweep_points()
        r = gl2.consistency_sweep(pts)
        payload = {
            "points": r.points,
            "compared": r.compared,
            "agreed": r.agreed,
            "excluded": r.excluded,
            "mismatches": [list(m) for m in r.mismatches],
            "magnitudeFailures": len(r.magnitude_failures),
            "statedFailures": _count(r.stated_failures, lambda t: f"{t[1]}:{t[2]}:{t[3]}"),
        }
        return ResultDocument(spec, r.all_agree, payload)
    if spec.action == "classify":
        p = _gl2_params(spec, 2)
        c = gl2.combos(p)
        try:
            rep = gl2.classify(c)
        except YangianError:
            rep = None
        payload = {"combinations": c.as_dict()}
        if rep is None:
            payload["report"] = None
            payload["note"] = "symbolic combinations: configuration depends on the parameters"
        else:
            payload["report"] = rep.as_dict()
        payload["coefficients"] = {
            w: gl2.perm_coeff(p, w) for w in ("pi1", "pi2", "pi")
        }
        if p.is_rational():
            payload["coefficientValues"] = {
                w: _value(gl2.perm_coeff(p, w)) for w in ("pi1", "pi2", "pi")
            }
        return ResultDocument(spec, True, payload)
    if spec.action == "asym":
        mode = spec.mode or "four-factor"
        if mode not in ("shift-all", "shift-second", "four-factor"):
            raise UsageError(f"unknown mode {mode!r}")
        p = _gl2_params(spec)
        if mode != "shift-all" and p.N != 2:
            raise UsageError(f"mode {mode} needs two factors")
        if not p.is_rational():
            raise UsageError("asymptotics need rational parameters")
        ar = gl2.asymptotics_report(p, mode)
        payload = {"report": ar.as_dict()}
        if p.N == 2:
            payload["stated"] = [
                {
                    "source": s.source,
                    "configuration": s.configuration,
                    "coefficient": s.coefficient,
                    "stated": {"order": s.stated.order, "sign": s.stated.sign,
                               "magnitude": s.stated.magnitude},
                    "orderOk": s.order_ok,
                    "signOk": s.sign_ok,
                    "magnitudeOk": s.magnitude_ok,
                }
                for s in gl2.stated_checks(p)
            ]
            payload["classify"] = gl2.classify(gl2.combos(p)).as_dict()
        return ResultDocument(spec, True, payload)
    raise UsageError(f"unknown gl2 action {spec.action!r}")


def _value(g: GammaProduct):
    try:
        v = g.evaluate({})
    except ZeroDivisionError:
        return "pole"
    r = v.as_rational()
    return r if r is not None else str(v)


def _count(items, key) -> dict:
    out: dict[str, int] = {}
    for t in items:
        k = key(t)
        out[k] = out.get(k, 0) + 1
    return out


# ---------------------------------------------------------------- beta sequences

SWAP_N_NOTE = (
    "second product uses B(2l^1_(k+1) - 2l^1_n, 2l^1_k - 2l^1_(k+1) + 1); "
    "the commonly printed indices do not reproduce the accumulated coefficient"
)


def _trace_rows(trace) -> list[dict]:
    return [
        {
            "operator": st.label(),
            "argument": st.argument,
            "beta": st.beta,
            "state": st.state,
            "params": list(st.params),
        }
        for st in trace
    ]


def cmd_betaseq(spec: JobSpec) -> ResultDocument:
    from .hwfunctions import beta_sequence_S12_i, coefficient_at, s12n_sequence

    n = spec.n or 2
    if not 2 <= n <= 4:
        raise UsageError("2 <= n <= 4 required")
    if spec.params is not None and len(spec.params) != 2 * n:
        raise UsageError(f"need {2 * n} parameters")
    notes = []
    rational = spec.params is not None and all(v.is_constant() for v in spec.params)
    # rational points are evaluated on the symbolic result so that coinciding
    # parameters show up as poles rather than as a failing step
    run_params = None if rational else spec.params
    if spec.swap_n:
        res = s12n_sequence(n, run_params)
        notes.append(SWAP_N_NOTE)
    else:
        i = spec.i or 1
        if not 1 <= i <= n:
            raise UsageError("1 <= i <= n required")
        res = beta_sequence_S12_i(n, i, run_params)
    payload = {
        "finalState": res.state.describe(),
        "unit": res.state.is_one(),
        "accumulated": res.coefficient,
        "closedForm": res.closed_form,
        "agrees": res.agrees,
        "signPhase": res.sign_phase,
        "permutation": [list(x) for x in res.permutation],
        "steps": len(res.trace),
    }
    if rational:
        payload["atPoint"] = coefficient_at(res.coefficient, n, [v.const for v in spec.params])
    if spec.trace:
        payload["trace"] = _trace_rows(res.trace)
    return ResultDocument(spec, res.agrees and res.state.is_one(), payload, notes)


# ---------------------------------------------------------------- fixtures


def fixture_name(spec: JobSpec) -> str:
    parts = [spec.command, spec.action or ""]
    for k, v in sorted(spec.echo().items()):
        if k in ("command", "action"):
            continue
        parts.append(f"{k}-{v}")
    raw = "_".join(p for p in parts if p)
    return re.sub(r"[^A-Za-z0-9_.=-]+", "", raw.replace("/", "o").replace(",", ".")) + ".json"


def check_fixture(doc: dict, directory: Path, spec: JobSpec) -> tuple[bool, str]:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / fixture_name(spec)
    body = {k: v for k, v in doc.items() if k != "timing"}
    text = canonical_json(body)
    if not path.exists():
        path.write_text(text)
        return True, f"wrote {path.name}"
    if path.read_text() == text:
        return True, f"matched {path.name}"
    return False, f"differs from {path.name}"


# ---------------------------------------------------------------- argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="fmt", choices=("json", "table"), default="json")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--fixture-dir", help="write or compare frozen result fixtures")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte reproducibility)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="yangian", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="RLL, highest-weight and quantum determinant checks")
    v.add_argument("action", choices=("rll", "hw", "qdet"))
    v.add_argument("--n", type=int)
    v.add_argument("--N", type=int)
    v.add_argument("--deg", type=int)
    v.add_argument("--relation", help="v-minus, u-plus or fund-yb")
    v.add_argument("--shift-w", type=int, default=0)
    v.add_argument("--params")
    _common(v)

    g = sub.add_parser("gl2", help="second-order gl(2) classification and asymptotics")
    g.add_argument("action", choices=("classify", "asym", "sweep"))
    g.add_argument("--params")
    g.add_argument("--mode")
    g.add_argument("--sweep-values", help="grid values for the sweep")
    _common(g)

    b = sub.add_parser("betaseq", help="Beta sequences of higher rank exchanges")
    b.add_argument("--n", type=int)
    b.add_argument("--i", type=int)
    b.add_argument("--params")
    b.add_argument("--trace", action="store_true")
    b.add_argument("--swap-n", action="store_true")
    _common(b)
    return ap


def read_config(path: str) -> list[str]:
    """key=value lines to flags, placed before the command-line flags."""
    out = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read config: {e}") from None
    for ln, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {ln}: expected key=value")
        k, val = (s.strip() for s in line.split("=", 1))
        flag = "--" + k.replace("_", "-")
        if val.lower() in ("true", "yes"):
            out.append(flag)
        elif val.lower() in ("false", "no"):
            continue
        else:
            out.extend([flag, val])
    return out


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    path = None
    rest = []
    it = iter(range(len(argv)))
    skip = False
    for idx in it:
        a = argv[idx]
        if skip:
            skip = False
            continue
        if a == "--config":
            if idx + 1 >= len(argv):
                raise UsageError("--config needs a path")
            path = argv[idx + 1]
            skip = True
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
        else:
            rest.append(a)
    head = []
    while rest and not rest[0].startswith("-") and len(head) < 2:
        head.append(rest.pop(0))
    return head + read_config(path) + rest


def spec_from_args(ns: argparse.Namespace) -> JobSpec:
    sweep_values = None
    if getattr(ns, "sweep_values", None):
        vals = parse_values(ns.sweep_values)
        if any(not v.is_constant() for v in vals):
            raise UsageError("sweep values must be rational")
        sweep_values = [v.const for v in vals]
    return JobSpec(
        command=ns.command,
        action=getattr(ns, "action", None),
        n=getattr(ns, "n", None),
        N=getattr(ns, "N", None),
        params=parse_values(getattr(ns, "params", None)),
        deg=getattr(ns, "deg", None),
        relation=getattr(ns, "relation", None),
        shift_w=getattr(ns, "shift_w", 0) or 0,
        mode=getattr(ns, "mode", None),
        i=getattr(ns, "i", None),
        trace=bool(getattr(ns, "trace", False)),
        swap_n=bool(getattr(ns, "swap_n", False)),
        sweep_values=sweep_values,
        fmt=ns.fmt,
    )


COMMANDS = {"verify": cmd_verify, "gl2": cmd_gl2, "betaseq": cmd_betaseq}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        spec = spec_from_args(ns)
        t0 = time.perf_counter()
        doc = COMMANDS[spec.command](spec)
        if ns.timing:
            doc.seconds = time.perf_counter() - t0
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except YangianError as e:
        err = {"spec": spec.echo(), "passed": False, "error": type(e).__name__, "detail": str(e),
               "version": __version__}
        sys.stdout.write(canonical_json(err))
        return EXIT_FAIL
    out = doc.as_dict()
    passed = doc.passed
    if ns.fixture_dir:
        ok, msg = check_fixture(out, Path(ns.fixture_dir), spec)
        print(msg, file=sys.stderr)
        passed = passed and ok
    sys.stdout.write(canonical_json(out) if spec.fmt == "json" else render_table(out))
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
