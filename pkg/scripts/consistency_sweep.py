"""Run the gl(2) classification/asymptotics consistency sweep and print a summary."""
import argparse
import time
from fractions import Fraction

from yangian.gl2 import consistency_sweep, sweep_points


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--values", help="comma-separated grid values, e.g. -1,0,1,2,1/2")
    args = ap.parse_args()
    values = [Fraction(v) for v in args.values.split(",")] if args.values else None
    start = time.perf_counter()
    res = consistency_sweep(sweep_points(values))
    elapsed = time.perf_counter() - start
    print(f"points {res.points}  compared {res.compared}  agreed {res.agreed}  ({elapsed:.1f} s)")
    for k, v in sorted(res.excluded.items()):
        print(f"excluded {k}: {v}")
    for m in res.mismatches:
        print("mismatch", *m)
    counts: dict = {}
    for _, src, cfg, coeff in res.stated_failures:
        counts[(src, cfg, coeff)] = counts.get((src, cfg, coeff), 0) + 1
    for key, n in sorted(counts.items()):
        print("stated order/sign differs", *key, n)
    print(f"stated magnitude differs at {len(res.magnitude_failures)} (point, coefficient) pairs")


if __name__ == "__main__":
    main()
