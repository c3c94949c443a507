"""Time the RLL check for Jordan-Schwinger pairs at several ranks and degrees."""
import argparse
import time

from yangian.intertwiners import verify_rll
from yangian.loperators import js_L
from yangian.symbolics import V


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ranks", default="2,3")
    ap.add_argument("--degrees", default="1,2,3")
    ap.add_argument("--relation", default="v-minus", choices=("v-minus", "u-plus"))
    args = ap.parse_args()
    for n in map(int, args.ranks.split(",")):
        pair = js_L(n, -1, (1,)), js_L(n, -1, (2,), V)
        for d in map(int, args.degrees.split(",")):
            start = time.perf_counter()
            rep = verify_rll(*pair, relation=args.relation, d=d)
            elapsed = time.perf_counter() - start
            verdict = "pass" if rep.passed else f"fail at {rep.mismatch}"
            print(f"n={n} d={d} checked={rep.checked} {verdict} {elapsed:.2f} s")


if __name__ == "__main__":
    main()
