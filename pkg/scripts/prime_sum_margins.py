"""Worst-case margin of every prime-sum inequality over all real x up to a bound,
plus the upper bound of the 1/(p-1) sum evaluated with the displayed constant."""
import argparse

from explicit_bv.arith import get_tables
from explicit_bv.bounds import displayed_constant_margin, verify_lemma31


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x-max", type=float, default=1e7)
    args = ap.parse_args()
    x_max = int(args.x_max)
    t = get_tables(x_max)
    for part in "abcde":
        for r in verify_lemma31(part, x_max, points=[], sweep=True, tables=t):
            ml = "" if r.rhs_lower is None else f" lower margin {r.margin_lower:.4g}"
            print(f"{r.ineq:18s} worst at x={r.params['x']:<12.10g} upper margin {r.margin:.4g}{ml}")
    for x in (10**4, 10**5, 10**6, x_max):
        print(f"displayed 0.57721 at x={x:.0e}: upper margin {displayed_constant_margin(x, t):+.4f}")


if __name__ == "__main__":
    main()
