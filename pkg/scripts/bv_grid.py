"""Mean value and BV margins over an (x, Q, Q1) grid, written as CSV."""
import argparse
import math
from dataclasses import dataclass

from explicit_bv.arith import get_tables
from explicit_bv.bounds import verify_ebvt_pi, verify_ebvt_psi, verify_mvt
from explicit_bv.reports import reports_to_csv, summarize


@dataclass
class GridConfig:
    xs: tuple = (10**2, 10**3, 10**4, 10**5)
    mvt_q: tuple = (1, 2, 5, 10, 20, 50)
    bv_exponents: tuple = (0.25, 1 / 3, 0.5)
    bv_q1: tuple = (1, 3, 10)
    threads: int = 1


def run(cfg):
    t = get_tables(max(cfg.xs))
    out = []
    for x in cfg.xs:
        out += [verify_mvt(x, Q, t) for Q in cfg.mvt_q if Q <= math.sqrt(x)]
        for e in cfg.bv_exponents:
            Q = x**e
            for Q1 in cfg.bv_q1:
                if Q1 <= Q:
                    out.append(verify_ebvt_psi(x, Q, Q1, t, threads=cfg.threads))
                    out.append(verify_ebvt_pi(x, Q, Q1, t, threads=cfg.threads))
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="bv_grid.csv")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    reps = run(GridConfig(threads=args.threads))
    with open(args.out, "w") as f:
        f.write(reports_to_csv(reps))
    s = summarize(reps)
    print(f"{s['count']} checks, {s['failures']} failures -> {args.out}")
    # how far the bound sits above the left side
    for r in reps:
        ratio = f"rhs/lhs={r.rhs / r.lhs:.3g}" if r.lhs > 0 else "lhs=0"
        print(f"{r.ineq:8s} x={r.params['x']:<7g} Q={r.params['Q']:<8.4g} Q1={r.params.get('Q1') or '-'!s:<3} {ratio}")
