"""omega(p-1) statistics, large-factor sums and order counts across x."""
import argparse
import math

from explicit_bv.applications import goldfeld_sum, large_factor_count, order_count, turan_sums
from explicit_bv.arith import get_tables


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x-max", type=float, default=1e6)
    ap.add_argument("--theta", type=float, default=0.5)
    args = ap.parse_args()
    x_max = int(args.x_max)
    t = get_tables(x_max)
    th = args.theta
    print("x        mean_omega  loglog  variance  S/x     P(p-1)>x^th  e_2(p)>x^th  pi(x)")
    x = 10**3
    while x <= x_max:
        tr = turan_sums(x, t)
        g = goldfeld_sum(x, th, t)
        big = large_factor_count(x, th, t)
        orders = order_count(x, th, 2, t)
        print(f"{x:<8d} {tr.sum_omega / tr.prime_count:<11.4f} {math.log(math.log(x)):<7.4f} "
              f"{tr.variance:<9.4f} {g.ratio:<7.4f} {big:<12d} {orders.count:<12d} {tr.prime_count}")
        x *= 10


if __name__ == "__main__":
    main()
