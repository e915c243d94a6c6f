"""Ledger values and radii as the prime cutoff grows."""
import argparse

from explicit_bv.constants import ConstantsLedger, build_ledger

NAMES = ("M", "E", "sum_inv_p_pm1", "sum_logp_p_pm1", "sum_logp_pm1_sq", "E0", "c0", "c1")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cutoffs", type=float, nargs="+", default=[1e5, 1e6, 1e7])
    args = ap.parse_args()
    ledgers = [(int(c), build_ledger(int(c))) for c in args.cutoffs]
    print("name".ljust(18) + "".join(f"P={c:<.0e}".ljust(34) for c, _ in ledgers))
    for n in NAMES:
        cells = []
        for _, led in ledgers:
            k = getattr(led, n)
            cells.append(f"{k.value:.9f} +- {k.radius:.1e}".ljust(34))
        print(n.ljust(18) + "".join(cells))
    # every larger-cutoff value must sit inside the smaller-cutoff interval
    base = ledgers[0][1]
    for c, led in ledgers[1:]:
        bad = [n for n in NAMES if not getattr(base, n).contains(getattr(led, n).value)]
        print(f"P={c:.0e} inside P={ledgers[0][0]:.0e} intervals: {'yes' if not bad else bad}")


if __name__ == "__main__":
    main()
