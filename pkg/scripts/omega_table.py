"""Print enumerated vs class-number counts of Omega_C(p) for small levels."""
import argparse

from serre_lab.experiments import omega_report
from serre_lab.zmod import primes_up_to


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--level", type=int, default=3)
    ap.add_argument("--pmax", type=int, default=60)
    args = ap.parse_args()
    print(f"{'p':>5} {'class':>5} {'enum':>7} {'formula':>7} {'main':>10} {'resid':>6}")
    for p in primes_up_to(args.pmax):
        if p < 5:
            continue
        for r in omega_report(p, args.level):
            flag = "" if r.enumerated == r.formula else "  MISMATCH"
            print(f"{p:>5} {r.class_index:>5} {r.enumerated:>7} {r.formula:>7} "
                  f"{float(r.main_term):>10.2f} {r.residual:>6}{flag}")


if __name__ == "__main__":
    main()
