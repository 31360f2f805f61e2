"""Certified-Serre fraction over C(X) for a range of X."""
import argparse
import time

from serre_lab.experiments import serre_census


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xmax", type=int, default=4)
    ap.add_argument("--prime-bound", type=int, default=37)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for X in range(2, args.xmax + 1):
        t0 = time.time()
        rep = serre_census(X, args.prime_bound, workers=args.workers)
        print(f"X={X}: {rep.certified_serre}/{rep.total} = {rep.fraction:.3f} certified, "
              f"{rep.not_serre} provably not Serre, failures {rep.failures_by_condition} "
              f"({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
