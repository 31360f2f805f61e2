"""Fraction of C(X) flagged by the epsilon_N proxy at each level."""
import argparse

from serre_lab.experiments import EPSILON_LEVELS, epsilon_N_census


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xmax", type=int, default=3)
    args = ap.parse_args()
    for N in EPSILON_LEVELS:
        fr = [epsilon_N_census(X, N).fraction for X in range(2, args.xmax + 1)]
        print(f"N={N:>2}: " + "  ".join(f"{f:.3f}" for f in fr))


if __name__ == "__main__":
    main()
