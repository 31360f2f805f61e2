"""Identities and the mod-4 image for members of the family E_s."""
import argparse
from fractions import Fraction

from serre_lab.families import es_mod4_image, es_rational_curve, verify_es_identities
from serre_lab.serre import certify_serre_curve, minimal_exceptional_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("s", nargs="*", default=["1", "2", "5", "-1/2"])
    args = ap.parse_args()
    for raw in args.s:
        s = Fraction(raw)
        rep = verify_es_identities(s)
        E = es_rational_curve(s)
        img = es_mod4_image(s)
        v = certify_serre_curve(E, exhaustive=True)
        print(f"s={s}: model ({E.r}, {E.s}); identities ok={rep.ok}; mod-2 full={img.mod2_full}; "
              f"classes inside H of index {img.H_index}: {img.inside_H}")
        print(f"   conditions {v.conditions}; minimal exceptional levels <= 24: "
              f"{minimal_exceptional_scan(E)}")


if __name__ == "__main__":
    main()
