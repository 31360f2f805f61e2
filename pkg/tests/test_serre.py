import random

import pytest

from serre_lab.families import RationalCurve, canonical_model, enumerate_family
from serre_lab.gl2 import det, gl2_elements
from serre_lab.serre import (
    PROPER, SURJECTIVE, certify_level, certify_serre_curve, conjugation_span, frobenius_sigma,
    good_primes, index_two_excluded_at_8, kernel_coordinate, maximal_class_sets,
    minimal_exceptional_scan, rational_two_torsion, serre_number, serre_number_of,
    serre_subgroup_contains, serre_three_conditions,
)
from serre_lab.zmod import kronecker


def test_serre_number_examples():
    assert serre_number_of(-31).M_W == 62
    assert serre_number_of(-1).M_W == 4
    assert serre_number_of(2).M_W == 8
    assert serre_number_of(5).M_W == 10
    assert serre_number(RationalCurve(1, 1)).W.value == -31


def test_serre_subgroup_containment_over_family():
    rng = random.Random(7)
    curves = rng.sample(list(enumerate_family(3)), 100)
    for E in curves:
        sn = serre_number(E)
        for p in good_primes(E, 200, sn.M_W)[:15]:
            sig = frobenius_sigma(E, p, sn.M_W)
            assert det(sig, sn.M_W) == p % sn.M_W
            assert serre_subgroup_contains(sn.W, sig)


def test_maximal_class_sets():
    # GL2(F_2) = S3: A3 and three conjugate order-2 subgroups -> 2 distinct class-sets
    assert len(maximal_class_sets(2)) == 2
    # GL2(F_3): SL2 (index 2), Borel (index 4), and the normaliser of the nonsplit
    # Cartan (a 2-Sylow, index 3); the split-Cartan normaliser lies in a 2-Sylow
    sets = maximal_class_sets(3)
    assert len(sets) == 3
    from serre_lab.gl2 import class_table
    sizes = sorted(sum(class_table(3).classes[k].size for k in s) for s in sets)
    # SL2: 24; Borel conjugates: 48 - 18 irreducible; 2-Sylows: 48 - 16 of order 3 or 6
    assert sizes == [24, 30, 32]


def test_serre_three_conditions_full_group():
    for ell in (5, 7, 11):
        pairs = {(((a + d) % ell), (a * d - b * c) % ell) for a, b, c, d in gl2_elements(ell)}
        assert serre_three_conditions(pairs, ell) == (True, True, True)


def test_serre_three_conditions_scalars():
    assert serre_three_conditions([(2, 1), (4, 4)], 5) == (False, False, False)


def test_kernel_coordinate_and_span():
    g = (1, 3, 0, 1)  # order 1 mod 3, (g - I)/3 = (0, 1; 0, 0)
    assert kernel_coordinate(g, 3, 1) == (0, 1, 0, 0)
    assert conjugation_span([(0, 1, 0, 0)], 3) == 3  # trace-zero matrices
    assert conjugation_span([(0, 1, 0, 0), (1, 0, 0, 0)], 3) == 4


def test_rational_two_torsion():
    assert rational_two_torsion(RationalCurve(-1, 0))
    assert rational_two_torsion(RationalCurve(-7, 6))  # root x = 1
    assert not rational_two_torsion(RationalCurve(1, 1))


def test_certify_serre_curve_examples():
    v = certify_serre_curve(RationalCurve(1, 1))
    assert v.verdict == "CertifiedUpToB" and v.serre.M_W == 62
    v = certify_serre_curve(RationalCurve(-1, 0))
    assert v.verdict == "NotSerre" and v.conditions[1] == "fail"
    v = certify_serre_curve(RationalCurve(3264, 83232))
    assert v.conditions[2] == "fail" and v.verdict != "CertifiedUpToB"


def test_level_certificates():
    E = RationalCurve(1, 1)
    for N in (2, 3, 4, 5, 8, 9, 12):
        assert certify_level(E, N).status == SURJECTIVE
    assert certify_level(E, 62).status == PROPER
    assert minimal_exceptional_scan(E) == []
    assert index_two_excluded_at_8(E)


def test_es_member_exceptional_at_4():
    E = RationalCurve(3264, 83232)
    assert certify_level(E, 2).status == SURJECTIVE
    assert minimal_exceptional_scan(E) == [4]


def test_closure_agrees_with_certificate_at_small_level():
    # for certified levels the Frobenius classes must meet every class of GL2(Z/2)
    E = RationalCurve(1, 1)
    from serre_lab.gl2 import class_table
    T = class_table(2)
    hit = {T.class_of(frobenius_sigma(E, p, 2)) for p in good_primes(E, 200, 2)}
    assert hit == set(range(len(T)))


@pytest.mark.parametrize("W,M", [(-1, 4), (-3, 6), (5, 10)])
def test_serre_subgroup_index_two(W, M):
    assert serre_number_of(W).M_W == M
    G = gl2_elements(M)
    inside = sum(1 for g in G if serre_subgroup_contains(W, g))
    assert 2 * inside == len(G)


def test_certificates_monotone_in_B():
    rng = random.Random(11)
    for E in rng.sample(list(enumerate_family(2)), 25):
        for N in (2, 3, 5, 4):
            if certify_level(E, N, 200).status == SURJECTIVE:
                assert certify_level(E, N, 500).status == SURJECTIVE


def test_det_coverage():
    from math import gcd
    rng = random.Random(5)
    for E in rng.sample(list(enumerate_family(3)), 20):
        for N in range(2, 11):
            dets = {p % N for p in good_primes(E, 500, N)}
            assert dets == {u for u in range(N) if gcd(u, N) == 1}


def test_scan_flags_serre_number_for_certified_curves():
    seen = 0
    for E in enumerate_family(2):
        v = certify_serre_curve(E)
        if v.verdict != "CertifiedUpToB" or v.serre.M_W > 24:
            continue
        seen += 1
        assert minimal_exceptional_scan(E) == [v.serre.M_W]
    assert seen


def test_scan_flags_only_expected_composites():
    from serre_lab.zmod import is_prime
    rng = random.Random(3)
    for E in rng.sample(list(enumerate_family(2)), 40):
        M = serre_number(E).M_W
        for N in minimal_exceptional_scan(E, bound=24):
            assert is_prime(N) or N in (4, 8, 9, M)
