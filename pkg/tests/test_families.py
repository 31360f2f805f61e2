import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from serre_lab.ec_fp import CurveFp, points, scalar_mul
from serre_lab.errors import DegenerateParameter, SingularCurve, SingularInput
from serre_lab.families import (
    RationalCurve, canonical_model, count_family, enumerate_family, es_curve, es_mod4_image,
    es_rational_curve, f_roots_mod_p, is_canonical, s1_partitions, subgroup_H,
    torsion_polynomials, verify_es_identities,
)
from serre_lab.gl2 import det, gl2_order


def test_family_small_counts():
    for X in (1, 2, 3):
        assert count_family(X) == sum(1 for _ in enumerate_family(X))
    assert count_family(2) == 150


def test_family_is_canonical_and_bounded():
    for E in enumerate_family(3):
        assert abs(E.r) <= 9 and abs(E.s) <= 27 and E.height <= 3**6
        assert is_canonical(E.r, E.s)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 4))
def test_canonical_model_scaling(r, s, u):
    if 4 * r**3 + 27 * s * s == 0:
        with pytest.raises(SingularCurve):
            canonical_model(r, s)
        return
    a = canonical_model(r, s)
    assert canonical_model(r * u**4, s * u**6) == a


@settings(max_examples=40)
@given(st.fractions(min_value=-20, max_value=20, max_denominator=12))
def test_es_identities(s):
    try:
        rep = verify_es_identities(s)
    except DegenerateParameter:
        return
    assert rep.ok


def test_es_degenerate():
    for s in (0, Fraction(-3, 4)):
        with pytest.raises(DegenerateParameter):
            es_curve(s)


def test_es_one_model():
    E = es_rational_curve(1)
    assert (E.r, E.s) == (3264, 83232)


def test_torsion_polynomials_singular():
    with pytest.raises(SingularInput):
        torsion_polynomials(3, 1)


@pytest.mark.parametrize("r,s", [(1, 1), (-2, 3), (5, -7), (3264, 83232)])
def test_fE_roots_are_four_torsion_x(r, s):
    # y^2 = x^3 + r x + s  is  y'^2 = 4x^3 - g2 x - g3 with g2 = -4r, g3 = -4s, y' = 2y
    fE, _ = torsion_polynomials(-4 * r, -4 * s)
    for p in (13, 17, 29, 37, 41):
        if (4 * r**3 + 27 * s * s) % p == 0:
            continue
        E = CurveFp(p, r % p, s % p)
        exact4 = {P.x for P in points(E) if not P.is_infinity
                  and scalar_mul(E, 4, P).is_infinity and not scalar_mul(E, 2, P).is_infinity}
        assert exact4 <= set(f_roots_mod_p(fE, p))


def test_s1_partitions_and_H():
    assert len(s1_partitions()) == 4
    H = subgroup_H(0)
    assert H.index == 4
    assert len({tuple(x % 2 for x in g) for g in H.elements}) == gl2_order(2)
    assert {det(g, 4) for g in H.elements} == {1, 3}
    conj = {subgroup_H(k).elements for k in range(4)}
    assert len(conj) == 4


@pytest.mark.parametrize("s", [1, 2, 5])
def test_es_mod4_image(s):
    rep = es_mod4_image(s, B=500)
    assert rep.proper_at_4 and rep.mod2_full
