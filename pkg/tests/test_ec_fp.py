from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from serre_lab.ec_fp import (
    INFINITY, CurveFp, add, division_polynomial, negate, new_curve, point_count, points,
    scalar_mul, trace_of_frobenius, traces_mod_p,
)
from serre_lab.errors import SerreLabError
from serre_lab.zmod import primes_up_to

import numpy as np

small_primes = st.sampled_from([p for p in primes_up_to(60) if p >= 5])


def curves(p_strategy=small_primes):
    @st.composite
    def _c(draw):
        p = draw(p_strategy)
        r, s = draw(st.integers(0, p - 1)), draw(st.integers(0, p - 1))
        if (4 * r**3 + 27 * s * s) % p == 0:
            r, s = 1, 1 if (4 + 27) % p else 2
        return CurveFp(p, r, s)
    return _c()


def naive_count(E):
    p = E.p
    return 1 + sum(1 for x, y in product(range(p), repeat=2)
                   if (y * y - x**3 - E.r * x - E.s) % p == 0)


@given(curves())
def test_trace_matches_naive_count(E):
    assert point_count(E) == naive_count(E)
    a = trace_of_frobenius(E)
    assert a * a < 4 * E.p + 1  # Hasse


@given(curves())
def test_quadratic_twist_negates_trace(E):
    p = E.p
    n = next(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1)
    tw = CurveFp(p, E.r * n * n % p, E.s * n**3 % p)
    assert trace_of_frobenius(tw) == -trace_of_frobenius(E)


def test_vectorized_traces_agree():
    p = 31
    rs = np.array([(r, s) for r in range(p) for s in range(p)
                   if (4 * r**3 + 27 * s * s) % p], dtype=np.int64)
    tr = traces_mod_p(p, rs)
    for (r, s), a in zip(rs[:60], tr[:60]):
        assert a == trace_of_frobenius(CurveFp(p, int(r), int(s)))


def test_new_curve_errors():
    with pytest.raises(SerreLabError):
        new_curve(5, 0, 0)
    with pytest.raises(SerreLabError):
        new_curve(3, 1, 1)


@settings(max_examples=30)
@given(curves())
def test_group_law(E):
    pts = points(E)
    assert len(pts) == point_count(E)
    P, Q = pts[len(pts) // 2], pts[-1]
    assert add(E, P, Q) == add(E, Q, P)
    assert add(E, P, negate(E, P)) == INFINITY
    assert scalar_mul(E, len(pts), P) == INFINITY


@settings(max_examples=20)
@given(curves(st.sampled_from([5, 7, 11, 13])), st.integers(2, 5))
def test_division_polynomial_roots_are_torsion_x(E, n):
    # roots of psi_n (n odd) or psi_n / y (n even) are x-coordinates of n-torsion points
    psi = division_polynomial(E, n)
    torsion_x = {P.x for P in points(E)
                 if not P.is_infinity and scalar_mul(E, n, P).is_infinity
                 and (n % 2 or P.y != 0)}
    roots = set(psi.roots())
    assert torsion_x <= roots
