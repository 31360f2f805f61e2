"""Endomorphism data (a, b, Delta) and the integral Frobenius matrix sigma."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .ec_fp import CurveFp, DivisionPolys, trace_of_frobenius
from .errors import NonElliptic
from .zmod import factorint, pmul, powmod_list, pscale, psub, squarefree_part

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class ConductorSplit:
    f0: int
    dK: int


@dataclass(frozen=True)
class FrobeniusData:
    p: int
    a: int
    b: int
    delta: int
    sigma: Matrix2

    def sigma_mod(self, N: int) -> tuple[int, int, int, int]:
        (w, x), (y, z) = self.sigma
        return (w % N, x % N, y % N, z % N)


def conductor_split(a: int, p: int) -> ConductorSplit:
    """Write a^2 - 4p = f0^2 * dK with dK a fundamental discriminant."""
    D = a * a - 4 * p
    if D >= 0:
        raise NonElliptic(f"a={a}, p={p}: a^2 >= 4p")
    sf = squarefree_part(D).value
    dK = sf if sf % 4 == 1 else 4 * sf
    f0 = 1
    for q, e in factorint(D // dK).items():
        f0 *= q ** (e // 2)
    return ConductorSplit(f0, dK)


def _admissible_lambdas(a: int, p: int, n: int) -> list[int]:
    return [lam for lam in range(n) if (2 * lam - a) % n == 0 and (lam * lam - p) % n == 0]


def frobenius_acts_as_scalar(E: CurveFp, n: int, lam: int) -> bool:
    """True iff the p-power Frobenius acts on E[n] as multiplication by lam.

    Checks (x^p, y^p) = [lam](x, y) modulo the n-torsion polynomial and the
    curve equation.  Pairs (lam, n) that are not roots of the characteristic
    polynomial mod n are rejected up front.
    """
    if n == 1:
        return True
    p = E.p
    a = trace_of_frobenius(E)
    if (2 * lam - a) % n or (lam * lam - p) % n:
        return False
    return _scalar_test(E, n, lam)


def _scalar_test(E: CurveFp, n: int, lam: int) -> bool:
    p = E.p
    base = DivisionPolys(E)
    h = base.g(n)
    if n % 2 == 0:
        h = pmul(h, base.f, p)
    R = DivisionPolys(E, mod=h)
    f = R.f
    k = lam % n
    sign = 1
    if k > n // 2:
        k, sign = n - k, -1
    X = powmod_list([0, 1], p, h, p)
    f_half = powmod_list(f, (p + 1) // 2, h, p)

    gk, gkm, gkp = R.g(k), R.g(k - 1), R.g(k + 1)
    x_minus_X = psub([0, 1], X, p)
    gk2 = R._mul(gk, gk)
    if k % 2:
        lhs = R._mul(x_minus_X, gk2)
        rhs = R._mul(gkm, gkp, f)
        p4 = R._mul(gk2, gk2)
    else:
        lhs = R._mul(x_minus_X, gk2, f)
        rhs = R._mul(gkm, gkp)
        p4 = R._mul(gk2, gk2, R.f2)
    if psub(lhs, rhs, p):
        return False
    left = R._mul(pscale(f_half, 2, p), p4)
    right = R._mul(pscale(R.g(2 * k), sign, p), f)
    return not psub(left, right, p)


def _prime_power_part(E: CurveFp, a: int, q: int, e: int) -> int:
    """Largest q^j (j <= e) on whose torsion Frobenius acts as a scalar."""
    out = 1
    for j in range(1, e + 1):
        n = q**j
        if not any(_scalar_test(E, n, lam) for lam in _admissible_lambdas(a, E.p, n)):
            break
        out = n
    return out


def index_from_trace(E: CurveFp, a: int, level: Optional[int] = None) -> int:
    """The index b, or gcd(b, level) when a level is given."""
    f0 = conductor_split(a, E.p).f0
    b = 1
    for q, e in factorint(f0).items():
        if level is not None:
            e = min(e, factorint(level).get(q, 0))
        if e:
            b *= _prime_power_part(E, a, q, e)
    return b


def frobenius_index(E: CurveFp) -> int:
    """b = [End(E) : Z[Frobenius]], scanning the prime powers dividing f0."""
    return index_from_trace(E, trace_of_frobenius(E))


def sigma_from_data(a: int, b: int, p: int) -> Matrix2:
    D = a * a - 4 * p
    delta, rem = divmod(D, b * b)
    assert rem == 0, (a, b, p)
    dl = delta % 4
    return (((a + b * dl) // 2, b), (b * (delta - dl) // 4, (a - b * dl) // 2))


@lru_cache(maxsize=1 << 18)
def _sigma_cached(p: int, r: int, s: int) -> FrobeniusData:
    E = CurveFp(p, r, s)
    a = trace_of_frobenius(E)
    b = index_from_trace(E, a)
    delta = (a * a - 4 * p) // (b * b)
    return FrobeniusData(p, a, b, delta, sigma_from_data(a, b, p))


def sigma_matrix(E: CurveFp) -> FrobeniusData:
    return _sigma_cached(E.p, E.r, E.s)


def sigma_class_rep(E: CurveFp, N: int, a: Optional[int] = None) -> tuple[int, int, int, int]:
    """A matrix mod N conjugate to sigma(E) mod N.

    The conjugacy class of sigma mod N depends only on a, p and gcd(b, N), so
    only the part of b dividing N is computed.
    """
    if a is None:
        a = trace_of_frobenius(E)
    g = index_from_trace(E, a, level=N)
    (w, x), (y, z) = sigma_from_data(a, g, E.p)
    return (w % N, x % N, y % N, z % N)
