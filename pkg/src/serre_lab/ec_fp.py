"""Short Weierstrass curves y^2 = x^3 + r x + s over prime fields."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import BadCharacteristic, SerreLabError, SingularCurve
from .zmod import PolyModP, is_prime, pmod, pmul, pscale, psub

# x^3 must fit in int64 for the vectorised character sum
_VECTOR_P_MAX = 2_000_000


@dataclass(frozen=True)
class CurveFp:
    p: int
    r: int
    s: int

    @property
    def disc(self) -> int:
        """-16(4r^3 + 27s^2) reduced mod p."""
        return -16 * (4 * self.r**3 + 27 * self.s**2) % self.p

    def cubic(self) -> list[int]:
        return [self.s, self.r, 0, 1]

    def contains(self, P: "PointFp") -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        return (y * y - (x**3 + self.r * x + self.s)) % self.p == 0


def new_curve(p: int, r: int, s: int) -> CurveFp:
    if p < 5:
        raise BadCharacteristic(f"p={p}: characteristic 2 and 3 are excluded")
    if not is_prime(p):
        raise SerreLabError(f"{p} is not prime")
    E = CurveFp(p, r % p, s % p)
    if E.disc == 0:
        raise SingularCurve(f"y^2 = x^3 + {r}x + {s} is singular mod {p}")
    return E


@lru_cache(maxsize=256)
def quadratic_character(p: int) -> np.ndarray:
    """chi[v] = Legendre symbol (v/p) for v in [0, p)."""
    chi = -np.ones(p, dtype=np.int64)
    chi[0] = 0
    xs = np.arange(1, (p + 1) // 2, dtype=np.int64)
    chi[xs * xs % p] = 1
    chi.setflags(write=False)
    return chi


def trace_of_frobenius(E: CurveFp) -> int:
    """a = p + 1 - #E(F_p) as minus the character sum of the cubic."""
    p = E.p
    if p <= _VECTOR_P_MAX:
        xs = np.arange(p, dtype=np.int64)
        vals = (xs * xs % p * xs + E.r * xs + E.s) % p
        return -int(quadratic_character(p)[vals].sum())
    total = 0
    for x in range(p):
        v = (x**3 + E.r * x + E.s) % p
        if v:
            total += 1 if pow(v, (p - 1) // 2, p) == 1 else -1
    return -total


def traces_mod_p(p: int, rs: np.ndarray) -> np.ndarray:
    """Traces of Frobenius for many (r, s) pairs at one prime.

    `rs` is an (n, 2) integer array; returns an int64 array of length n.
    """
    chi = quadratic_character(p)
    xs = np.arange(p, dtype=np.int64)
    x3 = xs * xs % p * xs % p
    r = np.asarray(rs[:, 0], dtype=np.int64) % p
    s = np.asarray(rs[:, 1], dtype=np.int64) % p
    out = np.empty(len(r), dtype=np.int64)
    chunk = max(1, 4_000_000 // p)
    for lo in range(0, len(r), chunk):
        rr = r[lo:lo + chunk, None]
        ss = s[lo:lo + chunk, None]
        vals = (x3[None, :] + rr * xs[None, :] + ss) % p
        out[lo:lo + chunk] = -chi[vals].sum(axis=1)
    return out


def point_count(E: CurveFp) -> int:
    return E.p + 1 - trace_of_frobenius(E)


# -------------------- group law --------------------

@dataclass(frozen=True)
class PointFp:
    x: Optional[int] = None
    y: Optional[int] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None


INFINITY = PointFp()


def _on_curve(E: CurveFp, *pts: PointFp):
    for P in pts:
        if not E.contains(P):
            raise SerreLabError(f"{P} is not on {E}")


def negate(E: CurveFp, P: PointFp) -> PointFp:
    _on_curve(E, P)
    if P.is_infinity:
        return P
    return PointFp(P.x, -P.y % E.p)


def add(E: CurveFp, P: PointFp, Q: PointFp) -> PointFp:
    _on_curve(E, P, Q)
    return _add(E, P, Q)


def _add(E: CurveFp, P: PointFp, Q: PointFp) -> PointFp:
    p = E.p
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            return INFINITY
        lam = (3 * P.x * P.x + E.r) * pow(2 * P.y, -1, p) % p
    else:
        lam = (Q.y - P.y) * pow(Q.x - P.x, -1, p) % p
    x3 = (lam * lam - P.x - Q.x) % p
    y3 = (lam * (P.x - x3) - P.y) % p
    return PointFp(x3, y3)


def scalar_mul(E: CurveFp, k: int, P: PointFp) -> PointFp:
    _on_curve(E, P)
    if k < 0:
        k, P = -k, negate(E, P)
    R = INFINITY
    while k:
        if k & 1:
            R = _add(E, R, P)
        P = _add(E, P, P)
        k >>= 1
    return R


def points(E: CurveFp) -> list[PointFp]:
    """All points of E(F_p), infinity first (exhaustive; small p only)."""
    p = E.p
    roots: dict[int, list[int]] = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    out = [INFINITY]
    for x in range(p):
        for y in roots.get((x**3 + E.r * x + E.s) % p, []):
            out.append(PointFp(x, y))
    return out


# -------------------- division polynomials --------------------

class DivisionPolys:
    """Lazy table of the x-parts g_n of the division polynomials.

    psi_n = g_n for odd n and psi_n = y * g_n for even n, with y^2 replaced
    by the cubic.  When `mod` is given every g_n is reduced modulo it.
    """

    def __init__(self, E: CurveFp, mod: Optional[list[int]] = None):
        self.E = E
        self.p = E.p
        self.mod = mod
        p, r, s = E.p, E.r, E.s
        self.f = self._red(E.cubic())
        self.f2 = self._red(pmul(self.f, self.f, p))
        self._g = {
            0: [],
            1: [1],
            2: [2],
            3: self._red([(-r * r) % p, 12 * s % p, 6 * r % p, 0, 3]),
            4: self._red(pscale([(-8 * s * s - r**3) % p, (-4 * r * s) % p, (-5 * r * r) % p,
                                 20 * s % p, 5 * r % p, 0, 1], 4, p)),
        }

    def _red(self, a: list[int]) -> list[int]:
        a = [c % self.p for c in a]
        while a and a[-1] == 0:
            a.pop()
        return pmod(a, self.mod, self.p) if self.mod else a

    def _mul(self, *factors: list[int]) -> list[int]:
        out = [1]
        for fac in factors:
            out = self._red(pmul(out, fac, self.p))
        return out

    def g(self, n: int) -> list[int]:
        if n < 0:
            return pscale(self.g(-n), -1, self.p)
        todo = [n]
        while todo:
            k = todo[-1]
            if k in self._g:
                todo.pop()
                continue
            m = k // 2
            need = [m - 2, m - 1, m, m + 1, m + 2] if k % 2 == 0 else [m - 1, m, m + 1, m + 2]
            missing = [j for j in need if j >= 0 and j not in self._g]
            if missing:
                todo.extend(missing)
                continue
            todo.pop()
            self._g[k] = self._compute(k)
        return self._g[n]

    def _compute(self, n: int) -> list[int]:
        g, p = self._g, self.p
        m = n // 2
        if n % 2:
            a = self._mul(g[m + 2], g[m], g[m], g[m])
            b = self._mul(g[m - 1], g[m + 1], g[m + 1], g[m + 1])
            if m % 2 == 0:
                a = self._mul(a, self.f2)
            else:
                b = self._mul(b, self.f2)
            return psub(a, b, p)
        a = self._mul(g[m + 2], g[m - 1], g[m - 1])
        b = self._mul(g[m - 2], g[m + 1], g[m + 1])
        return self._mul(g[m], pscale(psub(a, b, p), pow(2, -1, p), p))


def division_polynomial(E: CurveFp, n: int) -> PolyModP:
    """Polynomial in x whose roots are the x-coordinates of nonzero n-torsion.

    For odd n this is psi_n itself (degree (n^2-1)/2).  For even n it is
    psi_n * y expressed in x alone, i.e. g_n times the cubic; for n = 2 that
    is 2(x^3 + r x + s), matching psi_2^2 = 4(x^3 + r x + s) up to a factor.
    """
    if n < 1:
        raise SerreLabError("n must be >= 1")
    D = DivisionPolys(E)
    g = D.g(n)
    if n % 2 == 0:
        g = pmul(g, D.f, E.p)
    return PolyModP(E.p, tuple(g))
