"""Curves over Q: heights, canonical models, the family C(X), and the
one-parameter family E_s that is exceptional at 4.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd, isqrt, lcm
from typing import Iterator, Sequence

import numpy as np

from .errors import DegenerateParameter, SingularCurve, SingularInput
from .zmod import factorint, primes_up_to, squarefree_part

Number = int | Fraction


@dataclass(frozen=True)
class RationalCurve:
    """y^2 = x^3 + r x + s with integral, twelfth-power-free (r, s)."""

    r: int
    s: int

    @property
    def height(self) -> int:
        return max(abs(self.r) ** 3, self.s**2)

    @property
    def disc(self) -> int:
        return -16 * (4 * self.r**3 + 27 * self.s**2)

    @property
    def disc_sf(self) -> int:
        return squarefree_part(self.disc).value

    def reduce_mod(self, p: int) -> tuple[int, int]:
        return self.r % p, self.s % p

    def is_good(self, p: int) -> bool:
        return p >= 5 and self.disc % p != 0


def canonical_model(r: int, s: int) -> RationalCurve:
    """Divide (r, s) by (u^4, u^6) for the largest integer u possible."""
    if 4 * r**3 + 27 * s**2 == 0:
        raise SingularCurve(f"y^2 = x^3 + {r}x + {s} is singular")
    u = 1
    primes = factorint(r) if s == 0 else factorint(s)
    for q in primes:
        k = 0
        while r % q ** (4 * (k + 1)) == 0 and s % q ** (6 * (k + 1)) == 0:
            k += 1
        u *= q**k
    return RationalCurve(r // u**4, s // u**6)


def is_canonical(r: int, s: int) -> bool:
    return canonical_model(r, s) == RationalCurve(r, s)


def enumerate_family(X: int) -> Iterator[RationalCurve]:
    """All canonical nonsingular (r, s) with |r| <= X^2, |s| <= X^3, lexicographic."""
    R, S = X * X, X**3
    bad = [q for q in primes_up_to(isqrt(X)) if q**4 <= R]
    for r in range(-R, R + 1):
        qs = [q for q in bad if r % q**4 == 0]
        for s in range(-S, S + 1):
            if 4 * r**3 + 27 * s * s == 0:
                continue
            if any(s % q**6 == 0 for q in qs):
                continue
            yield RationalCurve(r, s)


def count_family(X: int) -> int:
    """|C(X)| computed row by row with numpy; agrees with enumerate_family."""
    R, S = X * X, X**3
    ss = np.arange(-S, S + 1, dtype=np.int64)
    bad = [q for q in primes_up_to(isqrt(X)) if q**4 <= R]
    total = 0
    for r in range(-R, R + 1):
        keep = np.ones(len(ss), dtype=bool)
        for q in bad:
            if r % q**4 == 0:
                keep &= ss % q**6 != 0
        n = int(keep.sum())
        # singular pairs: r = -3k^2, s = 2k^3
        if r <= 0 and r % 3 == 0 and isqrt(-r // 3) ** 2 == -r // 3:
            k = isqrt(-r // 3)
            for sv in {2 * k**3, -2 * k**3}:
                if abs(sv) <= S and keep[sv + S]:
                    n -= 1
        total += n
    return total


def zeta_value(s: int, terms: int = 100000) -> float:
    return float(sum(1.0 / n**s for n in range(1, terms)))


# -------------------- exact rational polynomials --------------------

@dataclass(frozen=True)
class RationalPoly:
    """Exact polynomial over Q, lowest degree first, trailing zeros stripped."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def divmod_linear(self, root: Fraction) -> tuple["RationalPoly", Fraction]:
        """Synthetic division by (t - root): quotient and remainder."""
        out = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        rem = out.pop()
        return RationalPoly(tuple(reversed(out))), rem

    def reduce_mod(self, p: int) -> list[int]:
        out = []
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise ValueError(f"denominator divisible by {p}")
            out.append(c.numerator * pow(c.denominator, -1, p) % p)
        while out and out[-1] == 0:
            out.pop()
        return out


def torsion_polynomials(g2: Number, g3: Number) -> tuple[RationalPoly, RationalPoly]:
    """(f_E, f_1E) for y^2 = 4x^3 - g2 x - g3."""
    g2, g3 = Fraction(g2), Fraction(g3)
    if g2**3 - 27 * g3**2 == 0:
        raise SingularInput(f"g2={g2}, g3={g3} gives a singular curve")
    fE = RationalPoly((
        (g2**3 - 32 * g3**2) / 64,
        -g2 * g3 / 4,
        -5 * g2**2 / 16,
        -5 * g3,
        -5 * g2 / 4,
        Fraction(0),
        Fraction(1),
    ))
    f1 = RationalPoly((
        81 * g2**4 / 256,
        -37 * g2**3 / 16 + 108 * g3**2,
        27 * g2**2 / 8,
        3 * g2,
        Fraction(1),
    ))
    return fE, f1


# -------------------- the family E_s --------------------

@dataclass(frozen=True)
class EsCurve:
    s: Fraction
    A: Fraction
    B: Fraction

    @property
    def g2(self) -> Fraction:
        return -self.A

    @property
    def g3(self) -> Fraction:
        return -self.B

    @property
    def disc(self) -> Fraction:
        """g2^3 - 27 g3^2 for the model y^2 = 4x^3 - g2 x - g3."""
        return self.g2**3 - 27 * self.g3**2

    @property
    def j(self) -> Fraction:
        return 1728 * self.g2**3 / self.disc

    def short_model(self) -> tuple[Fraction, Fraction]:
        """(r', s') with y^2 = x^3 + r' x + s', via y -> 2y."""
        return self.A / 4, self.B / 4


def _q(s: Number) -> Fraction:
    return 16 * Fraction(s) ** 2 + 56 * Fraction(s) + 81


def es_curve(s: Number) -> EsCurve:
    s = Fraction(s)
    if s == 0 or _q(s) == 0 or 4 * s + 3 == 0:
        raise DegenerateParameter(f"s={s} is degenerate")
    q = _q(s)
    return EsCurve(s, q / (3 * s), q * q * (4 * s - 1) / (864 * s * s))


def es_rational_curve(s: Number) -> RationalCurve:
    """Integral canonical short model of E_s."""
    r1, s1 = es_curve(s).short_model()
    # smallest u with u^4 r1 and u^6 s1 integral
    u = 1
    for q in set(factorint(r1.denominator)) | set(factorint(s1.denominator)):
        k = 0
        while (r1 * q ** (4 * k)).denominator % q == 0 or (s1 * q ** (6 * k)).denominator % q == 0:
            k += 1
        u *= q**k
    r, s_ = r1 * u**4, s1 * u**6
    assert r.denominator == 1 and s_.denominator == 1
    return canonical_model(int(r), int(s_))


@dataclass(frozen=True)
class EsIdentityReport:
    s: Fraction
    A: Fraction
    B: Fraction
    disc: Fraction
    j: Fraction
    factor_root: Fraction
    f1_divisible: bool
    disc_matches: bool
    j_matches: bool

    @property
    def ok(self) -> bool:
        return self.f1_divisible and self.disc_matches and self.j_matches


def verify_es_identities(s: Number) -> EsIdentityReport:
    E = es_curve(s)
    s = E.s
    _, f1 = torsion_polynomials(E.g2, E.g3)
    root = -(27 + Fraction(56, 3) * s + Fraction(16, 3) * s * s)
    _, rem = f1.divmod_linear(root)
    disc = -(_q(s) ** 3) * (4 * s + 3) ** 4 / (27648 * s**4)
    j = Fraction(1769472) * s / (4 * s + 3) ** 4
    return EsIdentityReport(s, E.A, E.B, E.disc, E.j, root, rem == 0, E.disc == disc, E.j == j)


# -------------------- the index-4 subgroup H of GL2(Z/4) --------------------

def _lines_mod4() -> list[frozenset]:
    pts = [v for v in product(range(4), repeat=2) if v[0] % 2 or v[1] % 2]
    lines = {frozenset({v, ((-v[0]) % 4, (-v[1]) % 4)}) for v in pts}
    return sorted(lines, key=sorted)


def _adds(l1, l2, l3) -> bool:
    return any(((u[0] + v[0]) % 4, (u[1] + v[1]) % 4) in l3 for u in l1 for v in l2)


def _is_additive(triple) -> bool:
    a, b, c = triple
    return _adds(a, b, c) or _adds(a, c, b) or _adds(b, c, a)


def s1_partitions() -> list[frozenset]:
    """Splittings of the six lines into two triples, one of which is additive."""
    lines = _lines_mod4()
    out = set()
    for tri in combinations(lines, 3):
        rest = tuple(l for l in lines if l not in tri)
        if _is_additive(tri) or _is_additive(rest):
            out.add(frozenset({frozenset(tri), frozenset(rest)}))
    return sorted(out, key=lambda P: sorted(sorted(sorted(l) for l in t) for t in P))


def _act_line(g, line) -> frozenset:
    a, b, c, d = g
    return frozenset(((a * x + b * y) % 4, (c * x + d * y) % 4) for x, y in line)


@lru_cache(maxsize=8)
def subgroup_H(which: int = 0):
    """Preimage in GL2(Z/4) of the stabilizer of one element of S1."""
    from .gl2 import SubgroupModN, gl2_elements

    r = s1_partitions()[which]
    elems = []
    for g in gl2_elements(4):
        image = frozenset(frozenset(_act_line(g, l) for l in t) for t in r)
        if image == r:
            elems.append(g)
    return SubgroupModN(4, frozenset(elems))


@dataclass(frozen=True)
class EsMod4Report:
    s: Fraction
    r: int
    s_model: int
    prime_bound: int
    primes_used: int
    classes_hit: int
    inside_H: bool
    H_index: int
    mod2_full: bool
    raw_closure_index: int

    @property
    def proper_at_4(self) -> bool:
        return self.inside_H and self.H_index > 1


def es_mod4_image(s: Number, B: int = 500) -> EsMod4Report:
    """Sample Frobenius classes mod 4 for E_s and compare with H.

    Sampled matrices are class representatives, so the meaningful test is
    whether every sampled class meets a conjugate of H (all conjugates of H
    are listed from the S1 orbit).
    """
    from .gl2 import class_table, subgroup_closure
    from .serre import sampled_sigmas, certify_level

    E = es_rational_curve(s)
    sig = sampled_sigmas(E, 4, B)
    T = class_table(4)
    hit = sorted({T.class_of(g) for g in sig})
    inside = False
    index = 0
    for k in range(len(s1_partitions())):
        H = subgroup_H(k)
        Hcls = {T.class_of(g) for g in H.elements}
        if set(hit) <= Hcls:
            inside, index = True, H.index
            break
    cert2 = certify_level(E, 2, B)
    raw = subgroup_closure(sig, 4)
    return EsMod4Report(Fraction(s), E.r, E.s, B, len(sig), len(hit), inside, index,
                        cert2.status == "SurjectiveCertified", raw.index)


def f_roots_mod_p(fE: RationalPoly, p: int) -> list[int]:
    c = fE.reduce_mod(p)
    out = []
    for x in range(p):
        acc = 0
        for a in reversed(c):
            acc = (acc * x + a) % p
        if acc == 0:
            out.append(x)
    return out
