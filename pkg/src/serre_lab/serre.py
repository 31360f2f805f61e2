"""Serre numbers, surjectivity certificates from Frobenius data, and the
Serre-curve certifier.

A sampled matrix sigma_p mod N is only a representative of the Frobenius
conjugacy class, so every test here is a class function.  The level
certificates used:

* l = 2, 3: no maximal subgroup of GL2(F_l) meets every sampled class.
* l >= 5: Serre's three-element criterion on (trace, det); the determinant
  is onto by the Weil pairing.
* l^(j+1) from l^j: the conjugation span of (sigma^k - I)/l^j, with k the
  order of sigma mod l^j, fills M2(F_l).  The image then contains the whole
  kernel of reduction.
* other prime powers inherit from l, 8 or 9 (no other prime power can be
  minimal exceptional); composite N is certified when its prime-power parts
  are and M_W does not divide N.  If M_W | N the image lies in the Serre
  subgroup, which is proper.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Optional

from .ec_fp import CurveFp, trace_of_frobenius
from .families import RationalCurve
from .frobenius import sigma_class_rep
from .gl2 import (
    ENUMERATION_BOUND, Mat, class_table, det, epsilon_char, gl2_elements, identity, inverse,
    mul, order_of, power, real_characters, subgroup_closure, trace,
)
from .zmod import SquarefreeInt, factorint, kronecker, lcm, primes_up_to, squarefree_part

DEFAULT_PRIME_BOUND = 37
DEFAULT_SAMPLE_BOUND = 500

SURJECTIVE = "SurjectiveCertified"
PROPER = "ProperSubgroup"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SerreNumber:
    W: SquarefreeInt
    D_W: int
    M_W: int


def serre_number_of(W: int) -> SerreNumber:
    sf = SquarefreeInt(W)
    D = abs(W) if W % 4 == 1 else 4 * abs(W)
    return SerreNumber(sf, D, lcm(2, D))


def serre_number(E: RationalCurve) -> SerreNumber:
    return serre_number_of(squarefree_part(E.disc).value)


def serre_subgroup_contains(W, g: Mat) -> bool:
    W = int(W.value if isinstance(W, SquarefreeInt) else W)
    M = serre_number_of(W).M_W
    return kronecker(W, det(g, M)) * epsilon_char(g, M) == 1


# -------------------- Frobenius samples of a rational curve --------------------

@lru_cache(maxsize=1 << 20)
def _trace(p: int, r: int, s: int) -> int:
    return trace_of_frobenius(CurveFp(p, r, s))


@lru_cache(maxsize=1 << 20)
def _sigma_rep(p: int, r: int, s: int, N: int) -> Mat:
    return sigma_class_rep(CurveFp(p, r, s), N, _trace(p, r, s))


def good_primes(E: RationalCurve, B: int, N: int = 1) -> list[int]:
    return [p for p in primes_up_to(B) if p >= 5 and E.disc % p and N % p]


def frobenius_trace(E: RationalCurve, p: int) -> int:
    return _trace(p, E.r % p, E.s % p)


def frobenius_sigma(E: RationalCurve, p: int, N: int) -> Mat:
    return _sigma_rep(p, E.r % p, E.s % p, N)


def sampled_sigmas(E: RationalCurve, N: int, B: int) -> list[Mat]:
    return [frobenius_sigma(E, p, N) for p in good_primes(E, B, N)]


# -------------------- group-theoretic tables --------------------

@lru_cache(maxsize=8)
def maximal_class_sets(N: int) -> tuple[frozenset, ...]:
    """Class-index sets of the maximal subgroups of GL2(Z/N) (N = 2, 3).

    Every maximal subgroup of GL2(F_2) and GL2(F_3) is two-generated, so
    closures of pairs find them all.
    """
    T = class_table(N)
    G = gl2_elements(N)
    subs = set()
    for x, y in combinations(G, 2):
        H = subgroup_closure([x, y], N).elements
        if len(H) < len(G):
            subs.add(H)
    for x in G:
        H = subgroup_closure([x], N).elements
        if len(H) < len(G):
            subs.add(H)
    maximal = [H for H in subs if not any(H < K for K in subs)]
    return tuple(sorted({frozenset(T.class_of(g) for g in H) for H in maximal}, key=sorted))


@lru_cache(maxsize=8)
def _conjugators(ell: int) -> tuple[Mat, ...]:
    return gl2_elements(ell)


def _rank_mod(vectors: Iterable[tuple[int, ...]], ell: int) -> int:
    rows: list[list[int]] = []
    for v in vectors:
        v = [x % ell for x in v]
        for row in rows:
            lead = next(i for i, x in enumerate(row) if x)
            if v[lead]:
                c = v[lead] * pow(row[lead], -1, ell) % ell
                v = [(a - c * b) % ell for a, b in zip(v, row)]
        if any(v):
            rows.append(v)
            # keep rows in echelon form by leading index
            rows.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return len(rows)


def kernel_coordinate(sig: Mat, ell: int, j: int) -> Mat:
    """(sigma^k - I)/ell^j mod ell, where k is the order of sigma mod ell^j."""
    lo, hi = ell**j, ell ** (j + 1)
    k = order_of(tuple(x % lo for x in sig), lo)
    g = power(tuple(x % hi for x in sig), k, hi)
    I = identity(hi)
    return tuple(((a - b) // lo) % ell for a, b in zip(g, I))


def conjugation_span(Xs: Iterable[Mat], ell: int) -> int:
    vecs = set()
    for X in Xs:
        for g in _conjugators(ell):
            vecs.add(mul(mul(g, X, ell), inverse(g, ell), ell))
    return _rank_mod(vecs, ell)


def serre_three_conditions(pairs: Iterable[tuple[int, int]], ell: int) -> tuple[bool, bool, bool]:
    """Which of Serre's three element types occur among (trace, det) mod ell."""
    i = ii = iii = False
    for t, d in pairs:
        t, d = t % ell, d % ell
        u = t * t * pow(d, -1, ell) % ell
        if u not in (0, 1, 2, 4) and (u * u - 3 * u + 1) % ell:
            i = True
        disc = (t * t - 4 * d) % ell
        if t and disc:
            if kronecker(disc, ell) == 1:
                ii = True
            else:
                iii = True
    return i, ii, iii


# -------------------- certificates --------------------

@dataclass(frozen=True)
class Certificate:
    N: int
    status: str
    generators_used: int
    prime_bound: int
    index: Optional[int] = None
    method: str = ""
    closure_index: Optional[int] = None

    @property
    def certified(self) -> bool:
        return self.status == SURJECTIVE


class _PrimePowerCert:
    """Incremental certificate for one prime power level ell^e."""

    def __init__(self, ell: int, e: int):
        self.ell, self.e = ell, e
        self.N = ell**e
        self.used = 0
        self.done = False
        self.hit: set[int] = set()
        self.flags = [False, False, False]
        self.kx: list[list[Mat]] = [[] for _ in range(e)]
        self.span_full = [False] * e
        self.lifts_needed = e if ell in (2, 3) else 1

    def feed(self, E: RationalCurve, p: int):
        if self.done:
            return
        self.used += 1
        ell = self.ell
        if ell >= 5:
            a = frobenius_trace(E, p)
            got = serre_three_conditions([(a, p)], ell)
            self.flags = [x or y for x, y in zip(self.flags, got)]
            self.done = all(self.flags)
            return
        base_ok = self._feed_base(E, p)
        for j in range(1, self.lifts_needed):
            if not self.span_full[j]:
                sig = frobenius_sigma(E, p, ell ** (j + 1))
                self.kx[j].append(kernel_coordinate(sig, ell, j))
        if base_ok:
            for j in range(1, self.lifts_needed):
                if not self.span_full[j] and conjugation_span(self.kx[j], ell) == 4:
                    self.span_full[j] = True
                    self.kx[j] = []
            self.done = all(self.span_full[1:self.lifts_needed])

    def _feed_base(self, E, p) -> bool:
        ell = self.ell
        if not self.span_full[0]:
            T = class_table(ell)
            self.hit.add(T.class_of(frobenius_sigma(E, p, ell)))
            if all(not (self.hit <= M) for M in maximal_class_sets(ell)):
                self.span_full[0] = True
        return self.span_full[0]


def _level_plan(N: int) -> list[tuple[int, int]]:
    """Prime-power levels whose certification implies that of each part of N."""
    plan = []
    for ell, e in factorint(N).items():
        if ell >= 5:
            plan.append((ell, 1))
        elif ell == 2:
            plan.append((2, min(e, 3)))
        else:
            plan.append((3, min(e, 2)))
    return plan


def certify_levels(E: RationalCurve, levels: list[tuple[int, int]], B: int) -> dict:
    """Run prime-power certificates over good primes <= B, stopping early."""
    certs = {(l, e): _PrimePowerCert(l, e) for l, e in levels}
    for p in primes_up_to(B):
        if p < 5 or E.disc % p == 0:
            continue
        if all(c.done for c in certs.values()):
            break
        for c in certs.values():
            if not c.done and c.ell != p:
                c.feed(E, p)
    return certs


def certify_level(E: RationalCurve, N: int, B: int = DEFAULT_SAMPLE_BOUND,
                  with_closure: bool = False) -> Certificate:
    """Surjectivity certificate for the image of Galois mod N."""
    if N < 2:
        return Certificate(N, SURJECTIVE, 0, B, 1, "trivial level")
    sn = serre_number(E)
    closure_index = None
    if with_closure and N <= ENUMERATION_BOUND:
        closure_index = subgroup_closure(sampled_sigmas(E, N, B), N).index
    if N % sn.M_W == 0:
        return Certificate(N, PROPER, 0, B, None,
                           f"contained in the Serre subgroup at M_W={sn.M_W}", closure_index)
    certs = certify_levels(E, _level_plan(N), B)
    used = max((c.used for c in certs.values()), default=0)
    if all(c.done for c in certs.values()):
        method = "prime-power parts certified" + ("; M_W does not divide N" if len(certs) > 1 else "")
        return Certificate(N, SURJECTIVE, used, B, 1, method, closure_index)
    return Certificate(N, INCONCLUSIVE, used, B, None, "criteria not met by samples", closure_index)


def surjectivity_certificate(E: RationalCurve, N: int, B: int = DEFAULT_SAMPLE_BOUND) -> Certificate:
    return certify_level(E, N, B, with_closure=True)


def index_two_excluded_at_8(E: RationalCurve, B: int = DEFAULT_SAMPLE_BOUND) -> bool:
    """True when every index-2 subgroup of GL2(Z/8) misses some Frobenius class.

    Index-2 subgroups are kernels of the seven nontrivial characters
    delta(det) * eps^e; a sample with value -1 excludes the kernel.
    """
    chars = real_characters(8)[1:]
    alive = list(range(len(chars)))
    for p in good_primes(E, B, 8):
        sig = frobenius_sigma(E, p, 8)
        alive = [i for i in alive if chars[i](sig) == 1]
        if not alive:
            return True
    return False


# -------------------- Serre-curve verdicts --------------------

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass(frozen=True)
class SerreVerdict:
    r: int
    s: int
    conditions: dict
    verdict: str
    witness: str
    prime_bound: int
    sample_bound: int
    serre: SerreNumber = field(repr=False)


def rational_two_torsion(E: RationalCurve) -> bool:
    """Does x^3 + r x + s have an integer (hence rational) root?"""
    if E.s == 0:
        return True
    from .zmod import divisors
    return any(x**3 + E.r * x + E.s == 0 for d in divisors(abs(E.s)) for x in (d, -d))


def certify_serre_curve(E: RationalCurve, B: int = DEFAULT_PRIME_BOUND,
                        sample_bound: int = DEFAULT_SAMPLE_BOUND,
                        exhaustive: bool = False) -> SerreVerdict:
    """Check the four sufficient conditions for E to be a Serre curve.

    Condition 1 is checked only for primes l <= B.  Conditions are evaluated
    cheapest first; unless `exhaustive`, the rest are left unknown after the
    first failure.
    """
    sn = serre_number(E)
    cond = {1: UNKNOWN, 2: UNKNOWN, 3: UNKNOWN, 4: UNKNOWN}
    witness = ""
    if sn.W.value == 1:
        return SerreVerdict(E.r, E.s, {1: FAIL, 2: UNKNOWN, 3: UNKNOWN, 4: FAIL}, "NotSerre",
                            "square discriminant: image mod 2 lies in A3", B, sample_bound, sn)
    if rational_two_torsion(E):
        return SerreVerdict(E.r, E.s, {1: FAIL, 2: UNKNOWN, 3: UNKNOWN, 4: UNKNOWN}, "NotSerre",
                            "rational 2-torsion: image mod 2 lies in a Borel", B, sample_bound, sn)

    cond[4] = PASS if any(q > 3 for q in factorint(sn.M_W)) else FAIL
    order = [4, 1, 2, 3]

    def run(k):
        if k == 4:
            return cond[4] == PASS
        if k == 1:
            levels = [(l, 1) for l in primes_up_to(B)]
            return all(c.done for c in certify_levels(E, levels, sample_bound).values())
        if k == 2:
            certs = certify_levels(E, [(2, 2), (3, 2)], sample_bound)
            return all(c.done for c in certs.values())
        return index_two_excluded_at_8(E, sample_bound)

    for k in order:
        ok = run(k)
        cond[k] = PASS if ok else FAIL
        if not ok and not exhaustive:
            break
    if all(v == PASS for v in cond.values()):
        verdict = "CertifiedUpToB"
    else:
        verdict = "Unknown"
        witness = "first failing condition: " + str(next(k for k in order if cond[k] == FAIL))
    return SerreVerdict(E.r, E.s, cond, verdict, witness, B, sample_bound, sn)


def minimal_exceptional_scan(E: RationalCurve, bound: int = 24,
                             B: int = DEFAULT_SAMPLE_BOUND) -> list[int]:
    """Levels N <= bound not certified surjective whose proper divisors are."""
    if bound > ENUMERATION_BOUND:
        from .errors import LevelTooLarge
        raise LevelTooLarge(f"bound {bound} exceeds {ENUMERATION_BOUND}")
    ok = {1: True}
    flagged = []
    for N in range(2, bound + 1):
        ok[N] = certify_level(E, N, B).certified
        if not ok[N] and all(ok[d] for d in range(1, N) if N % d == 0):
            flagged.append(N)
    return flagged
