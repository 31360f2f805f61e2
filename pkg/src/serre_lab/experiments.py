"""Runnable experiments: Omega_C(p) two ways, Deuring counts, the
Chebotarev mean square, epsilon_N and Serre censuses, and the Eichler mass.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

from .ec_fp import CurveFp
from .errors import EmptyFamily, InadmissibleOrder, SerreLabError
from .families import RationalCurve, enumerate_family
from .frobenius import index_from_trace, sigma_from_data
from .gl2 import ClassDescriptor, class_table, det, gl2_order, trace
from .qforms import class_number, unit_count, valid_conductors, weighted_orbit_count
from .serre import (
    DEFAULT_PRIME_BOUND, DEFAULT_SAMPLE_BOUND, certify_level, certify_serre_curve,
    frobenius_sigma, frobenius_trace, good_primes,
)
from .zmod import euler_phi, is_prime, omega, primes_up_to

# -------------------- Omega_C(p) --------------------


@dataclass(frozen=True)
class OmegaReport:
    p: int
    N: int
    class_index: int
    descriptor: ClassDescriptor
    enumerated: Optional[int]
    formula: int
    main_term: Fraction

    @property
    def residual(self) -> int:
        count = self.formula if self.enumerated is None else self.enumerated
        return count - round(self.main_term)


def class_index_of(desc: ClassDescriptor) -> int:
    for k, c in enumerate(class_table(desc.N).classes):
        if c.descriptor == desc:
            return k
    raise SerreLabError(f"{desc} is not a class descriptor")


def _check_p(p: int):
    if p < 5 or not is_prime(p):
        raise SerreLabError(f"p={p} must be a prime >= 5")


def _orbit_reps(p: int):
    """(r, s, orbit size) for F_p^* orbits (r, s) -> (u^4 r, u^6 s) of nonsingular pairs."""
    seen = bytearray(p * p)
    u4 = sorted({pow(u, 4, p) * p + pow(u, 6, p) for u in range(1, p)})
    pairs = [(x // p, x % p) for x in u4]
    for r in range(p):
        for s in range(p):
            if seen[r * p + s] or (4 * r**3 + 27 * s * s) % p == 0:
                continue
            orbit = {(a * r % p, b * s % p) for a, b in pairs}
            for x, y in orbit:
                seen[x * p + y] = 1
            yield r, s, len(orbit)


@lru_cache(maxsize=4096)
def omega_counts(p: int, N: int) -> tuple[int, ...]:
    """|Omega_C(p)| for every class C of GL2(Z/N), by scanning all (r, s)."""
    _check_p(p)
    T = class_table(N)
    counts = [0] * len(T)
    for r, s, size in _orbit_reps(p):
        E = CurveFp(p, r, s)
        from .ec_fp import trace_of_frobenius
        a = trace_of_frobenius(E)
        g = index_from_trace(E, a, level=N)
        counts[T.class_of(sigma_from_data(a, g, p))] += size
    return tuple(counts)


def omega_enumerate(p: int, desc: ClassDescriptor) -> int:
    return omega_counts(p, desc.N)[class_index_of(desc)]


def omega_formula(p: int, desc: ClassDescriptor) -> int:
    """Class-number evaluation of |Omega_C(p)|."""
    _check_p(p)
    N, M, lam = desc.N, desc.M, desc.lam
    n = N // M
    if (desc.det - p) % N:
        return 0
    total = Fraction(0)
    # t = 2 lam + M T ranges over |t| < 2 sqrt(p)
    tmax = isqrt(4 * p)
    Tlo = (-tmax - 2 * lam) // M - 1
    Thi = (tmax - 2 * lam) // M + 1
    for T in range(Tlo, Thi + 1):
        if n > 1 and (T - desc.Tbar) % n:
            continue
        t = 2 * lam + M * T
        if t * t >= 4 * p:
            continue
        num = p - lam * lam - M * lam * T
        if num % (M * M):
            continue
        D = num // (M * M)
        if n > 1 and (D - desc.Dbar) % n:
            continue
        disc = T * T - 4 * D
        for f in valid_conductors(disc):
            if gcd(f, n) == 1:
                total += weighted_orbit_count(T, D, f)
    out = total * (p - 1) / 2
    assert out.denominator == 1, (p, desc, out)
    return int(out)


def main_term(p: int, desc: ClassDescriptor) -> Fraction:
    size = class_table(desc.N).classes[class_index_of(desc)].size
    return Fraction(size * euler_phi(desc.N) * p * p, gl2_order(desc.N))


def omega_report(p: int, N: int, enumerate_: bool = True) -> list[OmegaReport]:
    """Rows for the classes with det = p mod N."""
    T = class_table(N)
    counts = omega_counts(p, N) if enumerate_ else None
    rows = []
    for k, c in enumerate(T.classes):
        d = c.descriptor
        if (d.det - p) % N:
            continue
        rows.append(OmegaReport(p, N, k, d, counts[k] if counts else None,
                                omega_formula(p, d), main_term(p, d)))
    return rows


# -------------------- Deuring --------------------

def deuring_count(p: int, t: int, delta_O: int) -> int:
    """Number of (r, s) with trace t whose endomorphism ring has discriminant delta_O."""
    _check_p(p)
    D = t * t - 4 * p
    if D >= 0:
        raise InadmissibleOrder(f"t={t}: t^2 >= 4p")
    if delta_O >= 0 or delta_O % 4 not in (0, 1) or D % delta_O:
        raise InadmissibleOrder(f"{delta_O} does not contain discriminant {D}")
    q = D // delta_O
    if isqrt(q) ** 2 != q:
        raise InadmissibleOrder(f"{delta_O} does not contain discriminant {D}")
    from .qforms import order_conductor
    if t == 0 and order_conductor(delta_O) % p == 0:
        raise InadmissibleOrder("p divides the conductor of a supersingular order")
    return (p - 1) * class_number(delta_O) // unit_count(delta_O)


def admissible_orders(p: int, t: int) -> list[int]:
    D = t * t - 4 * p
    return [D // (f * f) for f in valid_conductors(D)]


def trace_end_census(p: int) -> Counter:
    """#{(r, s)} keyed by (trace, End discriminant), by direct enumeration."""
    from .ec_fp import trace_of_frobenius
    out: Counter = Counter()
    for r, s, size in _orbit_reps(p):
        E = CurveFp(p, r, s)
        a = trace_of_frobenius(E)
        b = index_from_trace(E, a)
        out[(a, (a * a - 4 * p) // (b * b))] += size
    return out


# -------------------- Chebotarev mean square --------------------

@dataclass(frozen=True)
class PiCount:
    count: int
    good: int
    skipped: tuple[int, ...]


def _class_of(E: RationalCurve, p: int, N: int) -> int:
    return class_table(N).class_of(frobenius_sigma(E, p, N)) if N > 1 else 0


def pi_E_count(E: RationalCurve, X: int, N: int, desc: ClassDescriptor) -> PiCount:
    """Primes 5 <= p <= X, p not dividing N * disc, with Frobenius in the class."""
    k = class_index_of(desc)
    primes = primes_up_to(X)
    good = [p for p in primes if p >= 5 and E.disc % p and N % p]
    skipped = tuple(p for p in primes if p not in set(good))
    count = sum(1 for p in good if _class_of(E, p, N) == k)
    return PiCount(count, len(good), skipped)


def pi_mod(X: int, N: int, d: int) -> int:
    return sum(1 for p in primes_up_to(X) if (p - d) % N == 0)


@dataclass(frozen=True)
class MeanSquareReport:
    X: int
    N: int
    class_index: int
    descriptor: ClassDescriptor
    family_size: int
    mean_square: Fraction
    sampled: bool
    seed: Optional[int]

    @property
    def bound_ratio(self) -> Fraction:
        return self.mean_square / (self.N**8 * self.X)


def _deviation_sq(E: RationalCurve, X: int, N: int, k: int, expected: Fraction) -> Fraction:
    primes = [p for p in primes_up_to(X) if p >= 5 and E.disc % p and N % p]
    c = sum(1 for p in primes if _class_of(E, p, N) == k)
    return (c - expected) ** 2


def _chunk_worker(args):
    curves, X, N, k, expected = args
    return sum((_deviation_sq(E, X, N, k, expected) for E in curves), Fraction(0))


def chebotarev_mean_square(X: int, N: int, desc: ClassDescriptor,
                           family: Iterable[RationalCurve], cap: int = 100_000,
                           seed: int = 0, sample_size: Optional[int] = None,
                           workers: int = 1) -> MeanSquareReport:
    curves = list(family)
    if not curves:
        raise EmptyFamily("the family is empty")
    sampled = False
    if sample_size is not None or len(curves) > cap:
        m = min(sample_size or cap, len(curves))
        curves = random.Random(seed).sample(curves, m)
        sampled = True
    k = class_index_of(desc)
    size = class_table(N).classes[k].size
    expected = Fraction(size * euler_phi(N), gl2_order(N)) * pi_mod(X, N, desc.det)
    chunks = [curves[i::max(workers, 1)] for i in range(max(workers, 1))]
    tasks = [(c, X, N, k, expected) for c in chunks]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_chunk_worker, tasks))
    else:
        parts = [_chunk_worker(t) for t in tasks]
    total = sum(parts, Fraction(0))
    return MeanSquareReport(X, N, k, desc, len(curves), total / len(curves), sampled,
                            seed if sampled else None)


# -------------------- censuses --------------------

@dataclass(frozen=True)
class CensusReport:
    X: int
    total: int
    certified_serre: int
    failures_by_condition: dict
    prime_bound: int
    not_serre: int = 0

    @property
    def fraction(self) -> float:
        return self.certified_serre / self.total if self.total else 0.0


def _census_chunk(args):
    curves, B, sample_bound = args
    out = []
    for r, s in curves:
        v = certify_serre_curve(RationalCurve(r, s), B, sample_bound)
        out.append((v.verdict, tuple(c for c, st in v.conditions.items() if st == "fail")))
    return out


def serre_census(X: int, B: int = DEFAULT_PRIME_BOUND,
                 sample_bound: int = DEFAULT_SAMPLE_BOUND,
                 curves: Optional[Sequence[RationalCurve]] = None,
                 workers: int = 1) -> CensusReport:
    pairs = [(E.r, E.s) for E in (enumerate_family(X) if curves is None else curves)]
    workers = max(1, workers)
    step = -(-len(pairs) // workers) if pairs else 1
    tasks = [(pairs[i:i + step], B, sample_bound) for i in range(0, len(pairs), step)]
    if workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_census_chunk, tasks))
    else:
        parts = [_census_chunk(t) for t in tasks]
    fails: Counter = Counter()
    certified = not_serre = 0
    for verdict, failed in (row for part in parts for row in part):
        certified += verdict == "CertifiedUpToB"
        not_serre += verdict == "NotSerre"
        fails.update(failed)
    return CensusReport(X, len(pairs), certified, dict(sorted(fails.items())), B, not_serre)


@dataclass(frozen=True)
class EpsilonCensus:
    X: int
    N: int
    B: int
    total: int
    flagged: int

    @property
    def fraction(self) -> float:
        return self.flagged / self.total if self.total else 0.0


EPSILON_LEVELS = (4, 6, 8, 9, 12, 24)


def epsilon_flagged(E: RationalCurve, N: int, B: int = 200) -> bool:
    """One-sided proxy for membership in epsilon_N.

    Flagged when the level is not certified surjective and some pair
    (t, d), with d a sampled determinant, is never seen among the sampled
    (trace, det) mod N.
    """
    if certify_level(E, N, B).certified:
        return False
    seen = set()
    dets = set()
    for p in good_primes(E, B, N):
        a = frobenius_trace(E, p)
        seen.add((a % N, p % N))
        dets.add(p % N)
    return any((t, d) not in seen for d in dets for t in range(N))


def epsilon_N_census(X: int, N: int, B: int = 200) -> EpsilonCensus:
    if N not in EPSILON_LEVELS:
        raise SerreLabError(f"N must be one of {EPSILON_LEVELS}")
    total = flagged = 0
    for E in enumerate_family(X):
        total += 1
        flagged += epsilon_flagged(E, N, B)
    return EpsilonCensus(X, N, B, total, flagged)


# -------------------- Eichler mass --------------------

def eichler_mass(p: int) -> Fraction:
    """Sum over t^2 < 4p and valid f of weighted_orbit_count(t, p, f)."""
    _check_p(p)
    total = Fraction(0)
    tmax = isqrt(4 * p)
    for t in range(-tmax, tmax + 1):
        disc = t * t - 4 * p
        if disc >= 0:
            continue
        for f in valid_conductors(disc):
            total += weighted_orbit_count(t, p, f)
    return total
