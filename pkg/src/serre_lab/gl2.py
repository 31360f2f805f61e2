"""Finite matrix groups GL2(Z/NZ).

Matrices are packed 4-tuples (a, b, c, d) of residues for ((a, b), (c, d)).
Enumeration order is lexicographic in the packed tuple, so every listing is
deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Callable, Iterable, Optional

from .errors import LevelTooLarge, OddLevel, SerreLabError
from .zmod import divisors, euler_phi, factorint, kronecker

Mat = tuple[int, int, int, int]

ENUMERATION_BOUND = 24


def identity(N: int) -> Mat:
    return (1 % N, 0, 0, 1 % N)


def reduce_mat(A, N: int) -> Mat:
    if len(A) == 2:
        (a, b), (c, d) = A
    else:
        a, b, c, d = A
    return (a % N, b % N, c % N, d % N)


def mul(A: Mat, B: Mat, N: int) -> Mat:
    a, b, c, d = A
    e, f, g, h = B
    return ((a * e + b * g) % N, (a * f + b * h) % N, (c * e + d * g) % N, (c * f + d * h) % N)


def det(A: Mat, N: int) -> int:
    return (A[0] * A[3] - A[1] * A[2]) % N


def trace(A: Mat, N: int) -> int:
    return (A[0] + A[3]) % N


def inverse(A: Mat, N: int) -> Mat:
    a, b, c, d = A
    u = pow((a * d - b * c) % N, -1, N) if N > 1 else 0
    return ((d * u) % N, (-b * u) % N, (-c * u) % N, (a * u) % N)


def power(A: Mat, k: int, N: int) -> Mat:
    R = identity(N)
    while k:
        if k & 1:
            R = mul(R, A, N)
        A = mul(A, A, N)
        k >>= 1
    return R


def is_scalar(A: Mat, n: int) -> bool:
    return A[1] % n == 0 and A[2] % n == 0 and (A[0] - A[3]) % n == 0


def order_of(A: Mat, N: int) -> int:
    I = identity(N)
    k, B = 1, A
    while B != I:
        B = mul(B, A, N)
        k += 1
    return k


def gl2_order(N: int) -> int:
    if N < 1:
        raise SerreLabError("level must be >= 1")
    out = N**4
    for q in factorint(N):
        out = out * (q - 1) * (q * q - 1) // q**3
    return out


def _check_bound(N: int, bound: int):
    if N > bound:
        raise LevelTooLarge(f"level {N} exceeds enumeration bound {bound}")


@lru_cache(maxsize=32)
def gl2_elements(N: int, bound: int = ENUMERATION_BOUND) -> tuple[Mat, ...]:
    _check_bound(N, bound)
    return tuple(A for A in product(range(N), repeat=4) if gcd(det(A, N), N) == 1)


def unit_generators(N: int) -> list[int]:
    """A small generating set of (Z/NZ)^*, chosen greedily."""
    gens: list[int] = []
    span = {1 % N}
    for u in range(N):
        if gcd(u, N) == 1 and u not in span:
            gens.append(u)
            span = _close_units(span, gens, N)
    return gens


def _close_units(span, gens, N):
    span = set(span)
    queue = deque(span)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g % N
            if y not in span:
                span.add(y)
                queue.append(y)
    return span


@lru_cache(maxsize=32)
def gl2_generators(N: int) -> tuple[Mat, ...]:
    """Elementary matrices generate SL2(Z/N); diagonal units add the determinant."""
    gens = [(1 % N, 1 % N, 0, 1 % N), (1 % N, 0, 1 % N, 1 % N)]
    gens += [(u, 0, 0, 1 % N) for u in unit_generators(N)]
    return tuple(dict.fromkeys(gens))


def epsilon_char(g, N: int) -> int:
    """Sign of g mod 2 viewed in GL2(Z/2) = S3."""
    if N % 2:
        raise OddLevel(f"epsilon needs an even level, got {N}")
    a, b, c, d = reduce_mat(g, 2)
    if (a, b, c, d) == (1, 0, 0, 1) or (a + d) % 2 == 1:
        return 1
    return -1


# -------------------- subgroups --------------------

@dataclass(frozen=True)
class SubgroupModN:
    N: int
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return gl2_order(self.N) // len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def reduce(self, M: int) -> "SubgroupModN":
        return SubgroupModN(M, frozenset(reduce_mat(g, M) for g in self.elements))


def subgroup_closure(generators: Iterable[Mat], N: int) -> SubgroupModN:
    gens = list(dict.fromkeys(generators))
    gens = [reduce_mat(g, N) for g in gens]
    for g in gens:
        if gcd(det(g, N), N) != 1:
            raise SerreLabError(f"{g} is not invertible mod {N}")
    I = identity(N)
    elems = {I}
    queue = deque([I])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g, N)
            if y not in elems:
                elems.add(y)
                queue.append(y)
    return SubgroupModN(N, frozenset(elems))


def full_group(N: int, bound: int = ENUMERATION_BOUND) -> SubgroupModN:
    return SubgroupModN(N, frozenset(gl2_elements(N, bound)))


def sl2(N: int) -> SubgroupModN:
    return SubgroupModN(N, frozenset(g for g in gl2_elements(N) if det(g, N) == 1 % N))


def normal_closure(seeds: Iterable[Mat], N: int) -> SubgroupModN:
    """Smallest normal subgroup of GL2(Z/N) containing the seeds."""
    G = gl2_generators(N)
    Ginv = [inverse(g, N) for g in G]
    elems = {identity(N)}
    gens: list[Mat] = []
    queue = deque(reduce_mat(s, N) for s in seeds)
    while queue:
        s = queue.popleft()
        if s in elems:
            continue
        gens.append(s)
        elems = set(subgroup_closure(gens, N).elements)
        for g, gi in zip(G, Ginv):
            queue.append(mul(mul(g, s, N), gi, N))
    return SubgroupModN(N, frozenset(elems))


def commutator(x: Mat, y: Mat, N: int) -> Mat:
    return mul(mul(x, y, N), mul(inverse(x, N), inverse(y, N), N), N)


def commutator_subgroup(N: int, bound: int = ENUMERATION_BOUND) -> SubgroupModN:
    """Derived subgroup: the normal closure of commutators of generators."""
    _check_bound(N, bound)
    if len(factorint(N)) > 1:
        raise SerreLabError(f"{N} is not a prime power")
    G = gl2_generators(N)
    return normal_closure([commutator(x, y, N) for x in G for y in G], N)


def represents_pair(G: SubgroupModN, t: int, d: int) -> bool:
    N = G.N
    t, d = t % N, d % N
    if gcd(d, N) != 1:
        raise SerreLabError(f"{d} is not a unit mod {N}")
    return any(trace(g, N) == t and det(g, N) == d for g in G.elements)


def td_pairs(G: SubgroupModN) -> set[tuple[int, int]]:
    N = G.N
    return {(trace(g, N), det(g, N)) for g in G.elements}


def all_td_pairs(N: int) -> set[tuple[int, int]]:
    return {(t, d) for t in range(N) for d in range(N) if gcd(d, N) == 1}


def g_td_set(N: int, t: int, d: int) -> set[Mat]:
    t, d = t % N, d % N
    return {g for g in gl2_elements(N, max(N, ENUMERATION_BOUND))
            if trace(g, N) == t and det(g, N) == d}


# -------------------- conjugacy classes --------------------

@dataclass(frozen=True)
class ClassDescriptor:
    N: int
    M: int
    lam: int
    Tbar: int
    Dbar: int

    @property
    def det(self) -> int:
        """Common determinant of the class mod N."""
        return _descriptor_td(self)[1]

    @property
    def trace(self) -> int:
        return _descriptor_td(self)[0]


def _descriptor_td(desc: ClassDescriptor) -> tuple[int, int]:
    N, M, lam = desc.N, desc.M, desc.lam
    # any member: lam*I + M*A with tr A = T, det A = D mod N/M
    T, D = desc.Tbar, desc.Dbar
    return ((2 * lam + M * T) % N, (lam * lam + M * lam * T + M * M * D) % N)


def descriptor_of(g: Mat, N: int) -> ClassDescriptor:
    M = max(m for m in divisors(N) if is_scalar(g, m))
    lam = g[0] % M
    n = N // M
    A = (((g[0] - lam) // M) % n, (g[1] // M) % n, (g[2] // M) % n, ((g[3] - lam) // M) % n)
    return ClassDescriptor(N, M, lam, trace(A, n) if n > 1 else 0, det(A, n) if n > 1 else 0)


@lru_cache(maxsize=64)
def _nonscalar_by_td(n: int) -> dict[tuple[int, int], tuple[Mat, ...]]:
    """Matrices mod n, non-scalar mod every prime dividing n, keyed by (tr, det)."""
    primes = list(factorint(n))
    out: dict[tuple[int, int], list[Mat]] = {}
    for A in product(range(n), repeat=4):
        if any(is_scalar(A, q) for q in primes):
            continue
        out.setdefault((trace(A, n), det(A, n)), []).append(A)
    return {k: tuple(v) for k, v in out.items()}


def descriptor_members(desc: ClassDescriptor) -> set[Mat]:
    """The set lam*I + M * T*_{N/M}(Tbar, Dbar) as matrices mod N."""
    N, M, lam = desc.N, desc.M, desc.lam
    n = N // M
    if n == 1:
        As: Iterable[Mat] = [(0, 0, 0, 0)]
    else:
        As = _nonscalar_by_td(n).get((desc.Tbar % n, desc.Dbar % n), ())
    return {((lam + M * a) % N, (M * b) % N, (M * c) % N, (lam + M * d) % N) for a, b, c, d in As}


@dataclass(frozen=True)
class ConjClass:
    rep: Mat
    size: int
    descriptor: ClassDescriptor
    members: frozenset = field(repr=False)


@dataclass(frozen=True)
class ClassTable:
    N: int
    classes: tuple[ConjClass, ...]
    index_of: dict = field(repr=False)

    def class_of(self, g) -> int:
        return self.index_of[reduce_mat(g, self.N)]

    def __len__(self):
        return len(self.classes)


@lru_cache(maxsize=32)
def class_table(N: int, bound: int = ENUMERATION_BOUND) -> ClassTable:
    _check_bound(N, bound)
    elems = gl2_elements(N, bound)
    gens = gl2_generators(N)
    ginv = [inverse(g, N) for g in gens]
    index_of: dict[Mat, int] = {}
    classes = []
    for x in elems:
        if x in index_of:
            continue
        k = len(classes)
        orbit = {x}
        index_of[x] = k
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g, gi in zip(gens, ginv):
                z = mul(mul(g, y, N), gi, N)
                if z not in orbit:
                    orbit.add(z)
                    index_of[z] = k
                    queue.append(z)
        classes.append(ConjClass(x, len(orbit), descriptor_of(x, N), frozenset(orbit)))
    return ClassTable(N, tuple(classes), index_of)


def conjugacy_classes(N: int, bound: int = ENUMERATION_BOUND) -> list[tuple[Mat, int, ClassDescriptor]]:
    """(representative, size, descriptor) for each class, in enumeration order."""
    return [(c.rep, c.size, c.descriptor) for c in class_table(N, bound).classes]


def verify_descriptor(cls: ConjClass) -> bool:
    return descriptor_members(cls.descriptor) == set(cls.members)


# -------------------- characters --------------------

def real_unit_characters(N: int) -> list[dict[int, int]]:
    """All homomorphisms (Z/N)^* -> {+-1}, as value tables."""
    units = [u for u in range(N) if gcd(u, N) == 1]
    gens = unit_generators(N)
    out = []
    for signs in product((1, -1), repeat=len(gens)):
        table = {1 % N: 1}
        queue = deque([1 % N])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for g, s in zip(gens, signs):
                y = x * g % N
                v = table[x] * s
                if y in table:
                    if table[y] != v:
                        ok = False
                        break
                else:
                    table[y] = v
                    queue.append(y)
        if ok and len(table) == len(units) and table not in out:
            out.append(table)
    return out


def real_characters(N: int) -> list[Callable[[Mat], int]]:
    """Characters delta(det) * eps^e of GL2(Z/N) into {+-1} (e = 0 for odd N)."""
    chars = []
    for table in real_unit_characters(N):
        chars.append(lambda g, t=table: t[det(g, N)])
        if N % 2 == 0:
            chars.append(lambda g, t=table: t[det(g, N)] * epsilon_char(g, N))
    return chars


def serre_character(W: int, N: int) -> Callable[[Mat], int]:
    """g -> (W / det g) * eps(g) at an even level N."""
    return lambda g: kronecker(W, det(g, N)) * epsilon_char(g, N)
