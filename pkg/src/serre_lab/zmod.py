"""Integer, residue and polynomial primitives over prime fields.

Everything here is exact.  Polynomials are dense, lowest degree first, with
trailing zeros stripped; numpy is used for convolution only when the int64
accumulator provably cannot overflow.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint as _sympy_factorint
from sympy import primerange

from .errors import SerreLabError

_INT64_BUDGET = 2**62


# -------------------- integers --------------------

@lru_cache(maxsize=1 << 16)
def factorint(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; empty for |n| <= 1."""
    n = abs(n)
    if n <= 1:
        return {}
    return dict(sorted(_sympy_factorint(n).items()))


def prime_divisors(n: int) -> list[int]:
    return list(factorint(n))


def divisors(n: int) -> list[int]:
    ds = [1]
    for q, e in factorint(n).items():
        ds = [d * q**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorint(n) == {n: 1}


@lru_cache(maxsize=64)
def primes_up_to(n: int) -> tuple[int, ...]:
    return tuple(int(q) for q in primerange(2, n + 1))


def euler_phi(n: int) -> int:
    out = n
    for q in factorint(n):
        out = out // q * (q - 1)
    return out


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorint(n))


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def sqrt_mod_all(a: int, n: int) -> list[int]:
    """All x in [0, n) with x^2 = a mod n (brute force; n is small here)."""
    a %= n
    return [x for x in range(n) if x * x % n == a]


# -------------------- kronecker / squarefree --------------------

_TAB2 = (0, 1, 0, -1, 0, -1, 0, 1)  # (2/a) indexed by a mod 8


def kronecker(W: int, n: int) -> int:
    """Kronecker symbol (W/n).

    For odd n > 0 this is the product over the factorization of W described
    by the sign and prime factors of W, with (2/n) = (-1)^((n^2-1)/8) and
    (-1/n) = (-1)^((n-1)/2).  At n = 0 the value is 1 for W = +-1, else 0.
    """
    a, b = W, n
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        v += 1
        b //= 2
    k = 1 if v % 2 == 0 else _TAB2[a & 7]
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    while True:
        if a == 0:
            return k if b == 1 else 0
        v = 0
        while a % 2 == 0:
            v += 1
            a //= 2
        if v % 2:
            k *= _TAB2[b & 7]
        if a & b & 2:
            k = -k
        r = abs(a)
        a = b % r
        b = r


@dataclass(frozen=True)
class SquarefreeInt:
    value: int

    def __post_init__(self):
        if self.value == 0:
            raise SerreLabError("squarefree integer must be nonzero")
        if any(e > 1 for e in factorint(self.value).values()):
            raise SerreLabError(f"{self.value} is not squarefree")

    def __int__(self) -> int:
        return self.value


def squarefree_part(n: int) -> SquarefreeInt:
    """The squarefree sf with n = m^2 * sf, m > 0, sign(sf) = sign(n)."""
    if n == 0:
        raise SerreLabError("squarefree part of 0 is undefined")
    sf = 1
    for q, e in factorint(n).items():
        if e % 2:
            sf *= q
    return SquarefreeInt(sf if n > 0 else -sf)


# -------------------- CRT --------------------

def crt_combine(pairs: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine (residue, modulus) pairs into one class modulo the lcm."""
    r, m = 0, 1
    for r2, m2 in pairs:
        if m2 <= 0:
            raise SerreLabError("moduli must be positive")
        g = gcd(m, m2)
        if (r2 - r) % g:
            raise SerreLabError(f"incompatible congruences mod {m} and {m2}")
        l = m // g * m2
        # solve r + m*k = r2 (mod m2) for k modulo m2/g
        step = m2 // g
        k = (r2 - r) // g * pow(m // g, -1, step) % step if step > 1 else 0
        r = (r + m * k) % l
        m = l
    return r % m, m


# -------------------- polynomials over F_p --------------------

def _strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class PolyModP:
    """Dense polynomial over F_p, lowest-degree coefficient first."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = _strip([x % self.p for x in self.coeffs])
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x(cls, p: int) -> "PolyModP":
        return cls(p, (0, 1))

    @classmethod
    def const(cls, p: int, c: int) -> "PolyModP":
        return cls(p, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "PolyModP"):
        if other.p != self.p:
            raise SerreLabError(f"characteristic mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "PolyModP") -> "PolyModP":
        self._check(other)
        return PolyModP(self.p, tuple(padd(list(self.coeffs), list(other.coeffs), self.p)))

    def __sub__(self, other: "PolyModP") -> "PolyModP":
        self._check(other)
        return PolyModP(self.p, tuple(psub(list(self.coeffs), list(other.coeffs), self.p)))

    def __mul__(self, other: "PolyModP") -> "PolyModP":
        self._check(other)
        return PolyModP(self.p, tuple(pmul(list(self.coeffs), list(other.coeffs), self.p)))

    def __mod__(self, other: "PolyModP") -> "PolyModP":
        self._check(other)
        return PolyModP(self.p, tuple(pmod(list(self.coeffs), list(other.coeffs), self.p)))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def roots(self) -> list[int]:
        """Roots in F_p by exhaustive evaluation."""
        return [x for x in range(self.p) if self(x) == 0]


def padd(a: list[int], b: list[int], p: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _strip(out)


def psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _strip(out)


def pscale(a: list[int], k: int, p: int) -> list[int]:
    return _strip([c * k % p for c in a])


def pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) * (p - 1) ** 2 < _INT64_BUDGET:
        prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p
        return _strip(prod.tolist())
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip([c % p for c in out])


def pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a)
    inv_lead = pow(b[-1], -1, p)
    r = list(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i] * inv_lead % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    return _strip(q), _strip(r[:db])


def pmod(a: list[int], b: list[int], p: int) -> list[int]:
    if not b:
        raise ZeroDivisionError("polynomial reduction by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return list(a)
    if db == 0:
        return []
    if (p - 1) ** 2 * 2 >= _INT64_BUDGET:
        return pdivmod(a, b, p)[1]
    inv_lead = pow(b[-1], -1, p)
    hb = np.asarray(b[:-1], dtype=np.int64) * inv_lead % p
    r = np.asarray(a, dtype=np.int64)
    for i in range(len(a) - 1, db - 1, -1):
        c = int(r[i])
        if c:
            seg = r[i - db:i]
            seg -= c * hb
            seg %= p
    return _strip(r[:db].tolist())


def pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd."""
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        a, b = b, pmod(a, b, p)
    if not a:
        return []
    return pscale(a, pow(a[-1], -1, p), p)


def poly_powmod(base: PolyModP, e: int, modulus: PolyModP) -> PolyModP:
    """base**e reduced modulo `modulus`, by square-and-multiply."""
    if base.p != modulus.p:
        raise SerreLabError(f"characteristic mismatch: {base.p} vs {modulus.p}")
    if modulus.degree < 1:
        raise SerreLabError("modulus must have degree >= 1")
    if e < 0:
        raise SerreLabError("exponent must be nonnegative")
    p = base.p
    return PolyModP(p, tuple(powmod_list(list(base.coeffs), e, list(modulus.coeffs), p)))


def powmod_list(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    b = pmod(base, mod, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, b, p), mod, p)
        e >>= 1
        if e:
            b = pmod(pmul(b, b, p), mod, p)
    return pmod(result, mod, p)


def poly_from_roots(roots: Sequence[int], p: int) -> list[int]:
    out = [1]
    for r in roots:
        out = pmul(out, [(-r) % p, 1], p)
    return out
