"""Positive definite binary quadratic forms, class numbers, and the
matrix/form correspondence for integral matrices of negative discriminant.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .errors import IndefiniteForm, InvalidConductor, ParityMismatch, SerreLabError

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class QuadForm:
    alpha: int
    beta: int
    gamma: int

    @property
    def disc(self) -> int:
        return self.beta**2 - 4 * self.alpha * self.gamma

    def is_primitive(self) -> bool:
        return gcd(gcd(self.alpha, self.beta), self.gamma) == 1

    def act(self, g: Matrix2) -> "QuadForm":
        """(f . g)(x, y) = f(ax + by, cx + dy)."""
        (a, b), (c, d) = g
        A, B, C = self.alpha, self.beta, self.gamma
        return QuadForm(
            A * a * a + B * a * c + C * c * c,
            2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
            A * b * b + B * b * d + C * d * d,
        )

    def is_reduced(self) -> bool:
        a, b, c = self.alpha, self.beta, self.gamma
        if not abs(b) <= a <= c:
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True


@dataclass(frozen=True)
class OrderDisc:
    delta: int

    def __post_init__(self):
        if self.delta >= 0 or self.delta % 4 not in (0, 1):
            raise SerreLabError(f"{self.delta} is not a negative discriminant")


def _disc_value(D) -> int:
    return D.delta if isinstance(D, OrderDisc) else OrderDisc(D).delta


def reduce(f: QuadForm) -> QuadForm:
    """Gauss reduction of a positive definite form."""
    if f.disc >= 0 or f.alpha <= 0:
        raise IndefiniteForm(f"{f} is not positive definite")
    a, b, c = f.alpha, f.beta, f.gamma
    while True:
        if b > a or b <= -a:
            # translate b into (-a, a]
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


@lru_cache(maxsize=None)
def reduced_forms(D: int) -> tuple[QuadForm, ...]:
    """Primitive reduced forms of discriminant D, looping over a then b."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            f = QuadForm(a, b, c)
            if f.is_reduced() and f.is_primitive():
                out.append(f)
        a += 1
    return tuple(out)


def class_number(D) -> int:
    return len(reduced_forms(_disc_value(D)))


def unit_count(D) -> int:
    d = _disc_value(D)
    return 6 if d == -3 else 4 if d == -4 else 2


def matrix_to_form(A: Matrix2) -> QuadForm:
    (a, b), (c, d) = A
    return QuadForm(c, d - a, -b)


def form_to_matrix(f: QuadForm, t: int) -> Matrix2:
    """Inverse of matrix_to_form among matrices of trace t."""
    if (t - f.beta) % 2:
        raise ParityMismatch(f"trace {t} and middle coefficient {f.beta} differ in parity")
    return (((t - f.beta) // 2, -f.gamma), (f.alpha, (t + f.beta) // 2))


def order_conductor(D: int) -> int:
    """Conductor of the order of discriminant D inside its maximal order."""
    f = 1
    for q in range(2, isqrt(abs(D)) + 1):
        while D % (q * q) == 0 and (D // (q * q)) % 4 in (0, 1):
            D //= q * q
            f *= q
    return f


def weighted_orbit_count(T: int, D: int, f: int) -> Fraction:
    """(2 / w) h for the discriminant (T^2 - 4D) / f^2."""
    disc = T * T - 4 * D
    if disc >= 0:
        raise InvalidConductor(f"T^2 - 4D = {disc} is not negative")
    if f < 1 or disc % (f * f) or (disc // (f * f)) % 4 not in (0, 1):
        raise InvalidConductor(f"f={f} is not a valid conductor for {disc}")
    d = disc // (f * f)
    return Fraction(2 * class_number(d), unit_count(d))


def valid_conductors(disc: int) -> list[int]:
    """All f >= 1 with f^2 | disc and disc/f^2 a discriminant."""
    out = []
    f = 1
    while f * f <= -disc:
        if disc % (f * f) == 0 and (disc // (f * f)) % 4 in (0, 1):
            out.append(f)
        f += 1
    return out


def hurwitz_class_number(n: int) -> Fraction:
    """H(n) for n > 0: sum of 2h/w over discriminants -n/f^2."""
    if n <= 0 or (-n) % 4 not in (0, 1):
        return Fraction(0)
    return sum((Fraction(2 * class_number(-n // (f * f)), unit_count(-n // (f * f)))
                for f in valid_conductors(-n)), Fraction(0))
