"""Exact arithmetic in the p-local integers Z_(p) and in Q.

Elements are reduced fractions carrying their prime; membership in Z_(p) is a
predicate rather than an invariant so that rational Chern data can share the
type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError

#: valuation of zero; compares above every integer
INF = math.inf

Rational = Union[int, Fraction]


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return all(p % q for q in range(3, math.isqrt(p) + 1, 2))


def odd_primes_upto(bound: int) -> list[int]:
    return [q for q in range(3, bound + 1) if is_odd_prime(q)]


def check_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")


def vp_int(n: int, p: int) -> float | int:
    """Exponent of p in the integer n (INF for 0)."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(q: Rational, p: int) -> float | int:
    """p-adic valuation of a rational (INF for 0); accepts any exact rational type."""
    if not q:
        return INF
    num, den = (q, 1) if isinstance(q, int) else (int(q.numerator), int(q.denominator))
    return vp_int(num, p) - (vp_int(den, p) if den != 1 else 0)


def in_zp(q: Rational, p: int) -> bool:
    return Fraction(q).denominator % p != 0


@dataclass(frozen=True)
class LocalScalar:
    """Exact rational number attached to an odd prime p."""

    value: Fraction
    prime: int

    def __init__(self, value: Rational, prime: int):
        object.__setattr__(self, "value", Fraction(value))
        object.__setattr__(self, "prime", prime)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def valuation(self) -> float | int:
        return vp(self.value, self.prime)

    def is_local(self) -> bool:
        return in_zp(self.value, self.prime)

    def is_unit(self) -> bool:
        return self.value != 0 and self.valuation() == 0

    def _coerce(self, other: object) -> Fraction:
        if isinstance(other, LocalScalar):
            if other.prime != self.prime:
                raise DomainError("scalars over different primes")
            return other.value
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalScalar(self.value + o, self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalScalar(self.value - o, self.prime)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalScalar(o - self.value, self.prime)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalScalar(self.value * o, self.prime)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero scalar")
        return LocalScalar(self.value / o, self.prime)

    def __neg__(self):
        return LocalScalar(-self.value, self.prime)

    def __str__(self) -> str:
        return str(self.value)


def p_valuation(s: LocalScalar) -> float | int:
    return s.valuation()


def binomial(n: int, j: int) -> int:
    if n < 0 or j < 0 or j > n:
        raise DomainError(f"binomial({n}, {j}) needs 0 <= j <= n")
    return math.comb(n, j)


def complete_symmetric_sum(ell: Sequence[int], j: int) -> int:
    """h_j(ell) = sum of ell^I over multi-indices |I| = j.

    Coefficient of t^j in prod 1/(1 - l_i t), accumulated one factor at a time.
    """
    if len(ell) == 0:
        raise DomainError("complete_symmetric_sum needs a non-empty tuple")
    if j < 0:
        raise DomainError("degree must be non-negative")
    h = [1] + [0] * j
    for l in ell:
        for d in range(1, j + 1):
            h[d] += l * h[d - 1]
    return h[j]


def adams_m_valuation(r: int, p: int) -> int:
    """p-adic valuation of Adams' denominator m(r)."""
    if r < 0:
        raise DomainError("r must be non-negative")
    return r // (p - 1)


def factorial_valuation(i: int, p: int) -> int:
    """Legendre's formula for v_p(i!)."""
    v, q = 0, p
    while q <= i:
        v += i // q
        q *= p
    return v


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g
