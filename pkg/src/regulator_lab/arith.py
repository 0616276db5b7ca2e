"""Exact rationals and truncated p-adic numbers.

Rationals are :class:`fractions.Fraction`.  :class:`PadicNumber` stores
``p**valuation * unit`` where the unit is known modulo ``p**precision``;
all arithmetic carries the guaranteed modulus forward pessimistically.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import comb
from numbers import Integral, Rational as _RationalABC
from typing import Iterable, Sequence, Union

Rational = Fraction


class PrecisionError(ArithmeticError):
    """Raised when a requested p-adic precision cannot be guaranteed."""


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a p-adic function."""


INF = float("inf")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def valuation(x, p: int) -> Union[int, float]:
    """p-adic valuation of an integer or rational, ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def legendre_factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) by Legendre's formula."""
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


Scalar = Union[int, Fraction, "PadicNumber"]


@total_ordering
class PadicNumber:
    """A p-adic number ``p**valuation * unit (mod p**(valuation + precision))``.

    ``precision`` is relative: the number of p-adic digits known past the
    valuation.  A value with ``unit == 0`` is zero modulo ``p**absprec``;
    for those the valuation equals ``absprec`` and ``precision`` is 0.
    """

    __slots__ = ("prime", "valuation", "unit", "precision")

    def __init__(self, prime: int, valuation: int, unit: int, precision: int):
        if precision < 0:
            raise ValueError("precision must be non-negative")
        self.prime = prime
        if precision == 0 or unit % prime ** precision == 0:
            # zero to absolute precision valuation + precision
            self.valuation = valuation + precision
            self.unit = 0
            self.precision = 0
            return
        unit %= prime ** precision
        while unit % prime == 0:
            unit //= prime
            valuation += 1
            precision -= 1
        self.valuation = valuation
        self.unit = unit % prime ** precision
        self.precision = precision

    # -- construction -------------------------------------------------
    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "PadicNumber":
        """Exact rational ``x`` to relative precision ``prec``.

        Zero becomes zero to absolute precision ``prec``.
        """
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        v = valuation(x, p)
        num, den = x.numerator, x.denominator
        if v > 0:
            num //= p ** v
        elif v < 0:
            den //= p ** (-v)
        mod = p ** prec
        return cls(p, v, num * pow(den, -1, mod) % mod, prec)

    @classmethod
    def from_rational_abs(cls, x, p: int, absprec: int) -> "PadicNumber":
        """Exact rational ``x`` known modulo ``p**absprec``."""
        x = Fraction(x)
        v = valuation(x, p)
        if v >= absprec:
            return cls.zero(p, absprec)
        return cls.from_rational(x, p, absprec - v)

    @classmethod
    def zero(cls, p: int, absprec: int) -> "PadicNumber":
        return cls(p, absprec, 0, 0)

    # -- basic properties ---------------------------------------------
    @property
    def absprec(self) -> int:
        return self.valuation + self.precision

    def is_zero(self) -> bool:
        """True iff the value is zero to its tracked precision."""
        return self.unit == 0

    def val(self) -> Union[int, float]:
        """Valuation; for approximate zeros this is a lower bound (absprec)."""
        return self.valuation

    def lift(self) -> Fraction:
        """The canonical rational representative ``p**v * unit``."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O({self.prime}^{self.absprec})"
        return (f"PadicNumber({self.prime}, v={self.valuation}, "
                f"unit={self.unit}, prec={self.precision})")

    # -- coercion -----------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError(f"prime mismatch: {self.prime} vs {other.prime}")
            return other
        if isinstance(other, (_RationalABC, Fraction, Integral)):
            x = Fraction(other)
            if x == 0:
                return PadicNumber.zero(self.prime, self.absprec + 1 + abs(self.valuation))
            v = valuation(x, self.prime)
            # exact constant: enough digits never to limit the result
            m = max(self.precision, self.absprec - v, 1) + 1
            return PadicNumber.from_rational(x, self.prime, m)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------
    def __neg__(self) -> "PadicNumber":
        if self.is_zero():
            return self
        return PadicNumber(self.prime, self.valuation, -self.unit, self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.prime
        absprec = min(self.absprec, other.absprec)
        if self.is_zero() or other.is_zero():
            x = other if self.is_zero() else self
            if x.is_zero() or x.valuation >= absprec:
                return PadicNumber.zero(p, absprec)
            return PadicNumber(p, x.valuation, x.unit, absprec - x.valuation)
        v0 = min(self.valuation, other.valuation)
        total = (self.unit * p ** (self.valuation - v0)
                 + other.unit * p ** (other.valuation - v0))
        return PadicNumber(p, v0, total, absprec - v0)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.prime
        if self.is_zero() or other.is_zero():
            # lower bound on the valuation of the product
            return PadicNumber.zero(p, min(self.absprec + other.valuation,
                                           other.absprec + self.valuation))
        m = min(self.precision, other.precision)
        return PadicNumber(p, self.valuation + other.valuation,
                           self.unit * other.unit, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by a p-adic zero approximation")
        p = self.prime
        if self.is_zero():
            return PadicNumber.zero(p, self.absprec - other.valuation)
        m = min(self.precision, other.precision)
        mod = p ** m
        return PadicNumber(p, self.valuation - other.valuation,
                           self.unit * pow(other.unit, -1, mod), m)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int) -> "PadicNumber":
        if n < 0:
            return PadicNumber.from_rational(1, self.prime, self.precision or 1) / self ** (-n)
        result = PadicNumber.from_rational(1, self.prime, max(self.precision, 1) + 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------
    def agrees_with(self, other) -> bool:
        """True iff the two values coincide to the coarser tracked precision."""
        return (self - other).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, PadicNumber):
            return (self.prime, self.valuation, self.unit, self.precision) == (
                other.prime, other.valuation, other.unit, other.precision)
        if isinstance(other, (int, Fraction)):
            return self.agrees_with(other)
        return NotImplemented

    def __lt__(self, other):
        # only used for deterministic sorting of report output
        return (self.valuation, self.unit) < (other.valuation, other.unit)

    def __hash__(self) -> int:
        return hash((self.prime, self.valuation, self.unit, self.precision))


def as_padic(x, p: int, prec: int) -> PadicNumber:
    if isinstance(x, PadicNumber):
        return x
    return PadicNumber.from_rational(x, p, prec)


def _log_terms_needed(vz: int, p: int, target: int) -> int:
    """Smallest A such that v(z**a / a) >= target for every a > A."""
    # a*vz - log_p(a) is increasing in a, so the first a with
    # p**(a*vz - target) >= a bounds every later term as well.
    a = 1
    while True:
        e = a * vz - target
        if e >= 0 and p ** e >= a:
            return a - 1
        a += 1


def padic_log(u, p: int = None, prec: int = None) -> PadicNumber:
    """p-adic logarithm ``sum_{a>=1} (-1)**(a-1) (u-1)**a / a``.

    ``u`` is either a :class:`PadicNumber` (the result is known to the same
    absolute precision as ``u``) or an exact rational, in which case ``p``
    and the relative output precision ``prec`` are required.
    """
    if isinstance(u, PadicNumber):
        p = u.prime
        z = u - 1
        if z.is_zero():
            return PadicNumber.zero(p, u.absprec)
        vz = z.valuation
        target = u.absprec
        if prec is not None and vz + prec > target:
            raise PrecisionError(
                f"log of an input known mod {p}^{target} cannot reach "
                f"relative precision {prec}")
        z_exact = z.lift()
    else:
        if p is None or prec is None:
            raise TypeError("exact input needs p and prec")
        z_exact = Fraction(u) - 1
        if z_exact == 0:
            return PadicNumber.zero(p, prec)
        vz = valuation(z_exact, p)
        target = vz + prec
    bound = 2 if p == 2 else 1
    if vz < bound:
        raise DomainError(f"log_p needs v(u-1) >= {bound}, got {vz}")
    if prec is not None and prec < 1:
        raise PrecisionError("precision must be at least 1")
    n_terms = _log_terms_needed(vz, p, target)
    total = Fraction(0)
    zpow = Fraction(1)
    for a in range(1, n_terms + 1):
        zpow *= z_exact
        total += (zpow / a) if a % 2 else -(zpow / a)
    return PadicNumber.from_rational_abs(total, p, target)


def _binom_exact(lam: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= (lam - j)
    for j in range(2, k + 1):
        out /= j
    return out


def binomial(lam, k: int):
    """Generalized binomial coefficient by the falling-factorial product."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(lam, PadicNumber):
        out = PadicNumber.from_rational(1, lam.prime, max(lam.precision, 1) + 1)
        for j in range(k):
            out = out * (lam - j)
        fact = 1
        for j in range(2, k + 1):
            fact *= j
        return out / fact
    if isinstance(lam, Integral) and k <= lam and lam >= 0:
        return comb(int(lam), k)
    value = _binom_exact(Fraction(lam), k)
    return int(value) if value.denominator == 1 else value


def mahler_binomial(lam, alpha: Union[int, Sequence[int]]):
    """``prod_i binom(lam_i, alpha_i)`` for scalar or vector ``lam``."""
    if isinstance(alpha, Integral):
        return binomial(lam, int(alpha))
    if isinstance(lam, (int, Fraction, PadicNumber)):
        lam = [lam]
    if len(lam) != len(alpha):
        raise ValueError("lambda and alpha must have the same length")
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index must be non-negative")
    out = 1
    for li, ai in zip(lam, alpha):
        out = out * binomial(li, ai)
    return out


def multi_indices(r: int, max_degree: int) -> list:
    """All alpha in N^r with |alpha| <= max_degree, graded then lex."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for a in range(remaining + 1):
            rec(prefix + [a], remaining - a, slots - 1)

    rec([], max_degree, r)
    return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))


def factorial_multi(alpha: Iterable[int]) -> int:
    out = 1
    for a in alpha:
        for j in range(2, a + 1):
            out *= j
    return out
