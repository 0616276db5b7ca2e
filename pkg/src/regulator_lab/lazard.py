"""Truncated completed group algebras, Lazard's valuation and Mahler/Amice calculus.

The group is ``H = Z_p^r`` with topological generators ``x_i`` and
``z_i = x_i - 1``.  Its group algebra is the commutative ring of power series
in the ``z_i``; elements are truncated at total degree ``D`` and carry
p-adic coefficients with tracked precision.  Group-likeness of ``x_i`` gives
``Δ(z_i) = z_i⊗1 + 1⊗z_i + z_i⊗z_i``.

A distribution on functions ``Z_p^r -> Q_p`` is recorded by its moments
``ρ_α = μ(binom(λ, α))``; since ``x^λ = sum_α binom(λ, α) z^α`` these moments are
exactly the z-coefficients of the corresponding group-algebra element.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .arith import (INF, PadicNumber, PrecisionError, as_padic, binomial, factorial_multi,
                    is_prime, multi_indices, padic_log)

MultiIndex = Tuple[int, ...]
Scalar = Union[int, Fraction, PadicNumber]


class TruncationError(ValueError):
    """A degree bound was exceeded where truncation is not allowed."""


def _add_idx(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def _unit(r: int, i: int, k: int = 1) -> MultiIndex:
    return tuple(k if j == i else 0 for j in range(r))


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


# ---------------------------------------------------------------------------
# group algebra elements


class TruncatedGroupAlgebraElement:
    """``sum λ_α z^α`` over ``|α| <= D`` with p-adic coefficients and weights ``ω_i``."""

    __slots__ = ("p", "r", "D", "coeffs", "weights")

    def __init__(self, p: int, r: int, D: int, coeffs: Dict[MultiIndex, PadicNumber] = None,
                 weights: Sequence = None):
        self.p, self.r, self.D = p, r, D
        self.weights = tuple(Fraction(w) for w in (weights or [1] * r))
        if len(self.weights) != r:
            raise ValueError("one weight per generator")
        if any(w <= Fraction(1, p - 1) for w in self.weights):
            raise ValueError("weights must exceed 1/(p-1)")
        self.coeffs: Dict[MultiIndex, PadicNumber] = {}
        for a, x in (coeffs or {}).items():
            a = tuple(a)
            if len(a) != r or any(v < 0 for v in a):
                raise ValueError(f"bad multi-index {a}")
            if sum(a) > D:
                raise TruncationError(f"|{a}| exceeds D = {D}")
            self.coeffs[a] = x

    # construction
    @classmethod
    def monomial(cls, p, r, D, alpha, coeff=1, prec=20, weights=None):
        return cls(p, r, D, {tuple(alpha): as_padic(coeff, p, prec)}, weights)

    def _like(self, coeffs) -> "TruncatedGroupAlgebraElement":
        return TruncatedGroupAlgebraElement(self.p, self.r, self.D, coeffs, self.weights)

    def __repr__(self) -> str:
        return f"TruncatedGroupAlgebraElement(p={self.p}, r={self.r}, D={self.D}, terms={len(self.coeffs)})"

    def w_monomial(self, alpha: MultiIndex) -> Fraction:
        return sum((a * w for a, w in zip(alpha, self.weights)), Fraction(0))

    # arithmetic
    def __add__(self, other: "TruncatedGroupAlgebraElement"):
        out = dict(self.coeffs)
        for a, x in other.coeffs.items():
            out[a] = out[a] + x if a in out else x
        return self._like(out)

    def __neg__(self):
        return self._like({a: -x for a, x in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar):
        return self._like({a: x * c for a, x in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedGroupAlgebraElement):
            return self.scale(other)
        out: Dict[MultiIndex, PadicNumber] = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                c = _add_idx(a, b)
                if sum(c) > self.D:
                    continue
                out[c] = out[c] + x * y if c in out else x * y
        return self._like(out)

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coeffs.values())

    def min_absprec(self) -> int:
        return min((x.absprec for x in self.coeffs.values()), default=10 ** 9)


def valuation_w(x: TruncatedGroupAlgebraElement):
    """``inf_α v(λ_α) + w(z^α)`` over nonzero stored coefficients; ``INF`` for zero."""
    best = INF
    for a, c in x.coeffs.items():
        if c.is_zero():
            continue
        val = c.valuation + x.w_monomial(a)
        if best is INF or val < best:
            best = val
    return best


def saturation_member(x: TruncatedGroupAlgebraElement) -> bool:
    return valuation_w(x) >= 0


def saturation_element(p: int, alpha: MultiIndex, D: int, prec: int = 20,
                       weights=None) -> TruncatedGroupAlgebraElement:
    """``e_α = z^α / α!``."""
    return TruncatedGroupAlgebraElement.monomial(
        p, len(alpha), D, alpha, Fraction(1, factorial_multi(alpha)), prec, weights)


def partial_element(i: int, r: int, D: int, p: int, m: int,
                    weights=None) -> TruncatedGroupAlgebraElement:
    """``∂_i = log(1 + z_i) = sum_{a<=D} (-1)^(a-1) z_i^a / a`` (``i`` is 1-based)."""
    _check_prime(p)
    if not 1 <= i <= r:
        raise ValueError("generator index out of range")
    coeffs = {}
    for a in range(1, D + 1):
        coeffs[_unit(r, i - 1, a)] = PadicNumber.from_rational(
            Fraction((-1) ** (a - 1), a), p, m)
    return TruncatedGroupAlgebraElement(p, r, D, coeffs, weights)


# ---------------------------------------------------------------------------
# coproduct and primitivity


@lru_cache(maxsize=None)
def _coproduct_1d(a: int) -> Dict[Tuple[int, int], int]:
    """Coefficients of ``z^b⊗z^c`` in ``((1+z)⊗(1+z) - 1)^a``."""
    out = {}
    for b in range(a + 1):
        for c in range(a + 1):
            s = sum(comb(a, k) * (-1) ** (a - k) * comb(k, b) * comb(k, c)
                    for k in range(max(b, c), a + 1))
            if s:
                out[b, c] = s
    return out


TensorCoeffs = Dict[Tuple[MultiIndex, MultiIndex], PadicNumber]


def coproduct(x: TruncatedGroupAlgebraElement, D: Optional[int] = None) -> TensorCoeffs:
    """``Δx`` truncated at total bidegree ``|β| + |γ| <= D``."""
    D = x.D if D is None else D
    out: TensorCoeffs = {}
    for alpha, c in x.coeffs.items():
        terms = [((), (), 1)]
        for a in alpha:
            new = []
            for (b, g, k) in terms:
                for (bb, cc), s in _coproduct_1d(a).items():
                    new.append((b + (bb,), g + (cc,), k * s))
            terms = new
        for b, g, k in terms:
            if sum(b) + sum(g) > D:
                continue
            key = (b, g)
            out[key] = out[key] + c * k if key in out else c * k
    return out


@dataclass
class PrimitivityReport:
    residuals: TensorCoeffs
    primitive: bool
    min_absprec: int
    nonzero_terms: List[Tuple[MultiIndex, MultiIndex]]


def primitivity_check(x: TruncatedGroupAlgebraElement, D: Optional[int] = None,
                      m: Optional[int] = None) -> PrimitivityReport:
    """``Δx - x⊗1 - 1⊗x`` with each coefficient at its guaranteed precision."""
    D = x.D if D is None else D
    res = coproduct(x, D)
    zero = tuple([0] * x.r)
    for a, c in x.coeffs.items():
        if sum(a) > D:
            continue
        for key in ((a, zero), (zero, a)):
            res[key] = res[key] - c if key in res else -c
    prec = min((c.absprec for c in res.values()), default=10 ** 9)
    if prec < 1:
        raise PrecisionError("residual precision dropped below one digit")
    if m is not None and prec < min(m, 1):
        raise PrecisionError("requested precision cannot be guaranteed")
    bad = sorted(k for k, c in res.items() if not c.is_zero())
    return PrimitivityReport(res, not bad, prec, bad)


# ---------------------------------------------------------------------------
# distributions, Mahler series, Amice transform


@dataclass
class Distribution:
    p: int
    r: int
    D: int
    moments: Dict[MultiIndex, PadicNumber]

    @classmethod
    def dirac(cls, p: int, lam: Sequence[int], D: int, prec: int = 20) -> "Distribution":
        r = len(lam)
        mom = {}
        for a in multi_indices(r, D):
            v = 1
            for li, ai in zip(lam, a):
                v *= binomial(li, ai)
            if v:
                mom[a] = PadicNumber.from_rational(v, p, prec)
        return cls(p, r, D, mom)

    @classmethod
    def from_group_algebra(cls, x: TruncatedGroupAlgebraElement) -> "Distribution":
        return cls(x.p, x.r, x.D, dict(x.coeffs))

    def to_group_algebra(self, weights=None) -> TruncatedGroupAlgebraElement:
        return TruncatedGroupAlgebraElement(self.p, self.r, self.D, dict(self.moments), weights)


def amice_transform(mu: Distribution) -> Dict[MultiIndex, PadicNumber]:
    """Coefficients of ``sum_α μ(binom(λ, α)) T^α``."""
    return {a: c for a, c in mu.moments.items()}


def inverse_amice(p: int, r: int, D: int, series: Dict[MultiIndex, Scalar],
                  prec: int = 20) -> Distribution:
    """Distribution whose moments are the given power-series coefficients (|α| <= D)."""
    mom = {tuple(a): as_padic(c, p, prec) for a, c in series.items() if sum(a) <= D}
    return Distribution(p, r, D, mom)


def log_one_plus_T(p: int, D: int, prec: int) -> Dict[MultiIndex, PadicNumber]:
    """Truncated ``log(1+T)`` in one variable."""
    return {(a,): PadicNumber.from_rational(Fraction((-1) ** (a - 1), a), p, prec)
            for a in range(1, D + 1)}


@dataclass
class MahlerSeries:
    p: int
    r: int
    D: int
    coeffs: Dict[MultiIndex, PadicNumber]
    order: Optional[int] = None

    def evaluate(self, lam: Sequence[int]):
        total = None
        for a, c in self.coeffs.items():
            b = 1
            for li, ai in zip(lam, a):
                b *= binomial(li, ai)
            term = c * b
            total = term if total is None else total + term
        return total if total is not None else PadicNumber.zero(self.p, 10 ** 6)

    @classmethod
    def from_values(cls, p: int, D: int, values: Dict[int, PadicNumber]) -> "MahlerSeries":
        """Rank one: ``c_n = sum_k (-1)^(n-k) binom(n, k) f(k)`` for ``n <= D``."""
        coeffs = {}
        for n in range(D + 1):
            acc = None
            for k in range(n + 1):
                term = values[k] * ((-1) ** (n - k) * comb(n, k))
                acc = term if acc is None else acc + term
            coeffs[(n,)] = acc
        return cls(p, 1, D, coeffs)


def pair_distribution(mu: Distribution, f: MahlerSeries):
    """``μ(f) = sum_α c_α ρ_α``."""
    if (mu.r, mu.D) != (f.r, f.D):
        raise ValueError("rank and degree bound must agree")
    total = PadicNumber.zero(mu.p, 10 ** 6)
    for a, c in f.coeffs.items():
        rho = mu.moments.get(a)
        if rho is not None:
            total = total + c * rho
    return total


@dataclass
class AnalyticityVerdict:
    rate: object          # Fraction or INF
    threshold: Fraction
    consistent_with_locally_analytic: bool
    window: Tuple[int, int]
    heuristic: bool = True


def local_analyticity_test(f: MahlerSeries, threshold: Fraction = Fraction(1, 4)) -> AnalyticityVerdict:
    """Minimum of ``v(c_α)/|α|`` over the upper half window ``D/2 <= |α| <= D``.

    A truncation-window heuristic: it can only be consistent with the
    liminf criterion, never prove it.
    """
    lo = (f.D + 1) // 2
    lo = max(lo, 1)
    rate = INF
    for a, c in f.coeffs.items():
        n = sum(a)
        if n < lo or c.is_zero():
            continue
        q = Fraction(c.valuation, n)
        if rate is INF or q < rate:
            rate = q
    return AnalyticityVerdict(rate, Fraction(threshold), rate is INF or rate >= threshold,
                              (lo, f.D))


def log_mahler_series(p: int, D: int, m: int) -> MahlerSeries:
    """Mahler coefficients of ``λ ↦ log_p(1 + pλ)`` from exact values on ``0..D``."""
    prec = m + D
    values = {0: PadicNumber.zero(p, prec + 1)}
    for k in range(1, D + 1):
        values[k] = padic_log(1 + p * k, p, prec)
    return MahlerSeries.from_values(p, D, values)


# ---------------------------------------------------------------------------
# derivative at the identity


def _falling_linear_coefficient(a: int) -> Fraction:
    """Linear coefficient of ``λ(λ-1)...(λ-a+1)/a!`` by explicit expansion."""
    poly = [1]                    # coefficients in λ, ascending
    for j in range(a):
        new = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            new[d + 1] += c       # λ·c
            new[d] -= j * c       # -j·c
        poly = new
    lin = poly[1] if len(poly) > 1 else 0
    f = 1
    for j in range(2, a + 1):
        f *= j
    return Fraction(lin, f)


def derivative_at_identity(f: MahlerSeries, i: int, m: int):
    """Route A pairs ``∂_i`` with ``f``; route B differentiates the polynomial expansion.

    ``i`` is 1-based.  Returns ``(route_a, route_b)``.
    """
    dist = Distribution.from_group_algebra(partial_element(i, f.r, f.D, f.p, m))
    route_a = pair_distribution(dist, f)
    route_b = PadicNumber.zero(f.p, 10 ** 6)
    for a, c in f.coeffs.items():
        if any(a[j] for j in range(f.r) if j != i - 1):
            continue   # binom(0, a_j) = 0 for a_j > 0 in the other variables
        k = a[i - 1]
        if k == 0:
            continue
        route_b = route_b + c * _falling_linear_coefficient(k)
    return route_a, route_b


def random_mahler_series(p: int, r: int, D: int, m: int, rng: random.Random) -> MahlerSeries:
    coeffs = {}
    for a in multi_indices(r, D):
        coeffs[a] = PadicNumber.from_rational(rng.randrange(p ** m), p, m)
    return MahlerSeries(p, r, D, coeffs)


# ---------------------------------------------------------------------------
# enveloping algebra of the abelian Lazard Lie algebra


def enveloping_to_group_algebra(beta_coeffs: Dict[MultiIndex, Scalar], r: int, D: int,
                                p: int, m: int) -> TruncatedGroupAlgebraElement:
    """Linear map ``U(L) -> Sat Al``, ``∂^β ↦ prod_i ∂_i^{β_i}`` (commutative L)."""
    parts = [partial_element(i + 1, r, D, p, m) for i in range(r)]
    one = TruncatedGroupAlgebraElement(p, r, D, {tuple([0] * r): PadicNumber.from_rational(1, p, m + D)})
    total = TruncatedGroupAlgebraElement(p, r, D)
    for beta, c in beta_coeffs.items():
        term = one
        for i, b in enumerate(beta):
            for _ in range(b):
                term = term * parts[i]
        total = total + term.scale(c)
    return total
