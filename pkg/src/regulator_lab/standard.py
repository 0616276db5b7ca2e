"""Standard complexes T.A and T~.A for augmented algebras, PBW straightening in U(gl_N).

``T_n A = A^{⊗(n+1)}`` carries

    d (a_0⊗...⊗a_n)  = sum_i (-1)^i ε(a_i) a_0⊗..^a_i..⊗a_n
    d~(a_0⊗...⊗a_n)  = sum_{i<n} (-1)^i a_0⊗..⊗a_i a_{i+1}⊗..⊗a_n + (-1)^n a_0⊗..⊗a_{n-1} ε(a_n)

Both maps lower n by one.  Two algebras are modelled on monomial bases:
U(gl_N) in PBW order (filtered by PBW degree) and the group algebra of Z_p^r
in the coordinates ``z_i = x_i - 1`` (graded by total z-degree).  For either
algebra the span of tensors of total degree ``<= D`` is a subcomplex, so all
differentials below are exact, with no truncation error.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations
from math import comb
from typing import Callable, Dict, List, Sequence, Tuple

from .arith import multi_indices
from .lie import gl, perm_sign
from .linalg import SparseMatrix

Mono = Tuple[int, ...]
Tensor = Dict[Tuple[Mono, ...], Fraction]


def _acc(out: dict, key, x) -> None:
    v = out.get(key, 0) + x
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# ---------------------------------------------------------------------------
# algebras on monomial bases


class MonomialAlgebra:
    """Interface: ``mul`` of basis monomials, ``counit``, ``coproduct``, ``antipode``, ``degree``."""

    name = "algebra"

    def one(self) -> Mono:
        raise NotImplementedError

    def degree(self, m: Mono) -> int:
        raise NotImplementedError

    def basis(self, max_degree: int) -> List[Mono]:
        raise NotImplementedError

    def mul(self, a: Mono, b: Mono) -> Dict[Mono, Fraction]:
        raise NotImplementedError

    def counit(self, m: Mono) -> Fraction:
        return Fraction(1) if m == self.one() else Fraction(0)

    def coproduct(self, m: Mono) -> Dict[Tuple[Mono, Mono], Fraction]:
        raise NotImplementedError

    def antipode(self, m: Mono) -> Dict[Mono, Fraction]:
        raise NotImplementedError

    def mul_elements(self, x: Dict[Mono, Fraction], y: Dict[Mono, Fraction]) -> Dict[Mono, Fraction]:
        out: Dict[Mono, Fraction] = {}
        for a, s in x.items():
            for b, t in y.items():
                for c, u in self.mul(a, b).items():
                    _acc(out, c, s * t * u)
        return out


class EnvelopingAlgebra(MonomialAlgebra):
    """U(gl_N) with PBW monomials: non-decreasing tuples of basis indices."""

    def __init__(self, N: int):
        self.N = N
        self.algebra = gl(N)
        self.dim = self.algebra.dim
        self.name = f"U(gl_{N})"

    def one(self) -> Mono:
        return ()

    def degree(self, m: Mono) -> int:
        return len(m)

    def basis(self, max_degree: int) -> List[Mono]:
        out = []
        for k in range(max_degree + 1):
            out.extend(combinations_with_replacement(range(self.dim), k))
        return out

    def mul(self, a: Mono, b: Mono) -> Dict[Mono, Fraction]:
        return _straighten(self.N, tuple(a) + tuple(b))

    def coproduct(self, m: Mono) -> Dict[Tuple[Mono, Mono], Fraction]:
        # X primitive: Δ(X_1...X_k) = sum over subsets, order preserved
        out: Dict[Tuple[Mono, Mono], Fraction] = {}
        k = len(m)
        for size in range(k + 1):
            for S in combinations(range(k), size):
                left = tuple(m[i] for i in S)
                right = tuple(m[i] for i in range(k) if i not in S)
                _acc(out, (left, right), Fraction(1))
        return out

    def antipode(self, m: Mono) -> Dict[Mono, Fraction]:
        sign = (-1) ** len(m)
        return {k: sign * x for k, x in _straighten(self.N, tuple(reversed(m))).items()}


@lru_cache(maxsize=None)
def _straighten_cached(N: int, word: Tuple[int, ...]) -> Tuple[Tuple[Mono, Fraction], ...]:
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            break
    else:
        return ((word, Fraction(1)),)
    a, b = word[i], word[i + 1]
    out: Dict[Mono, Fraction] = {}
    # X_a X_b = X_b X_a + [X_a, X_b]
    for k, x in _straighten_cached(N, word[:i] + (b, a) + word[i + 2:]):
        _acc(out, k, x)
    for c, coef in gl(N).bracket_table[a][b].items():
        for k, x in _straighten_cached(N, word[:i] + (c,) + word[i + 2:]):
            _acc(out, k, coef * x)
    return tuple(sorted(out.items()))


def _straighten(N: int, word: Sequence[int]) -> Dict[Mono, Fraction]:
    """PBW normal form of a word in the basis ``E_ij`` of gl_N."""
    return dict(_straighten_cached(N, tuple(word)))


@dataclass
class TruncatedEnvelopingElement:
    """Element of U(gl_N) on PBW monomials of degree ``<= max_degree``."""

    N: int
    max_degree: int
    coeffs: Dict[Mono, Fraction]

    def __post_init__(self):
        for k in self.coeffs:
            if len(k) > self.max_degree:
                raise ValueError(f"PBW degree of {k} exceeds {self.max_degree}")
            if list(k) != sorted(k):
                raise ValueError(f"{k} is not a PBW monomial")

    @classmethod
    def generator(cls, N: int, a: int, max_degree: int = 1) -> "TruncatedEnvelopingElement":
        return cls(N, max_degree, {(a,): Fraction(1)})

    def __mul__(self, other: "TruncatedEnvelopingElement") -> "TruncatedEnvelopingElement":
        out = EnvelopingAlgebra(self.N).mul_elements(self.coeffs, other.coeffs)
        top = max((len(k) for k in out), default=0)
        return TruncatedEnvelopingElement(self.N, max(self.max_degree, other.max_degree, top), out)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, x in other.coeffs.items():
            _acc(out, k, x)
        return TruncatedEnvelopingElement(self.N, max(self.max_degree, other.max_degree), out)

    def __sub__(self, other):
        return self + TruncatedEnvelopingElement(
            other.N, other.max_degree, {k: -x for k, x in other.coeffs.items()})


class AbelianGroupAlgebra(MonomialAlgebra):
    """Group algebra of Z^r in ``z_i = x_i - 1``, truncated at total degree ``D``."""

    def __init__(self, r: int, D: int):
        self.r, self.D = r, D
        self.name = f"Q[Z^{r}]"

    def one(self) -> Mono:
        return (0,) * self.r

    def degree(self, m: Mono) -> int:
        return sum(m)

    def basis(self, max_degree: int) -> List[Mono]:
        return multi_indices(self.r, max_degree)

    def mul(self, a: Mono, b: Mono) -> Dict[Mono, Fraction]:
        c = tuple(x + y for x, y in zip(a, b))
        return {} if sum(c) > self.D else {c: Fraction(1)}

    def coproduct(self, m: Mono) -> Dict[Tuple[Mono, Mono], Fraction]:
        terms = {((), ()): Fraction(1)}
        for a in m:
            one_d = {}
            for b in range(a + 1):
                for c in range(a + 1):
                    s = sum(comb(a, k) * (-1) ** (a - k) * comb(k, b) * comb(k, c)
                            for k in range(max(b, c), a + 1))
                    if s:
                        one_d[b, c] = s
            new = {}
            for (L, R), x in terms.items():
                for (b, c), s in one_d.items():
                    _acc(new, (L + (b,), R + (c,)), x * s)
            terms = new
        return {k: x for k, x in terms.items() if sum(k[0]) + sum(k[1]) <= self.D}

    def antipode(self, m: Mono) -> Dict[Mono, Fraction]:
        # S(z_i) = x_i^{-1} - 1 = sum_{k>=1} (-z_i)^k, products truncated at D
        out = {self.one(): Fraction(1)}
        for i, a in enumerate(m):
            s_z = {tuple(k if j == i else 0 for j in range(self.r)): Fraction((-1) ** k)
                   for k in range(1, self.D + 1)}
            for _ in range(a):
                out = self.mul_elements(out, s_z)
        return out


# ---------------------------------------------------------------------------
# standard complexes


def tensor_basis(A: MonomialAlgebra, n: int, D: int) -> List[Tuple[Mono, ...]]:
    """Basis of ``A^{⊗(n+1)}`` with total degree ``<= D``."""
    mons = A.basis(D)
    out = []

    def rec(prefix, budget, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for m in mons:
            dm = A.degree(m)
            if dm <= budget:
                rec(prefix + [m], budget - dm, slots - 1)

    rec([], D, n + 1)
    return out


def d_standard(A: MonomialAlgebra, t: Tuple[Mono, ...]) -> Tensor:
    out: Tensor = {}
    for i, a in enumerate(t):
        e = A.counit(a)
        if e:
            _acc(out, t[:i] + t[i + 1:], (-1) ** i * e)
    return out


def d_tilde(A: MonomialAlgebra, t: Tuple[Mono, ...]) -> Tensor:
    out: Tensor = {}
    n = len(t) - 1
    for i in range(n):
        for c, x in A.mul(t[i], t[i + 1]).items():
            _acc(out, t[:i] + (c,) + t[i + 2:], (-1) ** i * x)
    e = A.counit(t[n])
    if e:
        _acc(out, t[:n], (-1) ** n * e)
    return out


def apply_linear(fn: Callable[[Tuple[Mono, ...]], Tensor], x: Tensor) -> Tensor:
    out: Tensor = {}
    for t, c in x.items():
        for k, v in fn(t).items():
            _acc(out, k, c * v)
    return out


@dataclass
class StandardComplexes:
    algebra: MonomialAlgebra
    D: int
    bases: Dict[int, List[Tuple[Mono, ...]]]
    d: Dict[int, SparseMatrix]        # T_n -> T_{n-1}
    d_tilde: Dict[int, SparseMatrix]
    d_squared_zero: bool
    d_tilde_squared_zero: bool


def _matrix(fn, src: List, tgt: List) -> SparseMatrix:
    idx = {k: i for i, k in enumerate(tgt)}
    cols = []
    for t in src:
        img = fn(t)
        col = {}
        for k, x in img.items():
            if k not in idx:
                raise ValueError(f"image {k} leaves the filtered subspace")
            col[idx[k]] = x
        cols.append(col)
    return SparseMatrix.from_columns(len(tgt), cols)


def standard_complex_differentials(A: MonomialAlgebra, n: int, D: int) -> StandardComplexes:
    """Matrices of d and d~ on ``T_k A`` for ``k <= n``, total degree ``<= D``."""
    bases = {k: tensor_basis(A, k, D) for k in range(n + 1)}
    d, dt = {}, {}
    for k in range(1, n + 1):
        d[k] = _matrix(lambda t: d_standard(A, t), bases[k], bases[k - 1])
        dt[k] = _matrix(lambda t: d_tilde(A, t), bases[k], bases[k - 1])
    dd = all((d[k - 1] @ d[k]).is_zero() for k in range(2, n + 1))
    dtdt = all((dt[k - 1] @ dt[k]).is_zero() for k in range(2, n + 1))
    return StandardComplexes(A, D, bases, d, dt, dd, dtdt)


# ---------------------------------------------------------------------------
# E ≅ E~ change of variables


def e_to_e_tilde(A: MonomialAlgebra, t: Tuple[Mono, ...]) -> Tensor:
    """Linearization of ``(h_0, ..., h_n) ↦ (h_0, h_0^{-1}h_1, ..., h_{n-1}^{-1}h_n)``.

    In Sweedler notation ``a_0⊗...⊗a_n ↦ a_0' ⊗ S(a_0'')a_1' ⊗ ... ⊗ S(a_{n-1}'')a_n``.
    """
    # state: partial tensor and the pending right factor S(a_k'') to multiply into slot k+1
    states: Dict[Tuple[Tuple[Mono, ...], Mono], Fraction] = {((), A.one()): Fraction(1)}
    n = len(t) - 1
    for k, a in enumerate(t):
        new: Dict[Tuple[Tuple[Mono, ...], Mono], Fraction] = {}
        for (prefix, pending), c in states.items():
            if k == n:
                for prod_m, x in A.mul(pending, a).items():
                    _acc(new, (prefix + (prod_m,), A.one()), c * x)
                continue
            for (left, right), x in A.coproduct(a).items():
                for prod_m, y in A.mul(pending, left).items():
                    for s_m, z in A.antipode(right).items():
                        _acc(new, (prefix + (prod_m,), s_m), c * x * y * z)
        states = new
    out: Tensor = {}
    for (prefix, _), c in states.items():
        _acc(out, prefix, c)
    return out


def _truncate(A: MonomialAlgebra, x: Tensor, D: int) -> Tensor:
    return {k: v for k, v in x.items() if sum(A.degree(m) for m in k) <= D}


def check_e_tilde_isomorphism(A: MonomialAlgebra, n: int, D: int) -> Dict[int, bool]:
    """``d~ φ = φ d`` on ``T_k`` for ``1 <= k <= n`` in total degree ``<= D``."""
    out = {}
    for k in range(1, n + 1):
        ok = True
        for t in tensor_basis(A, k, D):
            lhs = apply_linear(lambda s: d_tilde(A, s), e_to_e_tilde(A, t))
            rhs = apply_linear(lambda s: e_to_e_tilde(A, s), d_standard(A, t))
            if _truncate(A, lhs, D) != _truncate(A, rhs, D):
                ok = False
                break
        out[k] = ok
    return out


# ---------------------------------------------------------------------------
# anti-symmetrization and the Koszul complex


def antisymmetrization(indices: Sequence[int]) -> Tensor:
    """``as_n(X_1∧...∧X_n) = sum_σ sgn(σ) X_σ^{-1}(1) ⊗ ... ⊗ X_σ^{-1}(n)``."""
    n = len(indices)
    out: Tensor = {}
    for perm in permutations(range(n)):
        inv = [0] * n
        for i, j in enumerate(perm):
            inv[j] = i
        key = tuple((indices[inv[i]],) for i in range(n))
        _acc(out, key, perm_sign(perm))
    return out


def koszul_differential(N: int, u: Mono, xs: Tuple[int, ...]) -> Dict[Tuple[Mono, Tuple[int, ...]], Fraction]:
    """``u⊗X_1∧...∧X_n ↦ sum (-1)^{i+1} uX_i⊗... + sum_{i<j} (-1)^{i+j} u⊗[X_i,X_j]∧...``."""
    out: Dict[Tuple[Mono, Tuple[int, ...]], Fraction] = {}
    n = len(xs)
    L = gl(N)
    for i in range(n):
        rest = xs[:i] + xs[i + 1:]
        for m, x in _straighten(N, tuple(u) + (xs[i],)).items():
            _acc(out, (m, rest), (-1) ** i * x)     # (-1)^{(i+1)+1} with 1-based i+1
    for i in range(n):
        for j in range(i + 1, n):
            rest = xs[:i] + xs[i + 1:j] + xs[j + 1:]
            for c, coef in L.bracket_table[xs[i]][xs[j]].items():
                _acc(out, (u, (c,) + rest), (-1) ** (i + j) * coef)
    return out


def koszul_to_standard(u: Mono, xs: Tuple[int, ...]) -> Tensor:
    """``u ⊗ X_1∧...∧X_n ↦ u ⊗ as_n(X_1, ..., X_n)`` in ``T~_n U``."""
    return {(tuple(u),) + k: v for k, v in antisymmetrization(xs).items()}


def check_antisymmetrization_square(N: int, max_pbw: int = 3, max_n: int = 3) -> Dict[int, bool]:
    """``d~ ∘ as = as ∘ d_K`` on ``u ⊗ Λ^n`` with ``deg u + n <= max_pbw``."""
    A = EnvelopingAlgebra(N)
    out = {}
    for n in range(1, max_n + 1):
        ok = True
        for xs in combinations(range(A.dim), n):
            for u in A.basis(max_pbw - n):
                lhs = apply_linear(lambda s: d_tilde(A, s), koszul_to_standard(u, xs))
                rhs: Tensor = {}
                for (m, ys), c in koszul_differential(N, u, xs).items():
                    for k, v in koszul_to_standard(m, ys).items():
                        _acc(rhs, k, c * v)
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        out[n] = ok
    return out
