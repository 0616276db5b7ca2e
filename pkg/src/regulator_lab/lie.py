"""gl_N, its Chevalley-Eilenberg complex, primitive cocycles and invariants.

Basis and sign conventions
--------------------------
The basis of gl_N is ``E_ij`` with index ``i*N + j`` (0-based).  A k-cochain
is stored by its values on increasing index tuples; the value on
``(X_a1, ..., X_ak)`` with ``a1 < ... < ak`` is the coefficient of
``X_a1^v ∧ ... ∧ X_ak^v`` (determinant pairing).  The differential is

    (dc)(x_0, ..., x_k) = sum_{i<j} (-1)**(i+j) c([x_i, x_j], x_0, ..^i..^j.., x_k)

which makes ``d`` a graded derivation with ``dX^v(x, y) = -X^v([x, y])``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .complexes import FiniteComplex
from .linalg import SparseMatrix, nullspace, rref


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class LieAlgebraGL:
    """gl_N over Q with basis ``E_ij``."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be positive")
        self.N = N
        self.dim = N * N
        self.labels = [f"E{i + 1}{j + 1}" for i in range(N) for j in range(N)]
        # structure constants: bracket[a][b] = {c: coeff}
        self.bracket_table: List[List[Dict[int, int]]] = [
            [self._bracket_basis(a, b) for b in range(self.dim)] for a in range(self.dim)]
        self._check_axioms()

    def __repr__(self) -> str:
        return f"gl_{self.N}"

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebraGL) and other.N == self.N

    def __hash__(self) -> int:
        return hash(("gl", self.N))

    def index(self, i: int, j: int) -> int:
        return i * self.N + j

    def pair(self, a: int) -> Tuple[int, int]:
        return divmod(a, self.N)

    def _bracket_basis(self, a: int, b: int) -> Dict[int, int]:
        # [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
        i, j = self.pair(a)
        k, l = self.pair(b)
        out: Dict[int, int] = {}
        if j == k:
            out[self.index(i, l)] = out.get(self.index(i, l), 0) + 1
        if l == i:
            out[self.index(k, j)] = out.get(self.index(k, j), 0) - 1
        return {c: x for c, x in out.items() if x}

    def bracket(self, x: Dict[int, Fraction], y: Dict[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for a, xa in x.items():
            for b, yb in y.items():
                for c, s in self.bracket_table[a][b].items():
                    out[c] = out.get(c, 0) + xa * yb * s
        return {c: v for c, v in out.items() if v}

    def _check_axioms(self) -> None:
        n = self.dim
        for a in range(n):
            for b in range(n):
                neg = {c: -x for c, x in self.bracket_table[b][a].items()}
                if self.bracket_table[a][b] != neg:
                    raise AssertionError("bracket is not antisymmetric")
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    ea, eb, ec = {a: 1}, {b: 1}, {c: 1}
                    tot: Dict[int, Fraction] = {}
                    for x, y, z in ((ea, eb, ec), (eb, ec, ea), (ec, ea, eb)):
                        for k, v in self.bracket(x, self.bracket(y, z)).items():
                            tot[k] = tot.get(k, 0) + v
                    if any(tot.values()):
                        raise AssertionError("Jacobi identity fails")

    def matrix(self, a: int) -> List[List[int]]:
        i, j = self.pair(a)
        m = [[0] * self.N for _ in range(self.N)]
        m[i][j] = 1
        return m

    def to_matrix(self, x: Dict[int, Fraction]) -> List[List[Fraction]]:
        m = [[Fraction(0)] * self.N for _ in range(self.N)]
        for a, v in x.items():
            i, j = self.pair(a)
            m[i][j] += v
        return m

    def from_matrix(self, m: Sequence[Sequence]) -> Dict[int, Fraction]:
        return {self.index(i, j): Fraction(m[i][j]) for i in range(self.N)
                for j in range(self.N) if m[i][j]}


@lru_cache(maxsize=None)
def gl(N: int) -> LieAlgebraGL:
    return LieAlgebraGL(N)


# ---------------------------------------------------------------------------
# exterior cochains


class ExteriorCochain:
    """Element of ``Λ^k g^v`` stored on increasing index tuples."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra: LieAlgebraGL, degree: int,
                 coeffs: Dict[Tuple[int, ...], Fraction] = None):
        if degree < 0:
            raise ValueError("negative degree")
        self.algebra = algebra
        self.degree = degree
        self.coeffs: Dict[Tuple[int, ...], Fraction] = {}
        for key, x in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"key {key} has wrong length for degree {degree}")
            s = perm_sign(key)
            if s == 0 or not x:
                continue
            skey = tuple(sorted(key))
            val = self.coeffs.get(skey, 0) + s * Fraction(x)
            if val:
                self.coeffs[skey] = val
            else:
                self.coeffs.pop(skey, None)

    @classmethod
    def basis_form(cls, algebra, indices: Sequence[int]) -> "ExteriorCochain":
        return cls(algebra, len(indices), {tuple(indices): 1})

    @classmethod
    def from_vector(cls, algebra, degree: int, vec: Sequence) -> "ExteriorCochain":
        basis = exterior_basis(algebra.dim, degree)
        return cls(algebra, degree, {basis[i]: x for i, x in enumerate(vec) if x})

    def to_vector(self) -> List[Fraction]:
        index = exterior_index(self.algebra.dim, self.degree)
        v = [Fraction(0)] * len(index)
        for key, x in self.coeffs.items():
            v[index[key]] = x
        return v

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"0 in Λ^{self.degree}"
        lab = self.algebra.labels
        terms = [f"{x}*" + "^".join(lab[i] for i in key) for key, x in sorted(self.coeffs.items())]
        return " + ".join(terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExteriorCochain):
            return NotImplemented
        return (self.algebra == other.algebra and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __add__(self, other: "ExteriorCochain") -> "ExteriorCochain":
        out = dict(self.coeffs)
        for k, x in other.coeffs.items():
            out[k] = out.get(k, 0) + x
        return ExteriorCochain(self.algebra, self.degree, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExteriorCochain":
        c = Fraction(c)
        return ExteriorCochain(self.algebra, self.degree,
                               {k: c * x for k, x in self.coeffs.items()})

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not self.coeffs

    def wedge(self, other: "ExteriorCochain") -> "ExteriorCochain":
        out: Dict[Tuple[int, ...], Fraction] = {}
        for k1, x in self.coeffs.items():
            for k2, y in other.coeffs.items():
                key = k1 + k2
                s = perm_sign(key)
                if s:
                    sk = tuple(sorted(key))
                    out[sk] = out.get(sk, 0) + s * x * y
        return ExteriorCochain(self.algebra, self.degree + other.degree, out)

    def evaluate(self, vectors: Sequence[Dict[int, Fraction]]) -> Fraction:
        """Value on arbitrary elements (multilinear, alternating)."""
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        total = Fraction(0)
        for key, x in self.coeffs.items():
            # sum over permutations: det of the coordinate matrix
            rows = [[Fraction(v.get(a, 0)) for a in key] for v in vectors]
            total += x * _det(rows)
        return total

    def evaluate_basis(self, indices: Sequence[int]) -> Fraction:
        s = perm_sign(indices)
        if s == 0:
            return Fraction(0)
        return s * self.coeffs.get(tuple(sorted(indices)), Fraction(0))


def _det(rows: List[List[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


@lru_cache(maxsize=None)
def exterior_basis(dim: int, k: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(combinations(range(dim), k))


@lru_cache(maxsize=None)
def exterior_index(dim: int, k: int) -> Dict[Tuple[int, ...], int]:
    return {key: i for i, key in enumerate(exterior_basis(dim, k))}


def ce_differential(c: ExteriorCochain) -> ExteriorCochain:
    """Chevalley-Eilenberg differential of a cochain."""
    if c.degree >= c.algebra.dim:
        return ExteriorCochain(c.algebra, c.degree + 1)
    m = ce_matrix(c.algebra.N, c.degree)
    v = m.apply(c.to_vector())
    return ExteriorCochain.from_vector(c.algebra, c.degree + 1, v)


@lru_cache(maxsize=None)
def ce_matrix(N: int, k: int) -> SparseMatrix:
    """Matrix of ``d: Λ^k -> Λ^{k+1}`` in the sorted-tuple bases."""
    algebra = gl(N)
    src = exterior_basis(algebra.dim, k)
    tgt_index = exterior_index(algebra.dim, k + 1)
    ent = {}
    for col, key in enumerate(src):
        for T, x in _ce_image_of_basis_fast(algebra, key).items():
            ent[tgt_index[T], col] = x
    return SparseMatrix(len(tgt_index), len(src), ent)


def _ce_image_of_basis_fast(algebra: LieAlgebraGL, key: Tuple[int, ...]) -> Dict[Tuple[int, ...], Fraction]:
    """Same values as the evaluation formula, enumerating only contributing T.

    A term of (dc)(X_T) survives only when ``rest = T minus {t_i, t_j}`` is
    ``key`` minus one element ``m`` and ``[X_ti, X_tj]`` has an ``X_m``
    component; so T = (key - {m}) + {a, b} with m in [X_a, X_b].
    """
    out: Dict[Tuple[int, ...], Fraction] = {}
    dim = algebra.dim
    for pos, m in enumerate(key):
        rest_set = key[:pos] + key[pos + 1:]
        rs = set(rest_set)
        for a in range(dim):
            if a in rs:
                continue
            for b in range(a + 1, dim):
                if b in rs:
                    continue
                coef = algebra.bracket_table[a][b].get(m)
                if not coef:
                    continue
                T = tuple(sorted(rest_set + (a, b)))
                i, j = T.index(a), T.index(b)
                s = perm_sign((m,) + rest_set)
                out[T] = out.get(T, 0) + (-1) ** (i + j) * coef * s
    return {T: Fraction(x) for T, x in out.items() if x}


def ce_complex(N: int) -> FiniteComplex:
    """Chevalley-Eilenberg complex of gl_N, degrees 0..N^2."""
    return _ce_complex(N)


@lru_cache(maxsize=None)
def _ce_complex(N: int) -> FiniteComplex:
    dim = N * N
    dims = {k: len(exterior_basis(dim, k)) for k in range(dim + 1)}
    diffs = {k: ce_matrix(N, k) for k in range(dim)}
    return FiniteComplex(dims, diffs, name=f"CE(gl_{N})",
                         basis_labels={k: exterior_basis(dim, k) for k in dims})


def poincare_exterior_primitives(N: int) -> List[int]:
    """Coefficients of prod_{i=1}^N (1 + t^(2i-1))."""
    poly = [1]
    for i in range(1, N + 1):
        deg = 2 * i - 1
        new = [0] * (len(poly) + deg)
        for k, c in enumerate(poly):
            new[k] += c
            new[k + deg] += c
        poly = new
    return poly


# ---------------------------------------------------------------------------
# primitive elements


def _trace_of_product(algebra: LieAlgebraGL, seq: Sequence[int]) -> int:
    # Tr(E_{i1 j1} ... E_{ik jk}) = 1 iff j_r = i_{r+1} cyclically
    pairs = [algebra.pair(a) for a in seq]
    for r in range(len(pairs)):
        if pairs[r][1] != pairs[(r + 1) % len(pairs)][0]:
            return 0
    return 1


def primitive_element(n: int, N: int) -> ExteriorCochain:
    """p_n in Λ^{2n-1}(gl_N)^v.

    Value on ``(x_1..x_{2n-1})``: ``((n-1)!)^2/(2n-1)! * sum_sigma sgn(sigma)
    Tr(x_sigma(1) ... x_sigma(2n-1))``.
    """
    if not 1 <= n <= N:
        raise ValueError(f"primitive element p_{n} needs 1 <= n <= N = {N}")
    algebra = gl(N)
    k = 2 * n - 1
    coef = Fraction(factorial(n - 1) ** 2, factorial(k))
    coeffs = {}
    for key in exterior_basis(algebra.dim, k):
        total = 0
        for perm in permutations(range(k)):
            t = _trace_of_product(algebra, [key[i] for i in perm])
            if t:
                total += perm_sign(perm) * t
        if total:
            coeffs[key] = coef * total
    return ExteriorCochain(algebra, k, coeffs)


def restrict_cochain(c: ExteriorCochain, N_small: int) -> ExteriorCochain:
    """Restrict a cochain on gl_N to the upper-left gl_{N_small} block."""
    big = c.algebra
    small = gl(N_small)
    embed = {a: big.index(*small.pair(a)) for a in range(small.dim)}
    inv = {v: k for k, v in embed.items()}
    coeffs = {}
    for key, x in c.coeffs.items():
        if all(a in inv for a in key):
            coeffs[tuple(inv[a] for a in key)] = x
    return ExteriorCochain(small, c.degree, coeffs)


# ---------------------------------------------------------------------------
# symmetric polynomials and invariants


class SymPolynomial:
    """Element of ``Sym^n g^v`` keyed by sorted index multisets."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra: LieAlgebraGL, degree: int,
                 coeffs: Dict[Tuple[int, ...], Fraction] = None):
        self.algebra = algebra
        self.degree = degree
        self.coeffs: Dict[Tuple[int, ...], Fraction] = {}
        for key, x in (coeffs or {}).items():
            if len(key) != degree:
                raise ValueError("monomial has the wrong degree")
            sk = tuple(sorted(key))
            val = self.coeffs.get(sk, 0) + Fraction(x)
            if val:
                self.coeffs[sk] = val
            else:
                self.coeffs.pop(sk, None)

    @classmethod
    def from_vector(cls, algebra, degree, vec) -> "SymPolynomial":
        basis = sym_basis(algebra.dim, degree)
        return cls(algebra, degree, {basis[i]: x for i, x in enumerate(vec) if x})

    def to_vector(self) -> List[Fraction]:
        index = sym_index(self.algebra.dim, self.degree)
        v = [Fraction(0)] * len(index)
        for key, x in self.coeffs.items():
            v[index[key]] = x
        return v

    def __repr__(self) -> str:
        lab = self.algebra.labels
        if not self.coeffs:
            return f"0 in Sym^{self.degree}"
        return " + ".join(f"{x}*" + "*".join(lab[i] for i in key)
                          for key, x in sorted(self.coeffs.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymPolynomial):
            return NotImplemented
        return (self.algebra == other.algebra and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, x in other.coeffs.items():
            out[k] = out.get(k, 0) + x
        return SymPolynomial(self.algebra, self.degree, out)

    def scale(self, c):
        c = Fraction(c)
        return SymPolynomial(self.algebra, self.degree, {k: c * x for k, x in self.coeffs.items()})

    __rmul__ = scale

    def __mul__(self, other: "SymPolynomial") -> "SymPolynomial":
        out: Dict[Tuple[int, ...], Fraction] = {}
        for k1, x in self.coeffs.items():
            for k2, y in other.coeffs.items():
                k = tuple(sorted(k1 + k2))
                out[k] = out.get(k, 0) + x * y
        return SymPolynomial(self.algebra, self.degree + other.degree, out)

    def evaluate(self, X: Sequence[Sequence]) -> Fraction:
        """Value at the matrix ``X`` (coordinates ``x_a = X^v_a(X)``)."""
        coords = self.algebra.from_matrix(X)
        total = Fraction(0)
        for key, c in self.coeffs.items():
            term = c
            for a in key:
                term *= coords.get(a, 0)
                if not term:
                    break
            total += term
        return total

    def coadjoint(self, b: int) -> "SymPolynomial":
        """theta(X_b) P, the derivation with theta(X_b) X_a^v = X_a^v([., X_b])."""
        alg = self.algebra
        # theta(X_b) s_a = sum_c X_a^v([X_c, X_b]) s_c
        out: Dict[Tuple[int, ...], Fraction] = {}
        for key, x in self.coeffs.items():
            for pos, a in enumerate(key):
                rest = key[:pos] + key[pos + 1:]
                for c in range(alg.dim):
                    coef = alg.bracket_table[c][b].get(a)
                    if coef:
                        k = tuple(sorted(rest + (c,)))
                        out[k] = out.get(k, 0) + coef * x
        return SymPolynomial(alg, self.degree, out)

    def is_invariant(self) -> bool:
        return all(not self.coadjoint(b).coeffs for b in range(self.algebra.dim))


@lru_cache(maxsize=None)
def sym_basis(dim: int, n: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(combinations_with_replacement(range(dim), n))


@lru_cache(maxsize=None)
def sym_index(dim: int, n: int) -> Dict[Tuple[int, ...], int]:
    return {k: i for i, k in enumerate(sym_basis(dim, n))}


def coadjoint_matrix(N: int, n: int) -> SparseMatrix:
    """Stacked matrices of theta(X_b) on Sym^n, one block per b."""
    alg = gl(N)
    basis = sym_basis(alg.dim, n)
    index = sym_index(alg.dim, n)
    size = len(basis)
    ent = {}
    for col, key in enumerate(basis):
        mono = SymPolynomial(alg, n, {key: 1})
        for b in range(alg.dim):
            for k, x in mono.coadjoint(b).coeffs.items():
                ent[b * size + index[k], col] = x
    return SparseMatrix(alg.dim * size, size, ent)


def invariant_polynomials(n: int, N: int) -> List[SymPolynomial]:
    """Echelonized basis of ``(Sym^n g^v)^g``."""
    if n < 1:
        raise ValueError("n must be positive")
    alg = gl(N)
    kernel = nullspace(coadjoint_matrix(N, n))
    if not kernel:
        return []
    rows, _ = rref(SparseMatrix.from_dense(kernel))
    size = len(sym_basis(alg.dim, n))
    return [SymPolynomial.from_vector(alg, n, [r.get(i, Fraction(0)) for i in range(size)])
            for r in rows]


def trace_power(k: int, N: int) -> SymPolynomial:
    """The invariant polynomial ``X -> Tr(X^k)``."""
    alg = gl(N)
    out: Dict[Tuple[int, ...], Fraction] = {}

    def rec(start, current, chain):
        if len(chain) == k:
            if current == start:
                key = tuple(sorted(chain))
                out[key] = out.get(key, 0) + 1
            return
        for nxt in range(N):
            rec(start, nxt, chain + [alg.index(current, nxt)])

    for i in range(N):
        rec(i, i, [])
    return SymPolynomial(alg, k, out)


def trace_form(N: int) -> ExteriorCochain:
    """Tr as a 1-cochain: sum_i E_ii^v."""
    alg = gl(N)
    return ExteriorCochain(alg, 1, {(alg.index(i, i),): 1 for i in range(N)})


def conjugate(X: Sequence[Sequence], g: Sequence[Sequence]) -> List[List[Fraction]]:
    """g X g^{-1} with exact rational arithmetic."""
    gi = _mat_inverse(g)
    return _matmul(_matmul(g, X), gi)


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((Fraction(A[i][k]) * B[k][j] for k in range(m)), Fraction(0))
             for j in range(p)] for i in range(n)]


def _mat_inverse(g):
    n = len(g)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(g)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c])
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [row[n:] for row in m]
