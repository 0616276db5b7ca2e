"""The Weil algebra W(g) = Sym(g^v) ⊗ Λ(g^v) and the suspension s_g.

Generators: ``s_a`` (a copy of ``X_a^v`` in ``Sym^1``, even, degree 2) and
``l_a`` (``X_a^v`` in ``Λ^1``, odd, degree 1).  A monomial is a pair
``(sym, ext)`` of a sorted multiset and a strictly increasing tuple; it sits
in ``W^{p,q}`` with ``p = len(sym)`` and ``q - p = len(ext)``, total degree
``2p + len(ext)``.  The differential is the derivation with

    δ l_a = s_a + d_CE(l_a),      δ s_a = sum_i θ(X_i) s_a · l_i,

where ``θ(X_i) X^v (Y) = X^v([Y, X_i])``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import (CohomologyClass, FiniteComplex, ShortExactSequence, cohomology_dims,
                        connecting_map)
from .lie import (ExteriorCochain, LieAlgebraGL, SymPolynomial, ce_complex, ce_matrix,
                  exterior_basis, gl, invariant_polynomials, perm_sign, primitive_element,
                  sym_basis, trace_power)
from .linalg import SparseMatrix, solve

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]


class TruncationError(ValueError):
    """A result would leave the enumerated degree window."""


class LiftError(ValueError):
    """No Weil lift solves δ y = c inside the slice."""


def mono_degree(m: Monomial) -> int:
    return 2 * len(m[0]) + len(m[1])


def mono_bidegree(m: Monomial) -> Tuple[int, int]:
    p = len(m[0])
    return p, p + len(m[1])


def _mul_mono(m1: Monomial, m2: Monomial) -> Tuple[int, Optional[Monomial]]:
    ext = m1[1] + m2[1]
    s = perm_sign(ext)
    if s == 0:
        return 0, None
    return s, (tuple(sorted(m1[0] + m2[0])), tuple(sorted(ext)))


class WeilElement:
    """A finite sum of Weil monomials with rational coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: LieAlgebraGL, terms: Dict[Monomial, Fraction] = None):
        self.algebra = algebra
        self.terms: Dict[Monomial, Fraction] = {}
        for m, x in (terms or {}).items():
            if x:
                self.terms[m] = self.terms.get(m, 0) + Fraction(x)
                if not self.terms[m]:
                    del self.terms[m]

    @classmethod
    def sym_generator(cls, algebra, a: int) -> "WeilElement":
        return cls(algebra, {((a,), ()): 1})

    @classmethod
    def ext_generator(cls, algebra, a: int) -> "WeilElement":
        return cls(algebra, {((), (a,)): 1})

    @classmethod
    def one(cls, algebra) -> "WeilElement":
        return cls(algebra, {((), ()): 1})

    @classmethod
    def from_cochain(cls, c: ExteriorCochain) -> "WeilElement":
        return cls(c.algebra, {((), k): x for k, x in c.coeffs.items()})

    @classmethod
    def from_sym(cls, P: SymPolynomial) -> "WeilElement":
        return cls(P.algebra, {(k, ()): x for k, x in P.coeffs.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        lab = self.algebra.labels
        parts = []
        for (sym, ext), x in sorted(self.terms.items()):
            word = "".join(f"s{lab[a]}" for a in sym) + "".join(f"l{lab[a]}" for a in ext)
            parts.append(f"{x}*{word or '1'}")
        return " + ".join(parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeilElement) and self.terms == other.terms

    def __add__(self, other: "WeilElement") -> "WeilElement":
        out = dict(self.terms)
        for m, x in other.terms.items():
            out[m] = out.get(m, 0) + x
        return WeilElement(self.algebra, out)

    def __neg__(self) -> "WeilElement":
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WeilElement":
        c = Fraction(c)
        return WeilElement(self.algebra, {m: c * x for m, x in self.terms.items()})

    __rmul__ = scale

    def __mul__(self, other: "WeilElement") -> "WeilElement":
        out: Dict[Monomial, Fraction] = {}
        for m1, x in self.terms.items():
            for m2, y in other.terms.items():
                s, m = _mul_mono(m1, m2)
                if s:
                    out[m] = out.get(m, 0) + s * x * y
        return WeilElement(self.algebra, out)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {mono_degree(m) for m in self.terms}

    def bidegrees(self) -> set:
        return {mono_bidegree(m) for m in self.terms}

    def sym_part(self, p: int) -> "WeilElement":
        return WeilElement(self.algebra, {m: x for m, x in self.terms.items() if len(m[0]) == p})

    def to_cochain(self, degree: int) -> ExteriorCochain:
        """The component in ``W^{0,·} = Λ g^v`` of the given degree."""
        return ExteriorCochain(self.algebra, degree,
                               {m[1]: x for m, x in self.terms.items()
                                if not m[0] and len(m[1]) == degree})


@lru_cache(maxsize=None)
def _generator_images(N: int):
    """δ on generators, as dicts of monomials."""
    alg = gl(N)
    d1 = ce_matrix(N, 1)
    pairs = exterior_basis(alg.dim, 2)
    ext_img = []
    for a in range(alg.dim):
        img = {((a,), ()): Fraction(1)}
        for (row, col), x in d1.entries.items():
            if col == a:
                img[((), pairs[row])] = img.get(((), pairs[row]), 0) + x
        ext_img.append(img)
    sym_img = []
    for a in range(alg.dim):
        img: Dict[Monomial, Fraction] = {}
        # θ(X_i) s_a = sum_b X_a^v([X_b, X_i]) s_b ; times l_i
        for i in range(alg.dim):
            for b in range(alg.dim):
                coef = alg.bracket_table[b][i].get(a)
                if coef:
                    m = ((b,), (i,))
                    img[m] = img.get(m, 0) + coef
        sym_img.append({m: Fraction(x) for m, x in img.items() if x})
    return ext_img, sym_img


def weil_differential(w: WeilElement, max_degree: Optional[int] = None) -> WeilElement:
    """δ extended from generators as a graded derivation.

    With ``max_degree`` set, a result term beyond that total degree raises
    :class:`TruncationError`.
    """
    ext_img, sym_img = _generator_images(w.algebra.N)
    out: Dict[Monomial, Fraction] = {}
    for (sym, ext), x in w.terms.items():
        # sym generators are even: no sign
        for pos, a in enumerate(sym):
            rest = sym[:pos] + sym[pos + 1:]
            for (s2, e2), y in sym_img[a].items():
                s, m = _mul_mono((rest + s2, e2), ((), ext))
                if s:
                    out[m] = out.get(m, 0) + s * x * y
        for pos, a in enumerate(ext):
            sign = -1 if pos % 2 else 1
            before, after = ext[:pos], ext[pos + 1:]
            for (s2, e2), y in ext_img[a].items():
                s, m = _mul_mono((sym + s2, before + e2), ((), after))
                if s:
                    out[m] = out.get(m, 0) + sign * s * x * y
    res = WeilElement(w.algebra, out)
    if max_degree is not None and any(d > max_degree for d in res.degrees()):
        raise TruncationError(f"δ leaves the slice of total degree <= {max_degree}")
    return res


@lru_cache(maxsize=None)
def weil_basis(N: int, degree: int) -> Tuple[Monomial, ...]:
    """All monomials of total degree ``degree``, ordered by sym-degree p."""
    dim = N * N
    out = []
    for p in range(degree // 2 + 1):
        k = degree - 2 * p
        if k > dim:
            continue
        for sym in combinations_with_replacement(range(dim), p):
            for ext in combinations(range(dim), k):
                out.append((sym, ext))
    return tuple(out)


@lru_cache(maxsize=None)
def weil_index(N: int, degree: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(weil_basis(N, degree))}


@lru_cache(maxsize=None)
def weil_matrix(N: int, degree: int) -> SparseMatrix:
    """Matrix of δ: W^degree -> W^{degree+1}."""
    alg = gl(N)
    src = weil_basis(N, degree)
    tgt = weil_index(N, degree + 1)
    ent = {}
    for col, m in enumerate(src):
        img = weil_differential(WeilElement(alg, {m: 1}))
        for mm, x in img.terms.items():
            ent[tgt[mm], col] = x
    return SparseMatrix(len(tgt), len(src), ent)


class WeilComplexSlice:
    """W^{*,·}(gl_N) restricted to total degrees <= D, optionally filtered.

    ``filtration=("ge", n)`` keeps monomials with sym-degree p >= n (a
    subcomplex), ``("lt", n)`` keeps p < n with the induced quotient
    differential.  The top degree D has no outgoing differential and its
    cohomology is unreliable.
    """

    def __init__(self, N: int, D: int, filtration: Optional[Tuple[str, int]] = None):
        if D < 1:
            raise ValueError("degree bound must be positive")
        self.N = N
        self.D = D
        self.filtration = filtration
        self.algebra = gl(N)
        self.basis: Dict[int, List[Monomial]] = {}
        self.positions: Dict[int, List[int]] = {}
        for t in range(D + 1):
            full = weil_basis(N, t)
            keep = [i for i, m in enumerate(full) if self._keeps(m)]
            self.basis[t] = [full[i] for i in keep]
            self.positions[t] = keep
        diffs = {}
        for t in range(D):
            m = weil_matrix(N, t)
            diffs[t] = m.submatrix(self.positions[t + 1], self.positions[t])
        name = f"W(gl_{N})<= {D}" + (f" {filtration[0]} {filtration[1]}" if filtration else "")
        self.complex = FiniteComplex({t: len(self.basis[t]) for t in range(D + 1)},
                                     diffs, name=name, basis_labels=self.basis)

    def _keeps(self, m: Monomial) -> bool:
        if self.filtration is None:
            return True
        kind, n = self.filtration
        p = len(m[0])
        return p >= n if kind == "ge" else p < n

    def index(self, t: int) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis[t])}

    def vector(self, w: WeilElement, t: int) -> List[Fraction]:
        idx = self.index(t)
        v = [Fraction(0)] * len(idx)
        for m, x in w.terms.items():
            if mono_degree(m) != t:
                continue
            if m not in idx:
                raise ValueError(f"monomial {m} is not in this slice")
            v[idx[m]] = x
        return v

    def element(self, vec: Sequence, t: int) -> WeilElement:
        return WeilElement(self.algebra, {self.basis[t][i]: x for i, x in enumerate(vec) if x})


def filtration_sequence(N: int, D: int, n: int) -> ShortExactSequence:
    """0 -> W^{>=n} -> W -> W^{<n} -> 0 with the canonical monomial splitting."""
    sub = WeilComplexSlice(N, D, ("ge", n))
    total = WeilComplexSlice(N, D)
    quot = WeilComplexSlice(N, D, ("lt", n))
    inc, proj, sec, ret = {}, {}, {}, {}
    for t in range(D + 1):
        tot_n = len(total.basis[t])
        inc[t] = SparseMatrix(tot_n, len(sub.positions[t]),
                              {(pos, i): 1 for i, pos in enumerate(sub.positions[t])})
        ret[t] = inc[t].transpose()
        sec[t] = SparseMatrix(tot_n, len(quot.positions[t]),
                              {(pos, i): 1 for i, pos in enumerate(quot.positions[t])})
        proj[t] = sec[t].transpose()
    ses = ShortExactSequence(sub.complex, total.complex, quot.complex, inc, proj, sec, ret)
    ses.slices = (sub, total, quot)
    return ses


def weil_cohomology(N: int, D: int) -> Dict[str, object]:
    """Cohomology dimensions of W and of each W^{>=n}, n <= D/2.

    Degree D is reported under ``"unreliable_degree"``.
    """
    if D < 2:
        raise ValueError("D must be at least 2")
    table = {"N": N, "D": D, "unreliable_degree": D}
    full = WeilComplexSlice(N, D).complex
    table["total"] = cohomology_dims(full)
    filt = {}
    for n in range(1, D // 2 + 1):
        filt[n] = cohomology_dims(WeilComplexSlice(N, D, ("ge", n)).complex)
    table["filtered"] = filt
    return table


def _slice_D(n: int, D: Optional[int]) -> int:
    # the lift lives in degree 2n-1 and its δ in 2n, both must have outgoing
    # maps inside the slice
    need = 2 * n + 1
    return max(D or need, need)


def suspension_sg(P: SymPolynomial, D: Optional[int] = None) -> ExteriorCochain:
    """s_g on the class of ``P`` in H^{2n}(W^{>=n}).

    Solves δ y = P with y of total degree 2n-1 in W and returns the
    Λ-component of y (the image in W^{<1} = C(g)).
    """
    n = P.degree
    if n < 1:
        raise ValueError("suspension needs n >= 1")
    if not P.is_invariant():
        # a degree-2n element of W^{>=n} is a cocycle iff it is invariant
        raise LiftError("input is not a cocycle of W^{>=n}")
    N = P.algebra.N
    D = _slice_D(n, D)
    total = WeilComplexSlice(N, D)
    target = total.vector(WeilElement.from_sym(P), 2 * n)
    y = solve(total.complex.diff(2 * n - 1), target)
    if y is None:
        raise LiftError("δ y = c has no solution; slice too small or not a cocycle")
    return total.element(y, 2 * n - 1).to_cochain(2 * n - 1)


def suspension_via_connecting_map(P: SymPolynomial, D: Optional[int] = None) -> ExteriorCochain:
    """Alternative route: connecting map of 0 -> W^{>=1} -> W -> C(g) -> 0 inverted.

    Solves ``∂ x = [P]`` in H^{2n}(W^{>=1}) over the cocycles x of C(g) by a
    linear solve of ``δ(s(x)) - P ∈ δ(W^{>=1})``.
    """
    n = P.degree
    N = P.algebra.N
    D = _slice_D(n, D)
    ses = filtration_sequence(N, D, 1)
    sub_slice, total, quot = ses.slices
    k = 2 * n - 1
    ce = ce_complex(N)
    from .linalg import nullspace
    cocycles = nullspace(ce.diff(k))
    # columns: δ(s(x_j)) for each CE cocycle x_j, then δ of W^{>=1} in degree k
    cols = []
    for x in cocycles:
        cls = CohomologyClass.cocycle(quot.complex, k, _ce_to_quot(quot, x, k))
        cols.append(connecting_map(ses, cls).representative)
    sub = ses.sub
    cols_sparse = [{i: v for i, v in enumerate(c) if v} for c in cols]
    cols_sparse += sub.diff(k).col_dicts()
    target = sub_slice.vector(WeilElement.from_sym(P), 2 * n)
    m = SparseMatrix.from_columns(sub.dim(2 * n), cols_sparse)
    sol = solve(m, target)
    if sol is None:
        raise LiftError("class is not in the image of the connecting map")
    out = [Fraction(0)] * ce.dim(k)
    for t, x in zip(sol[:len(cocycles)], cocycles):
        if t:
            out = [a + t * b for a, b in zip(out, x)]
    return ExteriorCochain.from_vector(P.algebra, k, out)


def _ce_to_quot(quot: WeilComplexSlice, x: Sequence, k: int) -> List[Fraction]:
    """CE vector (sorted tuples) -> coordinates in the W^{<1} slice basis."""
    basis = exterior_basis(quot.algebra.dim, k)
    idx = quot.index(k)
    v = [Fraction(0)] * len(idx)
    for i, val in enumerate(x):
        if val:
            v[idx[((), basis[i])]] = Fraction(val)
    return v


@dataclass
class ChernWeilResult:
    n: int
    N: int
    polynomial: SymPolynomial
    basis: List[SymPolynomial]
    coordinates: List[Fraction]
    trace_coordinates: Optional[Dict[str, Fraction]]
    suspension: ExteriorCochain

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n, "N": self.N,
            "invariant_basis": [repr(b) for b in self.basis],
            "coordinates": [str(x) for x in self.coordinates],
            "trace_coordinates": ({k: str(v) for k, v in self.trace_coordinates.items()}
                                  if self.trace_coordinates else None),
        }


def chern_weil_class(n: int, N: int, D: Optional[int] = None) -> ChernWeilResult:
    """The invariant polynomial whose suspension is [p_n], scalar solved for."""
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    basis = invariant_polynomials(n, N)
    k = 2 * n - 1
    ce = ce_complex(N)
    images = [suspension_sg(P, D).to_vector() for P in basis]
    pn = primitive_element(n, N).to_vector()
    cols = [{i: x for i, x in enumerate(v) if x} for v in images] + ce.diff(k - 1).col_dicts()
    m = SparseMatrix.from_columns(ce.dim(k), cols)
    sol = solve(m, pn)
    if sol is None:
        raise LookupError(f"no invariant polynomial suspends to p_{n} on gl_{N}")
    coords = sol[:len(basis)]
    poly = SymPolynomial(gl(N), n)
    for t, P in zip(coords, basis):
        if t:
            poly = poly + P.scale(t)
    return ChernWeilResult(n, N, poly, basis, coords, trace_coordinates(poly),
                           suspension_sg(poly, D))


def trace_coordinates(P: SymPolynomial) -> Optional[Dict[str, Fraction]]:
    """Coordinates of P in products of Tr(X^j) of the same degree, if unique."""
    n, N = P.degree, P.algebra.N
    parts = _partitions(n)
    polys = []
    names = []
    for part in parts:
        poly = None
        for j in part:
            t = trace_power(j, N)
            poly = t if poly is None else poly * t
        polys.append(poly)
        names.append("*".join(f"Tr(X^{j})" for j in part))
    size = len(sym_basis(N * N, n))
    cols = [{i: x for i, x in enumerate(p.to_vector()) if x} for p in polys]
    m = SparseMatrix.from_columns(size, cols)
    sol = solve(m, P.to_vector())
    if sol is None:
        return None
    return {name: x for name, x in zip(names, sol)}


def _partitions(n: int, largest: Optional[int] = None) -> List[Tuple[int, ...]]:
    largest = largest or n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return out
