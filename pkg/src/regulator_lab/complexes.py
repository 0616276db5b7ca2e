"""Finite cochain complexes over Q and the homological operations on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .linalg import SparseMatrix, nullspace, rank, solve


class ComplexError(ValueError):
    """A differential does not square to zero or has the wrong shape."""


class NotACocycleError(ValueError):
    pass


class ExactnessError(ValueError):
    """The maps given for a short exact sequence are not compatible."""


class ChainMapError(ValueError):
    pass


class FiniteComplex:
    """Cochain complex ``C^lo -> ... -> C^hi`` of finite-dimensional Q-spaces.

    ``differentials[k]`` is the matrix of ``d: C^k -> C^{k+1}`` for
    ``lo <= k < hi``; missing entries are zero maps.  ``d∘d = 0`` is checked
    exactly on construction.
    """

    def __init__(self, dims: Mapping[int, int], differentials: Mapping[int, SparseMatrix],
                 name: str = "", basis_labels: Optional[Mapping[int, Sequence]] = None):
        if not dims:
            raise ComplexError("empty complex")
        self.lo = min(dims)
        self.hi = max(dims)
        if sorted(dims) != list(range(self.lo, self.hi + 1)):
            raise ComplexError("degrees must form a contiguous range")
        self.dims: Dict[int, int] = dict(dims)
        self.name = name
        self.basis_labels = dict(basis_labels or {})
        self.d: Dict[int, SparseMatrix] = {}
        for k in range(self.lo, self.hi):
            m = differentials.get(k)
            if m is None:
                m = SparseMatrix(self.dims[k + 1], self.dims[k])
            if m.shape != (self.dims[k + 1], self.dims[k]):
                raise ComplexError(
                    f"d^{k} has shape {m.shape}, expected {(self.dims[k + 1], self.dims[k])}")
            self.d[k] = m
        for k in differentials:
            if not (self.lo <= k < self.hi):
                if not differentials[k].is_zero():
                    raise ComplexError(f"differential in degree {k} outside the complex")
        for k in range(self.lo, self.hi - 1):
            if not (self.d[k + 1] @ self.d[k]).is_zero():
                raise ComplexError(f"d^{k+1} d^{k} != 0 in {name or 'complex'}")

    def __repr__(self) -> str:
        dims = ", ".join(f"{k}:{self.dims[k]}" for k in self.degrees)
        return f"FiniteComplex({self.name!r}, dims={{{dims}}})"

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def diff(self, k: int) -> SparseMatrix:
        """``d: C^k -> C^{k+1}``, the zero map outside the stored range."""
        if k in self.d:
            return self.d[k]
        return SparseMatrix(self.dim(k + 1), self.dim(k))

    def apply_d(self, k: int, vec: Sequence) -> List[Fraction]:
        return self.diff(k).apply(list(vec))

    def cohomology_dims(self) -> Dict[int, int]:
        return cohomology_dims(self)


def cohomology_dims(c: FiniteComplex) -> Dict[int, int]:
    """``dim H^k = dim ker d^k - rank d^{k-1}`` for every degree of ``c``."""
    ranks = {k: rank(c.diff(k)) for k in range(c.lo - 1, c.hi + 1)}
    return {k: c.dim(k) - ranks[k] - ranks[k - 1] for k in c.degrees}


def betti_list(c: FiniteComplex) -> List[int]:
    dims = cohomology_dims(c)
    return [dims[k] for k in c.degrees]


@dataclass
class CohomologyClass:
    """A degree-``k`` vector of ``complex`` viewed as a cohomology class."""

    complex: FiniteComplex
    degree: int
    representative: List[Fraction]
    certified: bool = field(default=False)

    def __post_init__(self):
        self.representative = [Fraction(x) for x in self.representative]
        if len(self.representative) != self.complex.dim(self.degree):
            raise ValueError(
                f"representative has length {len(self.representative)}, "
                f"C^{self.degree} has dimension {self.complex.dim(self.degree)}")

    @classmethod
    def cocycle(cls, complex: FiniteComplex, degree: int, rep: Sequence) -> "CohomologyClass":
        """Build a class and certify ``d(rep) = 0``; raises otherwise."""
        c = cls(complex, degree, list(rep))
        c.certify()
        return c

    def certify(self) -> "CohomologyClass":
        if any(self.complex.apply_d(self.degree, self.representative)):
            raise NotACocycleError(f"representative in degree {self.degree} is not closed")
        self.certified = True
        return self

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        _same_space(self, other)
        return CohomologyClass(self.complex, self.degree,
                               [a + b for a, b in zip(self.representative, other.representative)],
                               self.certified and other.certified)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self + other.scale(-1)

    def scale(self, c) -> "CohomologyClass":
        c = Fraction(c)
        return CohomologyClass(self.complex, self.degree,
                               [c * a for a in self.representative], self.certified)

    def is_zero(self) -> bool:
        return class_is_zero(self)


def _same_space(a: CohomologyClass, b: CohomologyClass) -> None:
    if a.complex is not b.complex or a.degree != b.degree:
        raise ValueError("classes live in different spaces")


def class_is_zero(c: CohomologyClass) -> bool:
    """True iff the representative is a coboundary."""
    if not c.certified:
        c.certify()
    if not any(c.representative):
        return True
    prev = c.complex.diff(c.degree - 1)
    if prev.cols == 0:
        return False
    return solve(prev, c.representative) is not None


def coboundary_preimage(c: CohomologyClass) -> Optional[List[Fraction]]:
    """Some ``y`` with ``d y = rep``, or None."""
    prev = c.complex.diff(c.degree - 1)
    if not any(c.representative):
        return [Fraction(0)] * prev.cols
    if prev.cols == 0:
        return None
    return solve(prev, c.representative)


def classes_equal(a: CohomologyClass, b: CohomologyClass) -> bool:
    return class_is_zero(a - b)


def cohomology_basis(c: FiniteComplex, k: int) -> List[List[Fraction]]:
    """Cocycles in degree ``k`` whose classes form a basis of ``H^k``."""
    from .linalg import column_basis

    cocycles = nullspace(c.diff(k))
    bvecs = [[col.get(i, Fraction(0)) for i in range(c.dim(k))]
             for col in c.diff(k - 1).col_dicts()]
    keep = column_basis(bvecs + cocycles, c.dim(k))
    nb = len(bvecs)
    return [cocycles[i - nb] for i in keep if i >= nb]


def cohomology_coordinates(c: FiniteComplex, k: int, basis: Sequence[Sequence],
                           vec: Sequence) -> Optional[List[Fraction]]:
    """Coordinates of ``[vec]`` against the classes of ``basis``.

    Solves ``sum_i t_i basis_i + d y = vec``; returns ``t`` (None if ``vec`` is
    not in the span modulo coboundaries).
    """
    n = c.dim(k)
    prev = c.diff(k - 1)
    cols = [{i: Fraction(x) for i, x in enumerate(b) if x} for b in basis]
    cols += prev.col_dicts()
    m = SparseMatrix.from_columns(n, cols)
    sol = solve(m, list(vec))
    if sol is None:
        return None
    return sol[:len(basis)]


# ---------------------------------------------------------------------------
# short exact sequences and connecting maps


@dataclass
class ShortExactSequence:
    """Degreewise split ``0 -> sub -i-> total -q-> quotient -> 0``.

    ``section`` (``s``) and ``retraction`` (``r``) are graded linear maps with
    ``q s = 1``, ``r i = 1``, ``r s = 0`` and ``i r + s q = 1``; they need not
    commute with differentials.
    """

    sub: FiniteComplex
    total: FiniteComplex
    quotient: FiniteComplex
    inclusion: Dict[int, SparseMatrix]
    projection: Dict[int, SparseMatrix]
    section: Dict[int, SparseMatrix]
    retraction: Dict[int, SparseMatrix]

    def __post_init__(self):
        self.check()

    def _map(self, maps, k, rows, cols) -> SparseMatrix:
        m = maps.get(k)
        return m if m is not None else SparseMatrix(rows, cols)

    def i(self, k):
        return self._map(self.inclusion, k, self.total.dim(k), self.sub.dim(k))

    def q(self, k):
        return self._map(self.projection, k, self.quotient.dim(k), self.total.dim(k))

    def s(self, k):
        return self._map(self.section, k, self.total.dim(k), self.quotient.dim(k))

    def r(self, k):
        return self._map(self.retraction, k, self.sub.dim(k), self.total.dim(k))

    def check(self) -> None:
        lo = min(self.sub.lo, self.total.lo, self.quotient.lo)
        hi = max(self.sub.hi, self.total.hi, self.quotient.hi)
        for k in range(lo, hi + 1):
            i, q, s, r = self.i(k), self.q(k), self.s(k), self.r(k)
            if not (q @ i).is_zero():
                raise ExactnessError(f"q i != 0 in degree {k}")
            if q @ s != SparseMatrix.identity(self.quotient.dim(k)):
                raise ExactnessError(f"q s != 1 in degree {k}")
            if r @ i != SparseMatrix.identity(self.sub.dim(k)):
                raise ExactnessError(f"r i != 1 in degree {k}")
            if not (r @ s).is_zero():
                raise ExactnessError(f"r s != 0 in degree {k}")
            if (i @ r) + (s @ q) != SparseMatrix.identity(self.total.dim(k)):
                raise ExactnessError(f"i r + s q != 1 in degree {k}")
        for k in range(lo, hi):
            # i and q must be chain maps
            if self.total.diff(k) @ self.i(k) != self.i(k + 1) @ self.sub.diff(k):
                raise ExactnessError(f"inclusion is not a chain map in degree {k}")
            if self.quotient.diff(k) @ self.q(k) != self.q(k + 1) @ self.total.diff(k):
                raise ExactnessError(f"projection is not a chain map in degree {k}")


def connecting_map(ses: ShortExactSequence, c: CohomologyClass,
                   preimage: Optional[Sequence] = None) -> CohomologyClass:
    """Snake-lemma connecting map ``H^k(quotient) -> H^{k+1}(sub)``.

    ``preimage`` overrides the canonical lift ``s(c)``; it must project to
    the representative of ``c``.
    """
    if c.complex is not ses.quotient:
        raise ValueError("class does not live in the quotient complex")
    if not c.certified:
        c.certify()
    k = c.degree
    if preimage is None:
        x = ses.s(k).apply(c.representative)
    else:
        x = [Fraction(v) for v in preimage]
        if ses.q(k).apply(x) != c.representative:
            raise ExactnessError("preimage does not project onto the class representative")
    y = ses.total.apply_d(k, x)
    z = ses.r(k + 1).apply(y)
    if ses.i(k + 1).apply(z) != y:
        raise ExactnessError("d(lift) does not lie in the subcomplex")
    return CohomologyClass.cocycle(ses.sub, k + 1, z)


# ---------------------------------------------------------------------------
# chain maps and homotopies


def check_chain_map(f: Mapping[int, SparseMatrix], source: FiniteComplex,
                    target: FiniteComplex, degrees: Sequence[int]) -> Dict[int, SparseMatrix]:
    """Return the residuals ``d f - f d`` for ``k`` in ``degrees`` (k -> k+1)."""
    out = {}
    for k in degrees:
        if k + 1 not in f or k not in f:
            continue
        out[k] = target.diff(k) @ f[k] - f[k + 1] @ source.diff(k)
    return out


def is_chain_map(f, source, target, degrees) -> bool:
    return all(m.is_zero() for m in check_chain_map(f, source, target, degrees).values())


def null_homotopy_solve(f: Mapping[int, SparseMatrix], g: Mapping[int, SparseMatrix],
                        source: FiniteComplex, target: FiniteComplex,
                        lo: int, hi: int) -> Optional[Dict[int, SparseMatrix]]:
    """Find ``h_k: C^k -> D^{k-1}`` with ``f - g = h d + d h`` in degrees lo..hi-1.

    ``f`` and ``g`` are given in degrees ``lo..hi`` and must commute with the
    differentials there.  Unknowns are ``h_k`` for ``lo < k <= hi`` plus
    ``h_lo`` when ``D^{lo-1}`` is nonzero.  Returns None if infeasible; a
    returned homotopy is re-verified entrywise.
    """
    for name, m in (("f", f), ("g", g)):
        res = check_chain_map(m, source, target, range(lo, hi))
        bad = [k for k, r in res.items() if not r.is_zero()]
        if bad:
            raise ChainMapError(f"{name} is not a chain map in degrees {bad}")
    # index the unknown entries
    index = {}
    for k in range(lo, hi + 1):
        rows, cols = target.dim(k - 1), source.dim(k)
        if rows == 0 or cols == 0:
            continue
        for a in range(rows):
            for b in range(cols):
                index[k, a, b] = len(index)
    eqs = []
    rhs = []
    for k in range(lo, hi):
        diff = f[k] - g[k]
        dD = target.diff(k - 1).col_dicts()   # D^{k-1} -> D^k, column j = d(e_j)
        dC_cols = source.diff(k).col_dicts()
        for a in range(target.dim(k)):
            for b in range(source.dim(k)):
                row = {}
                # (h_{k+1} dC)[a, b] = sum_j h_{k+1}[a, j] dC[j, b]
                for j, x in dC_cols[b].items():
                    key = (k + 1, a, j)
                    if key in index:
                        row[index[key]] = row.get(index[key], 0) + x
                # (dD h_k)[a, b] = sum_j dD[a, j] h_k[j, b]
                for j in range(target.dim(k - 1)):
                    x = dD[j].get(a)
                    if x:
                        key = (k, j, b)
                        if key in index:
                            row[index[key]] = row.get(index[key], 0) + x
                row = {i: x for i, x in row.items() if x}
                val = diff[a, b]
                if not row and not val:
                    continue
                eqs.append(row)
                rhs.append(val)
    n = len(index)
    system = SparseMatrix(len(eqs), n, {(r, c): x for r, row in enumerate(eqs)
                                         for c, x in row.items()})
    sol = solve(system, rhs) if eqs else [Fraction(0)] * n
    if sol is None:
        return None
    h: Dict[int, SparseMatrix] = {}
    for k in range(lo, hi + 1):
        h[k] = SparseMatrix(target.dim(k - 1), source.dim(k),
                            {(a, b): sol[i] for (kk, a, b), i in index.items()
                             if kk == k and sol[i]})
    for k in range(lo, hi):
        lhs = f[k] - g[k]
        hd = h[k + 1] @ source.diff(k)
        dh = target.diff(k - 1) @ h[k]
        if lhs != hd + dh:
            raise AssertionError(f"homotopy verification failed in degree {k}")
    return h


def induced_map_on_cohomology(f: Mapping[int, SparseMatrix], source: FiniteComplex,
                              target: FiniteComplex, k: int):
    """Matrix of ``H^k(f)`` in computed cohomology bases (columns = source)."""
    src = cohomology_basis(source, k)
    tgt = cohomology_basis(target, k)
    cols = []
    for v in src:
        img = f[k].apply(v)
        coords = cohomology_coordinates(target, k, tgt, img)
        if coords is None:
            raise AssertionError("image of a cocycle is not a cocycle")
        cols.append(coords)
    return src, tgt, cols
