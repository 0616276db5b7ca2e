"""Sparse exact linear algebra over the rationals.

Rows are eliminated fraction-free: every working row is an integer row
divided by its content, so Python ints stay small and no Fraction is
created inside the inner loop.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class SparseMatrix:
    """``rows x cols`` matrix stored as ``{(i, j): Fraction}`` without zeros."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries: Dict[Tuple[int, int], Fraction] = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (i, j), x in items:
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
                if x:
                    self.entries[i, j] = self.entries.get((i, j), 0) + Fraction(x)
                    if not self.entries[i, j]:
                        del self.entries[i, j]

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        m = len(rows)
        n = len(rows[0]) if m else 0
        return cls(m, n, {(i, j): x for i, r in enumerate(rows)
                          for j, x in enumerate(r) if x})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Dict[int, Fraction]]) -> "SparseMatrix":
        return cls(rows, len(columns), {(i, j): x for j, c in enumerate(columns)
                                        for i, x in c.items() if x})

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def row_dicts(self) -> List[Dict[int, Fraction]]:
        out: List[Dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def col_dicts(self) -> List[Dict[int, Fraction]]:
        out: List[Dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (i, j), x in self.entries.items():
            out[j][i] = x
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            {(j, i): x for (i, j), x in self.entries.items()})

    T = property(transpose)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same_shape(self, other)
        out = dict(self.entries)
        for k, x in other.entries.items():
            y = out.get(k, 0) + x
            if y:
                out[k] = y
            else:
                out.pop(k, None)
        return SparseMatrix(self.rows, self.cols, out)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: -x for k, x in self.entries.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = Fraction(c)
        if not c:
            return SparseMatrix(self.rows, self.cols)
        return SparseMatrix(self.rows, self.cols, {k: c * x for k, x in self.entries.items()})

    def __rmul__(self, c) -> "SparseMatrix":
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            orows = other.row_dicts()
            acc: Dict[Tuple[int, int], Fraction] = {}
            for (i, k), x in self.entries.items():
                for j, y in orows[k].items():
                    acc[i, j] = acc.get((i, j), 0) + x * y
            return SparseMatrix(self.rows, other.cols,
                                {k: v for k, v in acc.items() if v})
        return self.apply(other)

    def apply(self, vec: Sequence) -> List[Fraction]:
        """Matrix times a dense vector."""
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.shape} matrix")
        out = [Fraction(0)] * self.rows
        for (i, j), x in self.entries.items():
            if vec[j]:
                out[i] += x * vec[j]
        return out

    def apply_sparse(self, vec: Dict[int, Fraction]) -> Dict[int, Fraction]:
        cols = self.col_dicts()
        out: Dict[int, Fraction] = {}
        for j, y in vec.items():
            for i, x in cols[j].items():
                out[i] = out.get(i, 0) + x * y
        return {i: x for i, x in out.items() if x}

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        ent = dict(self.entries)
        ent.update({(i, j + self.cols): x for (i, j), x in other.entries.items()})
        return SparseMatrix(self.rows, self.cols + other.cols, ent)

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        ent = dict(self.entries)
        ent.update({(i + self.rows, j): x for (i, j), x in other.entries.items()})
        return SparseMatrix(self.rows + other.rows, self.cols, ent)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        return SparseMatrix(len(rows), len(cols),
                            {(rpos[i], cpos[j]): x for (i, j), x in self.entries.items()
                             if i in rpos and j in cpos})


def _check_same_shape(a: SparseMatrix, b: SparseMatrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


# ---------------------------------------------------------------------------
# fraction-free elimination


def _integer_row(row: Dict[int, Fraction]) -> Dict[int, int]:
    den = 1
    for x in row.values():
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    irow = {j: int(Fraction(x) * den) for j, x in row.items() if x}
    return _primitive(irow)


def _primitive(irow: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for x in irow.values():
        g = gcd(g, x)
        if g == 1:
            return irow
    if g > 1:
        irow = {j: x // g for j, x in irow.items()}
    return irow


def _eliminate(target: Dict[int, int], pivot_row: Dict[int, int], col: int) -> Dict[int, int]:
    """Return a primitive multiple of ``target`` with column ``col`` cleared."""
    a = pivot_row[col]
    b = target[col]
    g = gcd(a, b)
    fa, fb = a // g, b // g
    if fa < 0:
        fa, fb = -fa, -fb
    out = {j: fa * x for j, x in target.items()}
    for j, x in pivot_row.items():
        y = out.get(j, 0) - fb * x
        if y:
            out[j] = y
        else:
            out.pop(j, None)
    return _primitive(out)


class Echelon:
    """Incrementally maintained row echelon form (fraction-free).

    ``pivots`` maps a pivot column to its integer row.  With
    ``reduced=True`` every pivot column is cleared from all other rows.
    """

    def __init__(self, ncols: int, reduced: bool = False):
        self.ncols = ncols
        self.reduced = reduced
        self.pivots: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Dict[int, int]) -> Dict[int, int]:
        row = dict(row)
        while row:
            hit = [j for j in row if j in self.pivots]
            if not hit:
                return row
            j = min(hit)
            row = _eliminate(row, self.pivots[j], j)
        return row

    def add(self, row) -> bool:
        """Insert a row; return True if it increased the rank."""
        irow = self.reduce(_integer_row(row))
        if not irow:
            return False
        piv = min(irow)
        if irow[piv] < 0:
            irow = {j: -x for j, x in irow.items()}
        if self.reduced:
            for j, other in list(self.pivots.items()):
                if piv in other:
                    self.pivots[j] = _eliminate(other, irow, piv)
        self.pivots[piv] = irow
        return True

    def contains(self, row) -> bool:
        if not row:
            return True
        return not self.reduce(_integer_row(row))

    def rows(self) -> List[Dict[int, Fraction]]:
        """Rows normalised so each pivot entry is 1."""
        out = []
        for piv in sorted(self.pivots):
            r = self.pivots[piv]
            lead = r[piv]
            out.append({j: Fraction(x, lead) for j, x in r.items()})
        return out


def rank(m: SparseMatrix) -> int:
    """Exact rank; eliminates along the shorter side."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.rows > m.cols:
        m = m.transpose()
    ech = Echelon(m.cols)
    for row in sorted(m.row_dicts(), key=len):
        if row:
            ech.add(row)
    return ech.rank


def rref(m: SparseMatrix) -> Tuple[List[Dict[int, Fraction]], List[int]]:
    """Reduced row echelon rows (pivot entries 1) and pivot columns."""
    ech = Echelon(m.cols, reduced=True)
    for row in m.row_dicts():
        if row:
            ech.add(row)
    rows = ech.rows()
    return rows, sorted(ech.pivots)


def nullspace(m: SparseMatrix) -> List[List[Fraction]]:
    """Basis of ``{x : m x = 0}`` as dense vectors, one per free column."""
    rows, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for r, piv in zip(rows, pivots):
            c = r.get(free)
            if c:
                v[piv] = -c
        basis.append(v)
    return basis


def solve(m: SparseMatrix, b: Sequence) -> Optional[List[Fraction]]:
    """One exact solution of ``m x = b`` (free variables 0), or None."""
    if len(b) != m.rows:
        raise ValueError("right-hand side has the wrong length")
    aug = m.hstack(SparseMatrix(m.rows, 1, {(i, 0): x for i, x in enumerate(b) if x}))
    rows, pivots = rref(aug)
    x = [Fraction(0)] * m.cols
    for r, piv in zip(rows, pivots):
        if piv == m.cols:
            return None
        x[piv] = r.get(m.cols, Fraction(0))
    return x


def solve_many(m: SparseMatrix, rhs: Sequence[Sequence]) -> List[Optional[List[Fraction]]]:
    """Solve ``m x = b`` for several right-hand sides with one elimination."""
    k = len(rhs)
    ent = {}
    for c, b in enumerate(rhs):
        for i, x in enumerate(b):
            if x:
                ent[i, c] = x
    aug = m.hstack(SparseMatrix(m.rows, k, ent))
    rows, pivots = rref(aug)
    out: List[Optional[List[Fraction]]] = []
    bad = set()
    for r, piv in zip(rows, pivots):
        if piv >= m.cols:
            bad.add(piv - m.cols)
    for c in range(k):
        if c in bad:
            out.append(None)
            continue
        x = [Fraction(0)] * m.cols
        for r, piv in zip(rows, pivots):
            if piv < m.cols:
                x[piv] = r.get(m.cols + c, Fraction(0))
        out.append(x)
    # a row whose pivot lies in the rhs block makes only that rhs infeasible
    # when no earlier rhs column carries it; re-check exactly
    for c in range(k):
        x = out[c]
        if x is not None and m.apply(x) != [Fraction(v) for v in rhs[c]]:
            out[c] = None
    return out


def in_column_space(m: SparseMatrix, b: Sequence) -> bool:
    return solve(m, b) is not None


def column_basis(vectors: Iterable[Sequence], dim: int) -> List[int]:
    """Indices of a maximal independent subfamily (greedy, in order)."""
    ech = Echelon(dim)
    keep = []
    for idx, v in enumerate(vectors):
        row = {j: x for j, x in enumerate(v) if x}
        if row and ech.add(row):
            keep.append(idx)
    return keep


def dense_vector(d: Dict[int, Fraction], n: int) -> List[Fraction]:
    v = [Fraction(0)] * n
    for i, x in d.items():
        v[i] = Fraction(x)
    return v


def inverse(m: SparseMatrix) -> SparseMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = m.hstack(SparseMatrix.identity(n))
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len([p for p in pivots if p < n]) != n:
        raise ZeroDivisionError("matrix is singular")
    ent = {}
    for r, piv in zip(rows, pivots):
        for j, x in r.items():
            if j >= n:
                ent[piv, j - n] = x
    return SparseMatrix(n, n, ent)
