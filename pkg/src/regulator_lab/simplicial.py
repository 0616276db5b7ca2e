"""Infinitesimal classifying space of GL_N, its normalization, Φ and Ψ.

Level ``n`` of B.G is ``G^n``.  Near the identity a point is ``(1+X_1, ...,
1+X_n)`` and functions are polynomials in the slot coordinates ``x_k[a]``
(``a = i*N + j``).  The ring ``T_n`` keeps one coordinate per slot (per-slot
square zero, the ideal generated by ``m_e^2`` pulled back along each
projection).  The infinitesimal model is

    Q_n = T_n / J_n,

where ``J_n`` is spanned by ``m * u_a * u_b`` with ``u`` the coordinates of
``(1+X_i)...(1+X_j) - 1`` over slot intervals of length >= 2.  These are the
pullbacks of ``m_e^2`` along all monotone maps ``[1] -> [n]``, so ``J`` is the
cosimplicial ideal generated by ``m_e^2``.

Cofaces are pullbacks along the B.G faces ``(h_1, ..., h_i h_{i+1}, ..., h_n)``;
codegeneracies along the insertion of ``1``.  Elements of ``T_n`` are dicts
from keys (tuples of length ``n`` holding ``-1`` for a constant slot or a
coordinate index) to Fractions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import (ChainMapError, FiniteComplex, check_chain_map, cohomology_basis,
                        induced_map_on_cohomology,
                        null_homotopy_solve)
from .lie import ExteriorCochain, ce_complex, exterior_index, gl, perm_sign
from .linalg import Echelon, SparseMatrix, solve

Key = Tuple[int, ...]
Poly = Dict[Key, Fraction]

MAX_LEVEL_DIM = 5000


def max_feasible_level(N: int) -> int:
    """Largest level whose monomial count stays within the size budget (at most 5)."""
    n = 0
    while n < 5 and (1 + N * N) ** (n + 1) <= MAX_LEVEL_DIM:
        n += 1
    return n


class ModelSizeError(ValueError):
    """The requested level would exceed the size budget."""


class CosimplicialError(AssertionError):
    """A cosimplicial identity or ideal-compatibility check failed."""


class IntertwiningError(AssertionError):
    """The normalization isomorphism does not intertwine the differentials."""


# ---------------------------------------------------------------------------
# multilinear slot polynomials


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for k1, x in p.items():
        for k2, y in q.items():
            key = []
            for a, b in zip(k1, k2):
                if a >= 0 and b >= 0:
                    break
                key.append(a if a >= 0 else b)
            else:
                key = tuple(key)
                v = out.get(key, 0) + x * y
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


def _add(p: Poly, q: Poly, c=1) -> Poly:
    out = dict(p)
    for k, x in q.items():
        v = out.get(k, 0) + c * x
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _const(n: int) -> Poly:
    return {(-1,) * n: Fraction(1)}


def _coord(n: int, slot: int, a: int) -> Poly:
    key = [-1] * n
    key[slot] = a
    return {tuple(key): Fraction(1)}


def _product_minus_one(N: int, n: int, slots: Sequence[Tuple[int, int]]) -> List[Poly]:
    """Coordinates of ``prod (1 + s X_slot) - 1`` for ``(slot, s)`` in order."""
    dim = N * N
    P: List[Poly] = [{} for _ in range(dim)]
    for slot, s in slots:
        X = [{k: s * x for k, x in _coord(n, slot, a).items()} for a in range(dim)]
        new = [_add(P[a], X[a]) for a in range(dim)]
        for i in range(N):
            for j in range(N):
                acc = new[i * N + j]
                for c in range(N):
                    acc = _add(acc, _mul(P[i * N + c], X[c * N + j]))
                new[i * N + j] = acc
        P = new
    return P


def _pullback_monomial(key: Key, images: List[Optional[List[Poly]]], n_target: int) -> Poly:
    """Pull back a monomial given the image coordinates of each source slot."""
    out = _const(n_target)
    for slot, a in enumerate(key):
        if a < 0:
            continue
        img = images[slot]
        if img is None:
            return {}
        out = _mul(out, img[a])
        if not out:
            return {}
    return out


def _coface_images(N: int, n: int, i: int) -> List[List[Poly]]:
    """Slot images for ``δ^i: T_n -> T_{n+1}`` (pullback along the i-th face)."""
    dim = N * N
    m = n + 1
    images = []
    for k in range(n):  # 0-based slot k is slot k+1
        s = k + 1
        if i == 0:
            target = k + 1
        elif i == n + 1 or s < i:
            target = k
        elif s == i:
            images.append(_product_minus_one(N, m, [(k, 1), (k + 1, 1)]))
            continue
        else:
            target = k + 1
        images.append([_coord(m, target, a) for a in range(dim)])
    return images


def _codegeneracy_images(N: int, n: int, j: int) -> List[Optional[List[Poly]]]:
    """Slot images for ``σ^j: T_n -> T_{n-1}`` (insert the identity at slot j+1)."""
    dim = N * N
    images: List[Optional[List[Poly]]] = []
    for k in range(n):
        if k < j:
            images.append([_coord(n - 1, k, a) for a in range(dim)])
        elif k == j:
            images.append(None)
        else:
            images.append([_coord(n - 1, k - 1, a) for a in range(dim)])
    return images


def coface_on_T(N: int, n: int, i: int, f: Poly) -> Poly:
    images = _coface_images(N, n, i)
    out: Poly = {}
    for key, x in f.items():
        out = _add(out, _pullback_monomial(key, images, n + 1), x)
    return out


def codegeneracy_on_T(N: int, n: int, j: int, f: Poly) -> Poly:
    images = _codegeneracy_images(N, n, j)
    out: Poly = {}
    for key, x in f.items():
        out = _add(out, _pullback_monomial(key, images, n - 1), x)
    return out


# ---------------------------------------------------------------------------
# the quotient levels


def t_basis(N: int, n: int) -> List[Key]:
    """Monomials of ``T_n``, most non-constant slots first."""
    keys = list(product(range(-1, N * N), repeat=n))
    keys.sort(key=lambda k: (-sum(1 for a in k if a >= 0), k))
    return keys


@dataclass
class QuotientLevel:
    """``Q_n = T_n / J_n`` with a normal form given by an echelon basis of J_n."""

    N: int
    n: int
    t_keys: List[Key]
    t_index: Dict[Key, int]
    ideal_rows: List[Dict[int, Fraction]]   # pivot entry 1, sorted by pivot
    ideal_pivots: List[int]
    standard: List[Key]                     # basis of Q_n (non-pivot monomials)
    standard_index: Dict[Key, int]

    @property
    def dim(self) -> int:
        return len(self.standard)

    def reduce(self, f: Poly) -> List[Fraction]:
        """Coordinates of ``f mod J_n`` in the standard-monomial basis."""
        v: Dict[int, Fraction] = {}
        for key, x in f.items():
            c = self.t_index[key]
            v[c] = v.get(c, 0) + x
        for piv, row in zip(self.ideal_pivots, self.ideal_rows):
            x = v.get(piv)
            if not x:
                continue
            for c, y in row.items():
                w = v.get(c, 0) - x * y
                if w:
                    v[c] = w
                else:
                    v.pop(c, None)
        out = [Fraction(0)] * self.dim
        for c, x in v.items():
            out[self.standard_index[self.t_keys[c]]] = x
        return out

    def in_ideal(self, f: Poly) -> bool:
        return not any(self.reduce(f))

    def element(self, vec: Sequence) -> Poly:
        return {self.standard[i]: Fraction(x) for i, x in enumerate(vec) if x}


def ideal_generators(N: int, n: int) -> List[Poly]:
    """Spanning set of ``J_n``: monomials times products of two interval coordinates."""
    dim = N * N
    gens: List[Poly] = []
    monos = t_basis(N, n)
    seen = set()
    for a in range(n):
        for b in range(a + 1, n):
            u = _product_minus_one(N, n, [(k, 1) for k in range(a, b + 1)])
            for c, d in combinations_with_replacement(range(dim), 2):
                w = _mul(u[c], u[d])
                if not w:
                    continue
                for m in monos:
                    g = _mul({m: Fraction(1)}, w)
                    if not g:
                        continue
                    sig = tuple(sorted(g.items()))
                    if sig in seen:
                        continue
                    seen.add(sig)
                    gens.append(g)
    return gens


@lru_cache(maxsize=None)
def quotient_level(N: int, n: int) -> QuotientLevel:
    size = (1 + N * N) ** n
    if size > MAX_LEVEL_DIM:
        raise ModelSizeError(f"level {n} of gl_{N} has {size} monomials (> {MAX_LEVEL_DIM})")
    keys = t_basis(N, n)
    index = {k: i for i, k in enumerate(keys)}
    ech = Echelon(len(keys))
    for g in sorted(ideal_generators(N, n), key=len):
        ech.add({index[k]: x for k, x in g.items()})
        if ech.rank == len(keys):
            break
    rows = ech.rows()
    pivots = sorted(ech.pivots)
    pset = set(pivots)
    standard = [k for i, k in enumerate(keys) if i not in pset]
    return QuotientLevel(N, n, keys, index, rows, pivots, standard,
                         {k: i for i, k in enumerate(standard)})


# ---------------------------------------------------------------------------
# cosimplicial model


@dataclass
class CosimplicialLevel:
    level: int
    quotient: QuotientLevel
    cofaces: List[SparseMatrix] = field(default_factory=list)        # Q_n -> Q_{n+1}
    codegeneracies: List[SparseMatrix] = field(default_factory=list)  # Q_n -> Q_{n-1}

    @property
    def dim(self) -> int:
        return self.quotient.dim


def _operator_matrix(src: QuotientLevel, tgt: QuotientLevel, op) -> SparseMatrix:
    cols = []
    for key in src.standard:
        img = tgt.reduce(op({key: Fraction(1)}))
        cols.append({r: x for r, x in enumerate(img) if x})
    return SparseMatrix.from_columns(tgt.dim, cols)


@dataclass
class CosimplicialModel:
    N: int
    max_level: int
    levels: List[CosimplicialLevel]
    complex: FiniteComplex

    def coface(self, n: int, i: int) -> SparseMatrix:
        return self.levels[n].cofaces[i]

    def codegeneracy(self, n: int, j: int) -> SparseMatrix:
        return self.levels[n].codegeneracies[j]


def _check_ideal_compatibility(N: int, Qs: List[QuotientLevel]) -> None:
    """Cofaces and codegeneracies of T carry J_n into J_{n±1}."""
    for n, Q in enumerate(Qs):
        for piv, row in zip(Q.ideal_pivots, Q.ideal_rows):
            f = {Q.t_keys[c]: x for c, x in row.items()}
            if n + 1 < len(Qs):
                for i in range(n + 2):
                    if not Qs[n + 1].in_ideal(coface_on_T(N, n, i, f)):
                        raise CosimplicialError(f"δ^{i} does not preserve J at level {n}")
            if n >= 1:
                for j in range(n):
                    if not Qs[n - 1].in_ideal(codegeneracy_on_T(N, n, j, f)):
                        raise CosimplicialError(f"σ^{j} does not preserve J at level {n}")


def check_cosimplicial_identities(model: CosimplicialModel) -> List[str]:
    """Return the list of violated identities (empty when all hold)."""
    bad = []
    L = model.levels
    top = model.max_level
    for n in range(top + 1):
        ident = SparseMatrix.identity(L[n].dim)
        # δ^j δ^i = δ^i δ^{j-1}, i < j, from level n to n+2
        if n + 2 <= top:
            for j in range(n + 3):
                for i in range(j):
                    if L[n + 1].cofaces[j] @ L[n].cofaces[i] != L[n + 1].cofaces[i] @ L[n].cofaces[j - 1]:
                        bad.append(f"d{j}d{i} at level {n}")
        # σ^j σ^i = σ^i σ^{j+1}, i <= j, from level n to n-2
        if n >= 2:
            for i in range(n - 1):
                for j in range(i, n - 1):
                    if L[n - 1].codegeneracies[j] @ L[n].codegeneracies[i] != \
                            L[n - 1].codegeneracies[i] @ L[n].codegeneracies[j + 1]:
                        bad.append(f"s{j}s{i} at level {n}")
        # mixed identities from level n to n (via n+1)
        if n + 1 <= top:
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = L[n + 1].codegeneracies[j] @ L[n].cofaces[i]
                    if i < j:
                        rhs = L[n - 1].cofaces[i] @ L[n].codegeneracies[j - 1]
                    elif i in (j, j + 1):
                        rhs = ident
                    else:
                        rhs = L[n - 1].cofaces[i - 1] @ L[n].codegeneracies[j]
                    if lhs != rhs:
                        bad.append(f"s{j}d{i} at level {n}")
    return bad


@lru_cache(maxsize=None)
def build_cosimplicial_model(N: int, max_level: int) -> CosimplicialModel:
    """Levels ``0..max_level`` of the infinitesimal model with all structure maps."""
    if max_level < 1 or max_level > 5:
        raise ModelSizeError("max_level must be in 1..5")
    Qs = [quotient_level(N, n) for n in range(max_level + 1)]
    _check_ideal_compatibility(N, Qs)
    levels = [CosimplicialLevel(n, Q) for n, Q in enumerate(Qs)]
    for n in range(max_level + 1):
        if n < max_level:
            levels[n].cofaces = [
                _operator_matrix(Qs[n], Qs[n + 1], lambda f, i=i, n=n: coface_on_T(N, n, i, f))
                for i in range(n + 2)]
        if n >= 1:
            levels[n].codegeneracies = [
                _operator_matrix(Qs[n], Qs[n - 1], lambda f, j=j, n=n: codegeneracy_on_T(N, n, j, f))
                for j in range(n)]
    diffs = {}
    for n in range(max_level):
        d = SparseMatrix(Qs[n + 1].dim, Qs[n].dim)
        for i, m in enumerate(levels[n].cofaces):
            d = d + m.scale((-1) ** i)
        diffs[n] = d
    cx = FiniteComplex({n: Qs[n].dim for n in range(max_level + 1)}, diffs,
                       name=f"O(B.G)/J for gl_{N}",
                       basis_labels={n: Qs[n].standard for n in range(max_level + 1)})
    model = CosimplicialModel(N, max_level, levels, cx)
    bad = check_cosimplicial_identities(model)
    if bad:
        raise CosimplicialError("cosimplicial identities fail: " + ", ".join(bad))
    return model


# ---------------------------------------------------------------------------
# normalization


@dataclass
class NormalizedComplex:
    model: CosimplicialModel
    bases: Dict[int, List[List[Fraction]]]   # columns in Q_n coordinates
    inclusion: Dict[int, SparseMatrix]
    complex: FiniteComplex


def normalization(model: CosimplicialModel) -> NormalizedComplex:
    """Subcomplex cut out by the kernels of all codegeneracies."""
    from .linalg import nullspace
    bases: Dict[int, List[List[Fraction]]] = {}
    for n, lev in enumerate(model.levels):
        if n == 0:
            bases[0] = [[Fraction(1)]]
            continue
        stacked = lev.codegeneracies[0]
        for m in lev.codegeneracies[1:]:
            stacked = stacked.vstack(m)
        bases[n] = nullspace(stacked)
    inclusion = {n: SparseMatrix.from_columns(model.levels[n].dim,
                                              [{r: x for r, x in enumerate(v) if x} for v in B])
                 for n, B in bases.items()}
    diffs = {}
    for n in range(model.max_level):
        inc = inclusion[n + 1]
        cols = []
        for v in bases[n]:
            img = model.complex.d[n].apply(v)
            coords = solve(inc, img)
            if coords is None:
                raise CosimplicialError(f"normalized subspace not preserved by d at level {n}")
            cols.append({r: x for r, x in enumerate(coords) if x})
        diffs[n] = SparseMatrix.from_columns(len(bases[n + 1]), cols)
    cx = FiniteComplex({n: len(B) for n, B in bases.items()}, diffs,
                       name=f"normalized O(B.G)/J for gl_{model.N}")
    return NormalizedComplex(model, bases, inclusion, cx)


# ---------------------------------------------------------------------------
# Φ and Ψ


def _wedge_key(seq: Sequence[int]) -> Tuple[int, Key]:
    s = perm_sign(seq)
    return s, tuple(sorted(seq))


def phi_on_T(N: int, n: int, f: Poly) -> Dict[Key, Fraction]:
    """``f_1⊗...⊗f_n ↦ df_1(e)∧...∧df_n(e)`` on sorted exterior keys."""
    out: Dict[Key, Fraction] = {}
    for key, x in f.items():
        if n and min(key) < 0:
            continue
        s, k = _wedge_key(key)
        if s:
            out[k] = out.get(k, 0) + s * x
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _psi_slot_images(N: int, n: int) -> List[List[Poly]]:
    """``π^* x_k`` on E-slots 1..n with ``g_0 = 1``: coordinates of ``g_{k-1} g_k^{-1} - 1``.

    Inverses are truncated per slot, ``(1+Y)^{-1} = 1 - Y``, since only the
    multilinear part survives the evaluation below.
    """
    images = []
    for k in range(n):
        if k == 0:
            images.append(_product_minus_one(N, n, [(0, -1)]))
        else:
            images.append(_product_minus_one(N, n, [(k - 1, 1), (k, -1)]))
    return images


def psi_on_T(N: int, n: int, f: Poly) -> Dict[Key, Fraction]:
    """``f ↦ (f∘π)_0(e) d(f∘π)_1(e)∧...``: multilinear part in the E-slots 1..n."""
    images = _psi_slot_images(N, n)
    pulled: Poly = {}
    for key, x in f.items():
        pulled = _add(pulled, _pullback_monomial(key, images, n), x)
    return phi_on_T(N, n, pulled)


def t_map_matrix(N: int, n: int, fn) -> SparseMatrix:
    """Matrix ``T_n -> Λ^n`` of Φ or Ψ on the monomial basis."""
    idx = exterior_index(N * N, n)
    cols = []
    for key in t_basis(N, n):
        img = fn(N, n, {key: Fraction(1)})
        cols.append({idx[k]: x for k, x in img.items()})
    return SparseMatrix.from_columns(len(idx), cols)


def phi_map(N: int, n: int, f: Poly) -> ExteriorCochain:
    """Φ of a level-n function given as a multilinear slot polynomial."""
    return ExteriorCochain(gl(N), n, phi_on_T(N, n, f))


def psi_map(N: int, n: int, f: Poly) -> ExteriorCochain:
    return ExteriorCochain(gl(N), n, psi_on_T(N, n, f))


def descends_to_quotient(model: CosimplicialModel, n: int, fn) -> bool:
    """Whether ``fn`` vanishes on ``J_n``, i.e. is defined on ``Q_n``."""
    Q = model.levels[n].quotient
    for row in Q.ideal_rows:
        if fn(model.N, n, {Q.t_keys[c]: x for c, x in row.items()}):
            return False
    return True


def _ce_window(N: int, top: int) -> FiniteComplex:
    """CE(gl_N) padded with zero spaces up to degree ``top``."""
    ce = ce_complex(N)
    dims = {k: ce.dim(k) if k <= ce.hi else 0 for k in range(top + 1)}
    diffs = {k: ce.diff(k) if k < ce.hi else SparseMatrix(dims[k + 1], dims[k])
             for k in range(top)}
    return FiniteComplex(dims, diffs, name=f"CE(gl_{N})[0..{top}]")


def _negated(c: FiniteComplex) -> FiniteComplex:
    return FiniteComplex(c.dims, {k: -m for k, m in c.d.items()}, name=f"-({c.name})")


@lru_cache(maxsize=None)
def multilinear_complex(N: int, max_level: int) -> FiniteComplex:
    """Multilinear functions on B.G: a cosimplicial subspace of O(B.G).

    Cofaces send multilinear monomials to multilinear polynomials because
    the merged slot ``x_i`` becomes ``x_i + x_{i+1} + x_i x_{i+1}`` in two fresh
    slots, so pullbacks here are exact.
    """
    for n in range(max_level + 1):
        if (1 + N * N) ** n > MAX_LEVEL_DIM:
            raise ModelSizeError(f"level {n} of gl_{N} is too large")
    bases = {n: t_basis(N, n) for n in range(max_level + 1)}
    diffs = {}
    for n in range(max_level):
        idx = {k: i for i, k in enumerate(bases[n + 1])}
        cols = []
        for key in bases[n]:
            img: Poly = {}
            for i in range(n + 2):
                img = _add(img, coface_on_T(N, n, i, {key: Fraction(1)}), (-1) ** i)
            cols.append({idx[k]: x for k, x in img.items()})
        diffs[n] = SparseMatrix.from_columns(len(bases[n + 1]), cols)
    return FiniteComplex({n: len(b) for n, b in bases.items()}, diffs,
                         name=f"multilinear O(B.G) for gl_{N}", basis_labels=bases)


# ---------------------------------------------------------------------------
# normalized model and the maps it carries


def _full_keys(N: int, n: int) -> List[Key]:
    return list(product(range(N * N), repeat=n))


@dataclass
class NormalizedMaps:
    """Φ and Ψ on the normalized model, induced from normalized cochains.

    Normalized functions ``m_e^{⊗n}`` map onto ``N(Q)_n`` through their
    multilinear part ``V^{⊗n}``; both maps only read that part.
    """

    norm: NormalizedComplex
    phi: Dict[int, SparseMatrix]
    psi: Dict[int, SparseMatrix]
    surjective: Dict[int, bool]
    kernel_killed: Dict[int, bool]


def normalized_maps(model: CosimplicialModel) -> NormalizedMaps:
    from .linalg import nullspace, rank
    N = model.N
    norm = normalization(model)
    phi, psi, surj, killed = {}, {}, {}, {}
    for n in range(model.max_level + 1):
        Q = model.levels[n].quotient
        keys = _full_keys(N, n)
        inc = norm.inclusion[n]
        cols = []
        for key in keys:
            v = Q.reduce({key: Fraction(1)})
            coords = solve(inc, v)
            if coords is None:
                raise CosimplicialError(f"normalized monomial not in N(Q) at level {n}")
            cols.append({r: x for r, x in enumerate(coords) if x})
        C = SparseMatrix.from_columns(inc.cols, cols)
        surj[n] = rank(C) == inc.cols
        idx = exterior_index(N * N, n)
        dimL = len(idx) if n <= N * N else 0
        phiV = SparseMatrix.from_columns(dimL, [
            {idx[k]: x for k, x in phi_on_T(N, n, {key: Fraction(1)}).items()} for key in keys])
        psiV = SparseMatrix.from_columns(dimL, [
            {idx[k]: x for k, x in psi_on_T(N, n, {key: Fraction(1)}).items()} for key in keys])
        kern = nullspace(C)
        killed[n] = all(not any(phiV.apply(w)) and not any(psiV.apply(w)) for w in kern)
        if not (surj[n] and killed[n]):
            raise CosimplicialError(f"Φ/Ψ do not descend to N(Q) at level {n}")
        pcols, qcols = [], []
        for j in range(inc.cols):
            e = [Fraction(0)] * inc.cols
            e[j] = Fraction(1)
            w = solve(C, e)
            pcols.append({r: x for r, x in enumerate(phiV.apply(w)) if x})
            qcols.append({r: x for r, x in enumerate(psiV.apply(w)) if x})
        phi[n] = SparseMatrix.from_columns(dimL, pcols)
        psi[n] = SparseMatrix.from_columns(dimL, qcols)
    return NormalizedMaps(norm, phi, psi, surj, killed)


# ---------------------------------------------------------------------------
# normalization isomorphism


@dataclass
class NormalizationIso:
    N: int
    max_level: int
    dims: Dict[int, int]
    matrices: Dict[int, SparseMatrix]   # normalized level n -> Λ^n
    bijective: bool
    intertwines: bool


def normalized_iso_to_ce(N: int, max_level: int) -> NormalizationIso:
    """``v_1⊗...⊗v_n ↦ v_1∧...∧v_n`` on N(Q); checked bijective and a chain map."""
    from .linalg import rank
    if max_level < 2:
        raise ValueError("max_level must be at least 2")
    model = build_cosimplicial_model(N, max_level)
    maps = normalized_maps(model)
    ce = _ce_window(N, max_level)
    mats = maps.phi
    bij = all(m.shape[0] == m.shape[1] and rank(m) == m.shape[0] for m in mats.values())
    inter = all(ce.diff(n) @ mats[n] == mats[n + 1] @ maps.norm.complex.diff(n)
                for n in range(max_level))
    if not inter:
        raise IntertwiningError("normalization isomorphism does not intertwine differentials")
    return NormalizationIso(N, max_level, dict(maps.norm.complex.dims), mats, bij, inter)


# ---------------------------------------------------------------------------
# comparison of Φ and Ψ


def _is_chain(f, src, tgt, degrees) -> bool:
    return all(m.is_zero() for m in check_chain_map(f, src, tgt, degrees).values())


@dataclass
class PhiPsiReport:
    N: int
    max_level: int
    phi_chain_map: bool                  # on N(Q), into CE
    psi_chain_map: bool                  # on N(Q), into CE
    psi_anti_chain_map: bool             # on N(Q), into CE with -d
    multilinear_phi_chain_map: bool      # on multilinear functions of B.G
    multilinear_psi_anti_chain_map: bool
    psi_is_signed_phi: bool              # Ψ_n = (-1)^n Φ_n on N(Q)
    descends: Dict[int, Tuple[bool, bool]]  # (Φ, Ψ) vanish on J_n
    signs: Dict[int, object]             # s_k with Φ_* = s_k Ψ_* on H^k
    cohomology_dims: Dict[int, int]
    induced_phi: Dict[int, List[List[Fraction]]]
    induced_psi: Dict[int, List[List[Fraction]]]
    homotopy_found: Dict[str, Optional[bool]]
    homotopy: Optional[Dict[int, SparseMatrix]] = None

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "max_level": self.max_level,
            "phi_chain_map": self.phi_chain_map,
            "psi_chain_map": self.psi_chain_map,
            "psi_anti_chain_map": self.psi_anti_chain_map,
            "multilinear_phi_chain_map": self.multilinear_phi_chain_map,
            "multilinear_psi_anti_chain_map": self.multilinear_psi_anti_chain_map,
            "psi_is_signed_phi": self.psi_is_signed_phi,
            "descends_to_unnormalized_quotient": {
                str(k): {"phi": a, "psi": b} for k, (a, b) in sorted(self.descends.items())},
            "per_degree_sign": {str(k): (v if isinstance(v, (int, str)) or v is None else str(v))
                                for k, v in sorted(self.signs.items())},
            "cohomology_dims": {str(k): v for k, v in sorted(self.cohomology_dims.items())},
            "homotopy_feasible": dict(self.homotopy_found),
        }


def _proportionality(a: List[List[Fraction]], b: List[List[Fraction]]) -> Optional[Fraction]:
    """Scalar s with a = s b (column lists), or None."""
    s = None
    for ca, cb in zip(a, b):
        for x, y in zip(ca, cb):
            if y == 0:
                if x != 0:
                    return None
                continue
            r = Fraction(x) / y
            if s is None:
                s = r
            elif s != r:
                return None
    return s if s is not None else Fraction(1)


def compare_phi_psi(N: int, max_level: int = 3) -> PhiPsiReport:
    """Chain-map checks, induced maps, per-degree sign and homotopy feasibility.

    An anti-chain map still induces a map on cohomology, so Ψ_* is computed
    directly and ``s_k`` is the scalar with ``Φ_* = s_k Ψ_*`` (None when the
    induced maps are not proportional).
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    model = build_cosimplicial_model(N, max_level)
    maps = normalized_maps(model)
    src = maps.norm.complex
    top = max_level
    ce = _ce_window(N, top)
    phi, psi = maps.phi, maps.psi
    window = range(top)
    phi_ok = _is_chain(phi, src, ce, window)
    psi_ok = _is_chain(psi, src, ce, window)
    psi_anti = _is_chain(psi, src, _negated(ce), window)
    signed = all(psi[n] == phi[n].scale((-1) ** n) for n in phi)

    ml = multilinear_complex(N, top)
    phiT = {n: t_map_matrix(N, n, phi_on_T) for n in range(top + 1)}
    psiT = {n: t_map_matrix(N, n, psi_on_T) for n in range(top + 1)}
    ml_phi = _is_chain(phiT, ml, ce, window)
    ml_psi = _is_chain(psiT, ml, _negated(ce), window)

    descends = {n: (descends_to_quotient(model, n, phi_on_T),
                    descends_to_quotient(model, n, psi_on_T)) for n in range(top + 1)}

    ind_phi, ind_psi, signs, hdims = {}, {}, {}, {}
    for k in range(top):
        _, _, cphi = induced_map_on_cohomology(phi, src, ce, k)
        _, _, cpsi = induced_map_on_cohomology(psi, src, ce, k)
        hdims[k] = len(cohomology_basis(src, k))
        ind_phi[k], ind_psi[k] = cphi, cpsi
        if hdims[k] == 0:
            signs[k] = "vacuous"   # H^k = 0, every scalar works
            continue
        s = _proportionality(cphi, cpsi)
        signs[k] = int(s) if s is not None and s.denominator == 1 else s

    candidates = {
        "s=+1": dict(psi),
        "s=-1": {k: -m for k, m in psi.items()},
        "s=(-1)^k": {k: m.scale((-1) ** k) for k, m in psi.items()},
    }
    found: Dict[str, Optional[bool]] = {}
    h_kept = None
    for name, g in candidates.items():
        try:
            h = null_homotopy_solve(phi, g, src, ce, 0, top)
        except ChainMapError:
            found[name] = None   # Φ - sΨ is not a chain map for this s
            continue
        found[name] = h is not None
        if h is not None and h_kept is None:
            h_kept = h
    return PhiPsiReport(N, max_level, phi_ok, psi_ok, psi_anti, ml_phi, ml_psi, signed,
                        descends, signs, hdims, ind_phi, ind_psi, found, h_kept)


# ---------------------------------------------------------------------------
# numeric shadow for GL_1


def _evaluate(f: Poly, point: Sequence[int], modulus: int) -> int:
    total = 0
    for key, x in f.items():
        term = x.numerator * pow(x.denominator, -1, modulus)
        for slot, a in enumerate(key):
            if a >= 0:
                term *= point[slot] - 1
        total += term
    return total % modulus


def gl1_numeric_shadow(p: int = 5, m: int = 6, max_level: int = 3,
                       samples: int = 10, seed: int = 0) -> Dict[str, object]:
    """Evaluate cofaces/codegeneracies of ``T`` on points of ``(1+pZ)^n`` mod ``p^m``.

    ``(δ^i f)(h) = f(d_i h)`` and ``(σ^j f)(h) = f(s_j h)`` must hold exactly
    since all monomials are multilinear; the composites ``σ^j δ^j`` recover
    ``f``.
    """
    rng = random.Random(seed)
    mod = p ** m
    failures = []
    checks = 0
    for n in range(1, max_level + 1):
        for _ in range(samples):
            f = {k: Fraction(rng.randint(-9, 9)) for k in t_basis(1, n)}
            f = {k: x for k, x in f.items() if x}
            h = [1 + p * rng.randrange(mod) for _ in range(n + 1)]
            for i in range(n + 2):
                face = list(h)
                if 1 <= i <= n:
                    face = h[:i - 1] + [h[i - 1] * h[i]] + h[i + 1:]
                elif i == 0:
                    face = h[1:]
                else:
                    face = h[:n]
                lhs = _evaluate(coface_on_T(1, n, i, f), h, mod)
                rhs = _evaluate(f, face, mod)
                checks += 1
                if lhs != rhs:
                    failures.append(f"δ^{i} level {n}")
            hm = h[:n - 1]
            for j in range(n):
                inserted = hm[:j] + [1] + hm[j:]
                lhs = _evaluate(codegeneracy_on_T(1, n, j, f), hm, mod)
                rhs = _evaluate(f, inserted, mod)
                checks += 1
                if lhs != rhs:
                    failures.append(f"σ^{j} level {n}")
            for j in range(n):
                g = codegeneracy_on_T(1, n + 1, j, coface_on_T(1, n, j, f))
                checks += 1
                if _evaluate(g, h[:n], mod) != _evaluate(f, h[:n], mod):
                    failures.append(f"σ^{j}δ^{j} level {n}")
    return {"p": p, "m": m, "checks": checks, "failures": failures}


def level_one_coface_images(N: int) -> Dict[int, Dict[int, Poly]]:
    """``δ^i(x[a])`` in ``T_2`` for every coordinate ``a`` of level 1."""
    return {i: {a: coface_on_T(N, 1, i, _coord(1, 0, a)) for a in range(N * N)}
            for i in range(3)}
