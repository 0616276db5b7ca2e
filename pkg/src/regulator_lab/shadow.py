"""The n = 1 regulator shadow: ``log_p ∘ det`` on ``1 + p M_N(Z_p)``."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Sequence

from .arith import padic_log
from .lie import gl, perm_sign, primitive_element


def det_int(m: Sequence[Sequence[int]]) -> int:
    n = len(m)
    total = 0
    for perm in permutations(range(n)):
        term = perm_sign(perm)
        for i, j in enumerate(perm):
            term *= m[i][j]
        total += term
    return total


def matmul_int(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def random_congruence_matrix(N: int, p: int, m: int, rng: random.Random) -> List[List[int]]:
    """Integer matrix in ``1 + p M_N(Z)`` with entries below ``p^(m+1)``."""
    return [[(1 if i == j else 0) + p * rng.randrange(p ** m) for j in range(N)] for i in range(N)]


def _poly_mul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def det_poly(entries: Sequence[Sequence[List[Fraction]]]) -> List[Fraction]:
    """Determinant of a matrix of polynomials in one variable (Leibniz expansion)."""
    n = len(entries)
    total: List[Fraction] = [Fraction(0)]
    for perm in permutations(range(n)):
        term = [Fraction(perm_sign(perm))]
        for i, j in enumerate(perm):
            term = _poly_mul(term, entries[i][j])
        if len(term) > len(total):
            total += [Fraction(0)] * (len(term) - len(total))
        for k, x in enumerate(term):
            total[k] += x
    return total


def log_det_linear_part(N: int, p: int) -> Dict[int, Fraction]:
    """Linear coefficient of ``t ↦ log det(1 + p t E_a)`` for each basis index ``a``.

    With ``P(t) = det(1 + p t E_a)`` and ``P(0) = 1`` the linear coefficient of
    ``log P`` is ``P'(0)``.
    """
    L = gl(N)
    out = {}
    for a in range(L.dim):
        E = L.matrix(a)
        entries = [[[Fraction(1 if i == j else 0), Fraction(p * E[i][j])] for j in range(N)]
                   for i in range(N)]
        P = det_poly(entries)
        if P[0] != 1:
            raise AssertionError("det(1) != 1")
        lin = P[1] if len(P) > 1 else Fraction(0)
        if lin:
            out[a] = lin
    return out


@dataclass
class ShadowReport:
    N: int
    p: int
    m: int
    pairs: int
    cocycle_residual_precisions: List[int] = field(default_factory=list)
    cocycle_ok: bool = True
    linear_part: Dict[str, str] = field(default_factory=dict)
    linear_part_is_p_trace: bool = False
    chart_normalized_phi_is_p1: bool = False

    def to_dict(self) -> dict:
        return {
            "N": self.N, "p": self.p, "m": self.m, "pairs": self.pairs,
            "cocycle_ok": self.cocycle_ok,
            "min_residual_precision": min(self.cocycle_residual_precisions, default=None),
            "linear_part": self.linear_part,
            "linear_part_is_p_trace": self.linear_part_is_p_trace,
            "chart_normalized_phi_is_p1": self.chart_normalized_phi_is_p1,
        }


def regulator_shadow(N: int = 2, p: int = 5, m: int = 6, pairs: int = 25, seed: int = 0) -> ShadowReport:
    """Cocycle check of ``f = log_p det`` and its differential at ``e``."""
    if N < 1 or N > 2:
        raise ValueError("the shadow is implemented for N <= 2")
    if p == 2:
        raise ValueError("p must be odd")
    rng = random.Random(seed)
    rep = ShadowReport(N, p, m, pairs)
    for _ in range(pairs):
        g = random_congruence_matrix(N, p, m, rng)
        h = random_congruence_matrix(N, p, m, rng)
        fg = padic_log(det_int(g), p, m)
        fh = padic_log(det_int(h), p, m)
        fgh = padic_log(det_int(matmul_int(g, h)), p, m)
        res = fgh - fg - fh
        rep.cocycle_residual_precisions.append(res.absprec)
        if not res.is_zero() or res.absprec < m:
            rep.cocycle_ok = False
    L = gl(N)
    lin = log_det_linear_part(N, p)
    rep.linear_part = {L.labels[a]: str(x) for a, x in sorted(lin.items())}
    p1 = primitive_element(1, N)
    scaled = {(a,): x for a, x in lin.items()}
    rep.linear_part_is_p_trace = scaled == {k: p * v for k, v in p1.coeffs.items()}
    rep.chart_normalized_phi_is_p1 = {k: v / p for k, v in scaled.items()} == p1.coeffs
    return rep
