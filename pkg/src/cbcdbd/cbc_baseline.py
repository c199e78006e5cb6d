"""Naive component-by-component search over the exact worst-case error (base 2).

Each component is chosen by exhaustive scan of all admissible candidates,
keeping one running product per point.  Cost is ``O(d 4^m)``, so precision is
capped at ``MAX_M_NAIVE``.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from . import _kernels
from .cbc_dbd import GeneratingVector
from .errors import InvalidParameterError, ResourceLimitError
from .field_poly import Poly, monomial, primitive_poly_f2
from .walsh_space import ProductWeights, phi_table

__all__ = ["construct_cbc_naive", "modulus_for", "candidates_for", "MAX_M_NAIVE"]

MAX_M_NAIVE = 14
_TIE_ULPS = 4

ModulusKind = Literal["power", "primitive"]


def modulus_for(m: int, kind: ModulusKind) -> Poly:
    if kind == "power":
        return monomial(m, 2)
    if kind == "primitive":
        return primitive_poly_f2(m)
    raise InvalidParameterError(f"unknown modulus kind {kind!r}")


def candidates_for(m: int, kind: ModulusKind) -> np.ndarray:
    """Odd encodings ``1, 3, ..., 2^m - 1``.

    Odd means coprime to ``x^m``; a primitive modulus is irreducible, so every
    one of them is also a unit there.
    """
    modulus_for(m, kind)
    return np.arange(1, 1 << m, 2, dtype=np.int64)


def construct_cbc_naive(
    m: int,
    d: int,
    alpha: float,
    weights: ProductWeights,
    modulus_kind: ModulusKind = "power",
    return_errors: bool = False,
):
    """Greedy CBC minimising the worst-case error at smoothness ``alpha``.

    Ties go to the smallest encoding.  Candidate sums are compensated, and
    errors within a few ulps of the minimum are treated as equal.  With ``return_errors`` the per-step
    minimal errors are returned as well.
    """
    if m > MAX_M_NAIVE:
        raise ResourceLimitError(f"naive CBC is limited to m <= {MAX_M_NAIVE}")
    if m < 1 or d < 1:
        raise InvalidParameterError("m and d must be positive")
    if not alpha > 1:
        raise InvalidParameterError("alpha must exceed 1")
    if not isinstance(weights, ProductWeights):
        weights = ProductWeights(weights)
    gam = weights.as_array(d)
    p = modulus_for(m, modulus_kind)
    cands = candidates_for(m, modulus_kind)
    phitab = phi_table(m, alpha)
    n = 1 << m
    prod = np.ones(n, dtype=np.float64)
    col = np.empty(n, dtype=np.int64)
    errs = np.empty(cands.shape[0], dtype=np.float64)
    chosen: list[int] = []
    best_errors: list[float] = []
    for r in range(d):
        _kernels.cbc_scan(prod, cands, p.index, m, gam[r], phitab, errs)
        # values within a few ulps of the minimum count as ties; smallest encoding wins
        best = float(errs.min())
        k = int(np.flatnonzero(errs <= best + _TIE_ULPS * np.spacing(1.0 + abs(best)))[0])
        g = int(cands[k])
        chosen.append(g)
        best_errors.append(float(errs[k]))
        _kernels.column(g, p.index, m, col)
        _kernels.update_products(prod, col, gam[r], phitab)
    gv = GeneratingVector.from_indices(2, m, chosen)
    if return_errors:
        return gv, best_errors
    return gv
