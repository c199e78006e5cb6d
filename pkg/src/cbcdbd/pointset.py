"""Polynomial lattice point sets.

Point ``n`` of the rule with modulus ``p`` and generating vector
``(g_1, ..., g_d)`` has coordinates ``v_m(n(x) g_j(x) / p(x))``.  Coordinates are
kept as integer numerators over ``b^m``; floats appear only when errors are
evaluated or points are exported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numba
import numpy as np

from . import _kernels
from .errors import InvalidParameterError
from .field_poly import (
    MAX_M_BASE2,
    Poly,
    laurent_numerator,
    monomial,
    poly_from_index,
    poly_mod,
)

__all__ = [
    "PolyLatticeRule",
    "PointMatrix",
    "coordinate",
    "generate_points",
    "iter_point_rows",
    "STREAM_THRESHOLD_M",
]

#: From this precision on, ``iter_point_rows`` is the intended way to consume points.
STREAM_THRESHOLD_M = 20


@dataclass(frozen=True)
class PolyLatticeRule:
    """Base ``b``, precision ``m`` (``b^m`` points), modulus of degree ``m``, generators."""

    b: int
    m: int
    modulus: Poly
    gen: tuple[Poly, ...]

    def __post_init__(self):
        if self.m < 1:
            raise InvalidParameterError("m must be positive")
        if self.modulus.base != self.b:
            raise InvalidParameterError("modulus base differs from rule base")
        if self.modulus.degree != self.m:
            raise InvalidParameterError(
                f"modulus must have degree m={self.m}, got {self.modulus.degree}"
            )
        object.__setattr__(self, "gen", tuple(self.gen))
        for j, g in enumerate(self.gen, 1):
            if g.base != self.b:
                raise InvalidParameterError(f"component {j} has base {g.base}")
            if g.degree >= self.m:
                raise InvalidParameterError(f"component {j} has degree >= m")
        if self.b == 2 and self.m > MAX_M_BASE2:
            raise InvalidParameterError(f"m is limited to {MAX_M_BASE2} for b=2")

    @classmethod
    def from_indices(cls, b: int, m: int, gen: Sequence[int], modulus: int | None = None):
        """Build a rule from integer encodings; the modulus defaults to ``x^m``."""
        p = monomial(m, b) if modulus is None else poly_from_index(modulus, b)
        return cls(b, m, p, tuple(poly_from_index(int(g), b) for g in gen))

    @property
    def d(self) -> int:
        return len(self.gen)

    @property
    def n_points(self) -> int:
        return self.b**self.m

    @property
    def is_power_modulus(self) -> bool:
        return self.modulus.index == self.b**self.m

    def gen_indices(self) -> np.ndarray:
        return np.array([g.index for g in self.gen], dtype=np.int64)

    def project(self, dims: Sequence[int]) -> "PolyLatticeRule":
        """Rule generated by the components with 1-based indices ``dims``."""
        return PolyLatticeRule(self.b, self.m, self.modulus, tuple(self.gen[j - 1] for j in dims))


@dataclass(frozen=True)
class PointMatrix:
    """``b^m x d`` integer numerators; coordinate ``(n, j)`` is ``numerators[n, j] / b^m``."""

    b: int
    m: int
    numerators: np.ndarray

    def __post_init__(self):
        self.numerators.setflags(write=False)

    @property
    def n_points(self) -> int:
        return self.numerators.shape[0]

    @property
    def dim(self) -> int:
        return self.numerators.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Numerators of the 1-based coordinate ``j``."""
        return self.numerators[:, j - 1]

    def as_float(self) -> np.ndarray:
        return self.numerators / float(self.b**self.m)


def coordinate(rule: PolyLatticeRule, n: int, j: int) -> int:
    """Numerator of coordinate ``j`` (1-based) of point ``n``."""
    if not 0 <= n < rule.n_points:
        raise InvalidParameterError(f"point index {n} out of range")
    if not 1 <= j <= rule.d:
        raise InvalidParameterError(f"coordinate index {j} out of range 1..{rule.d}")
    q = poly_mod(poly_from_index(n, rule.b) * rule.gen[j - 1], rule.modulus)
    return laurent_numerator(q, rule.modulus, rule.m)


def generate_points(rule: PolyLatticeRule, threads: int = 1) -> PointMatrix:
    """All ``b^m`` points, row ``n`` for ``n = 0, ..., b^m - 1``.

    For ``b = 2`` columns are built by the F_2-linear doubling kernel;
    ``threads > 1`` computes columns in parallel with identical output.
    """
    if rule.d == 0:
        raise InvalidParameterError("rule has no components")
    if rule.b == 2:
        out = np.empty((rule.n_points, rule.d), dtype=np.int64)
        gens = rule.gen_indices()
        if threads > 1:
            numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
            _kernels.columns_parallel(gens, rule.modulus.index, rule.m, out)
        else:
            _kernels.columns_serial(gens, rule.modulus.index, rule.m, out)
        return PointMatrix(2, rule.m, out)
    out = np.array(
        [[coordinate(rule, n, j) for j in range(1, rule.d + 1)] for n in range(rule.n_points)],
        dtype=np.int64,
    ).reshape(rule.n_points, rule.d)
    return PointMatrix(rule.b, rule.m, out)


def iter_point_rows(rule: PolyLatticeRule, chunk: int = 1 << 14) -> Iterator[np.ndarray]:
    """Yield rows in ascending ``n`` without materialising the full matrix.

    Each chunk of ``chunk`` consecutive indices (a power of ``b`` aligned
    block for ``b = 2``) is generated independently.
    """
    if rule.d == 0:
        raise InvalidParameterError("rule has no components")
    if rule.b != 2:
        for n in range(rule.n_points):
            yield np.array([coordinate(rule, n, j) for j in range(1, rule.d + 1)], dtype=np.int64)
        return
    # column images of the basis x^i; row n is the XOR of the images of its set bits
    basis = np.array(
        [[coordinate(rule, 1 << i, j) for j in range(1, rule.d + 1)] for i in range(rule.m)],
        dtype=np.int64,
    ).reshape(rule.m, rule.d)
    chunk = min(chunk, rule.n_points)
    low_bits = chunk.bit_length() - 1
    chunk = 1 << low_bits
    block = np.zeros((1, rule.d), dtype=np.int64)
    for i in range(low_bits):
        block = np.concatenate([block, block ^ basis[i]], axis=0)
    for start in range(0, rule.n_points, chunk):
        offset = np.zeros(rule.d, dtype=np.int64)
        hi = start >> low_bits
        i = low_bits
        while hi:
            if hi & 1:
                offset ^= basis[i]
            hi >>= 1
            i += 1
        yield from block ^ offset
