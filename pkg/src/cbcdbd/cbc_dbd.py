"""Component-by-component digit-by-digit construction.

The construction fixes the generating vector one component at a time and,
within a component, one polynomial coefficient at a time, choosing each digit
to minimise an ``alpha``-free quality function.  Two implementations exist:

* ``construct_reference`` evaluates the quality function as a literal double
  sum and works for any prime base;
* ``construct_fast`` (base 2) keeps the running products in a flat state
  vector and costs ``O(d m 2^m)``.

Both visit levels ``t = w..m`` ascending and odd ``l`` ascending and break
ties toward the smallest digit, so for base 2 they return identical vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import (
    DegenerateInputError,
    InternalStateError,
    InvalidParameterError,
    ResourceLimitError,
)
from .field_poly import (
    MAX_M_BASE2,
    Poly,
    _check_base,
    clmul,
    digitlog,
    monomial,
    mul_mod_xw,
    poly_from_index,
)
from .pointset import PolyLatticeRule
from .walsh_space import ProductWeights

__all__ = [
    "GeneratingVector",
    "ConstructionState",
    "h_direct",
    "h_quantity",
    "construct_fast",
    "construct_reference",
    "REFERENCE_GUARD",
]

#: Upper bound on ``b^m * m * d`` accepted by ``construct_reference``.
REFERENCE_GUARD = 1 << 26


@dataclass(frozen=True)
class GeneratingVector:
    """Components ``g_1, ..., g_d`` of a polynomial lattice rule with ``b^m`` points."""

    b: int
    m: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for j, g in enumerate(self.components, 1):
            if g.base != self.b:
                raise InvalidParameterError(f"component {j} has base {g.base}")
            if g.degree >= self.m:
                raise InvalidParameterError(f"component {j} has degree >= m")
            if g.coeff(0) == 0:
                raise DegenerateInputError(f"component {j} has zero constant coefficient")

    @classmethod
    def from_indices(cls, b: int, m: int, indices: Sequence[int]) -> "GeneratingVector":
        return cls(b, m, tuple(poly_from_index(int(i), b) for i in indices))

    @property
    def d(self) -> int:
        return len(self.components)

    def indices(self) -> list[int]:
        return [g.index for g in self.components]

    def rule(self, modulus: Poly | None = None) -> PolyLatticeRule:
        p = monomial(self.m, self.b) if modulus is None else modulus
        return PolyLatticeRule(self.b, self.m, p, self.components)


def _as_weights(weights, d: int) -> ProductWeights:
    w = weights if isinstance(weights, ProductWeights) else ProductWeights(weights)
    if len(w) < d:
        raise InvalidParameterError(f"need {d} construction weights, have {len(w)}")
    return w


def _require_unit(q: Poly, what: str):
    if q.coeff(0) == 0:
        raise DegenerateInputError(f"{what} is divisible by x")


# ---------------------------------------------------------------------------
# quality function, literal form


def h_direct(
    b: int,
    m: int,
    r: int,
    w: int,
    weights,
    g_prev: Sequence[Poly],
    q: Poly,
) -> float:
    """Quality of digit prefix ``q`` for component ``r`` at digit ``w``.

    ``sum_{t=w}^{m} b^(w-t) sum_l [1 + eta_r (1-b) digitlog(l q mod x^w, w)]
    prod_{j<r} [1 + eta_j (1-b) digitlog(l g_j mod x^t, t)]`` where ``l`` runs
    over ``1..b^t-1`` with nonzero constant coefficient.
    """
    _check_base(b)
    if not 1 <= w <= m:
        raise InvalidParameterError("need 1 <= w <= m")
    if r < 1 or len(g_prev) != r - 1:
        raise InvalidParameterError("g_prev must hold r-1 components")
    eta = _as_weights(weights, r).gammas
    _require_unit(q, "q")
    for j, g in enumerate(g_prev, 1):
        _require_unit(g, f"component {j}")
    if b == 2:
        return _h_direct_f2(m, r, w, eta, [g.index for g in g_prev], q.index)
    acc = 0.0
    for t in range(w, m + 1):
        s = 0.0
        for ell in range(1, b**t):
            if ell % b == 0:
                continue
            lp = poly_from_index(ell, b)
            prod = 1.0
            for j, g in enumerate(g_prev):
                prod *= 1.0 + eta[j] * (1 - b) * digitlog(mul_mod_xw(lp, g, t), t)
            s += prod * (1.0 + eta[r - 1] * (1 - b) * digitlog(mul_mod_xw(lp, q, w), w))
        acc += s * float(b) ** (w - t)
    return acc


def _h_direct_f2(m, r, w, eta, g_prev, q) -> float:
    wmask = (1 << w) - 1
    acc = 0.0
    for t in range(w, m + 1):
        tmask = (1 << t) - 1
        s = 0.0
        for ell in range(1, 1 << t, 2):
            prod = 1.0
            for j, g in enumerate(g_prev):
                prod *= 1.0 - eta[j] * ((clmul(ell, g) & tmask).bit_length() - t)
            fac = 1.0 - eta[r - 1] * ((clmul(ell, q) & wmask).bit_length() - w)
            s += prod * fac
        acc += s * 2.0 ** (w - t)
    return acc


# ---------------------------------------------------------------------------
# fast state


@dataclass
class ConstructionState:
    """Running products of the base-2 fast construction.

    ``v[l * 2^(m-t)]`` (``l`` odd, ``l < 2^t``) holds the product over the
    fixed components of ``1 - eta_j digitlog(l g_j mod x^t, t)``; index 0 is
    unused.  While digit ``w`` of component ``r`` is open, levels ``t < w``
    already include component ``r`` and levels ``t >= w`` do not.
    """

    m: int
    d: int
    weights: ProductWeights
    precompute: bool = True
    v: np.ndarray = field(init=False, repr=False)
    r: int = field(init=False)
    w: int = field(init=False)
    prefix: int = field(init=False)
    components: list[int] = field(init=False)

    def __post_init__(self):
        if not 1 <= self.m <= MAX_M_BASE2:
            raise ResourceLimitError(f"m must lie in 1..{MAX_M_BASE2}")
        if self.d < 1:
            raise InvalidParameterError("d must be positive")
        self.weights = _as_weights(self.weights, self.d)
        use_table = self.precompute and self.m <= _kernels.BITLEN_TABLE_MAX_M
        self._use_table = use_table
        self._table = (
            _kernels.bitlen_table(self.m) if use_table else np.zeros(1, dtype=np.int8)
        )
        n = 1 << self.m
        self.v = np.empty(n, dtype=np.float64)
        _kernels.init_state(self.v, self.m, self.weights.gamma(1), self._table, use_table)
        self._scratch = np.empty(n, dtype=np.int64)
        self._fac = np.empty(max(n // 2, 1), dtype=np.float64)
        self.components = [1]
        self.r = 2
        self.prefix = 1
        self.w = 2
        self._close_trivial()

    def _close_trivial(self):
        # with m = 1 there are no digits to choose; every component is 1
        while self.m == 1 and self.r <= self.d:
            self.components.append(1)
            self.r += 1

    @property
    def finished(self) -> bool:
        return self.r > self.d

    def entry(self, t: int, ell: int) -> float:
        """Stored running product for level ``t`` and odd ``ell < 2^t``."""
        if not (1 <= t <= self.m and ell % 2 == 1 and 0 < ell < (1 << t)):
            raise InvalidParameterError("need 1 <= t <= m and odd 0 < ell < 2^t")
        return float(self.v[ell << (self.m - t)])

    def _check_open(self, w: int):
        if self.finished:
            raise InternalStateError("construction already finished")
        if w != self.w:
            raise InternalStateError(f"digit {self.w} of component {self.r} is open, not {w}")

    def _factors(self, q: int, w: int) -> np.ndarray:
        eta = self.weights.gamma(self.r)
        _kernels.factor_table(q, w, eta, self._scratch, self._fac, self._table, self._use_table)
        return self._fac

    def candidate(self, g_star: int) -> int:
        """Prefix obtained by setting digit ``w`` of the open component to ``g_star``."""
        if g_star not in (0, 1):
            raise InvalidParameterError("digit must be 0 or 1")
        return self.prefix | (g_star << (self.w - 1))

    def h_fast(self, w: int, q: Poly | int) -> float:
        """Quality of prefix ``q`` at the open digit ``w``, from the cached products."""
        self._check_open(w)
        qi = q.index if isinstance(q, Poly) else int(q)
        if qi & 1 == 0 or qi >> w:
            raise DegenerateInputError("q must be odd with degree < w")
        return float(_kernels.h_sum(self.v, self.m, w, self._factors(qi, w)))

    def apply_digit(self, w: int, g_star: int) -> None:
        """Fix digit ``w`` of the open component and fold it into level ``w``."""
        self._check_open(w)
        q = self.candidate(g_star)
        _kernels.apply_level(self.v, self.m, w, self._factors(q, w))
        self.prefix = q
        if w < self.m:
            self.w = w + 1
            return
        self.components.append(q)
        self.r += 1
        self.prefix = 1
        self.w = 2

    def step(self) -> tuple[float, float]:
        """Evaluate both candidates at the open digit, apply the better one."""
        w = self.w
        h0 = self.h_fast(w, self.candidate(0))
        h1 = self.h_fast(w, self.candidate(1))
        self.apply_digit(w, 1 if h1 < h0 else 0)
        return h0, h1

    def run(self) -> "GeneratingVector":
        while not self.finished:
            self.step()
        return self.result()

    def result(self) -> "GeneratingVector":
        if not self.finished:
            raise InternalStateError("construction not finished")
        return GeneratingVector.from_indices(2, self.m, self.components)


# ---------------------------------------------------------------------------
# constructions


def construct_fast(m: int, d: int, weights, precompute: bool = True) -> GeneratingVector:
    """Base-2 fast construction with construction weights ``eta`` taken verbatim.

    ``precompute`` toggles a bit-length lookup table (``m <= 24``); it has no
    effect on the result.
    """
    if m > MAX_M_BASE2:
        raise ResourceLimitError(f"m={m} exceeds the limit {MAX_M_BASE2}")
    if m < 1 or d < 1:
        raise InvalidParameterError("m and d must be positive")
    gens, _ = _construct_fast_traced(m, d, weights, precompute)
    return GeneratingVector.from_indices(2, m, gens.tolist())


def _construct_fast_traced(m: int, d: int, weights, precompute: bool = True):
    eta = _as_weights(weights, d).as_array(d)
    use_table = bool(precompute and m <= _kernels.BITLEN_TABLE_MAX_M)
    trace = np.zeros((d, m + 1, 2), dtype=np.float64)
    gens = _kernels.construct(m, d, eta, use_table, trace)
    return gens, trace


def construct_reference(b: int, m: int, d: int, weights) -> GeneratingVector:
    """Any-prime-base construction driven by ``h_direct``; ties go to the smallest digit."""
    _check_base(b)
    if m < 1 or d < 1:
        raise InvalidParameterError("m and d must be positive")
    if b**m * m * d > REFERENCE_GUARD:
        raise ResourceLimitError("b^m * m * d exceeds the reference-construction guard")
    eta = _as_weights(weights, d)
    comps = [Poly(b, 1)]
    for r in range(2, d + 1):
        q = Poly(b, 1)
        for w in range(2, m + 1):
            best, best_h = None, None
            for g in range(b):
                cand = Poly(b, q.index + g * b ** (w - 1))
                h = h_direct(b, m, r, w, eta, comps, cand)
                if best_h is None or h < best_h:
                    best, best_h = cand, h
            q = best
        comps.append(q)
    return GeneratingVector(b, m, tuple(comps))


def h_quantity(g: GeneratingVector, weights) -> float:
    """``sum_{n=1}^{b^m-1} prod_j (1 + eta_j (1-b) digitlog(n g_j mod x^m, m)) - (b^m - 1)``."""
    eta = _as_weights(weights, g.d)
    b, m = g.b, g.m
    if b == 2:
        total = _kernels.h_quantity_f2(
            np.array(g.indices(), dtype=np.int64), m, eta.as_array(g.d)
        )
        return float(total) - ((1 << m) - 1)
    total = 0.0
    for n in range(1, b**m):
        npoly = poly_from_index(n, b)
        prod = 1.0
        for j, gj in enumerate(g.components):
            prod *= 1.0 + eta.gamma(j + 1) * (1 - b) * digitlog(mul_mod_xw(npoly, gj, m), m)
        total += prod
    return total - (b**m - 1)
