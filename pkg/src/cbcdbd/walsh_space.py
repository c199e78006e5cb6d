"""Walsh functions, decay weights and worst-case errors in weighted Walsh spaces.

The closed-form worst-case error (``wce_product``) exists for base 2 only.
For other bases the quality of a rule can be assessed through ``t_measure``
together with ``trunc_gap_bound``, both computed by enumeration.

The worst-case error of the companion space with an L2-type norm is the
square root of ``wce_product``; it needs no separate routine.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DegenerateInputError,
    InvalidParameterError,
    ResourceLimitError,
    UnsupportedBaseError,
)
from .field_poly import Poly, gf2_mod, poly_from_index, poly_mod
from .pointset import PolyLatticeRule, generate_points

__all__ = [
    "ProductWeights",
    "SpaceParams",
    "walsh_eval",
    "r_alpha",
    "r_alpha_weighted",
    "mu_b",
    "phi_alpha",
    "phi_table",
    "wce_product",
    "delta_p",
    "dual_box_set",
    "t_measure",
    "char_sum",
    "char_sums",
    "log_series_partial",
    "trunc_gap_bound",
    "DUAL_BOX_LIMIT",
]

#: Largest box ``b^(m d)`` that ``dual_box_set`` and ``t_measure`` will enumerate.
DUAL_BOX_LIMIT = 1 << 24


@dataclass(frozen=True)
class ProductWeights:
    """Strictly positive coordinate weights ``gamma_1, gamma_2, ...``.

    The weight of a set of coordinates is the product of its members' weights;
    the empty set has weight 1.
    """

    gammas: tuple[float, ...]

    def __init__(self, gammas: Iterable[float]):
        values = tuple(float(g) for g in gammas)
        for j, g in enumerate(values, 1):
            if not (g > 0.0 and math.isfinite(g)):
                raise InvalidParameterError(f"weight gamma_{j} = {g!r} is not a positive real")
        object.__setattr__(self, "gammas", values)

    def __len__(self):
        return len(self.gammas)

    def __iter__(self):
        return iter(self.gammas)

    def gamma(self, j: int) -> float:
        """Weight of the 1-based coordinate ``j``."""
        return self.gammas[j - 1]

    def subset_weight(self, u: Iterable[int]) -> float:
        """``gamma_u`` for a set of 1-based coordinates."""
        out = 1.0
        for j in sorted(u):
            out *= self.gammas[j - 1]
        return out

    def power(self, a: float) -> "ProductWeights":
        return ProductWeights(g**a for g in self.gammas)

    def head(self, d: int) -> "ProductWeights":
        if d > len(self.gammas):
            raise InvalidParameterError(f"need {d} weights, have {len(self.gammas)}")
        return ProductWeights(self.gammas[:d])

    def as_array(self, d: int | None = None) -> np.ndarray:
        g = self.gammas if d is None else self.head(d).gammas
        return np.array(g, dtype=np.float64)


@dataclass(frozen=True)
class SpaceParams:
    """Smoothness ``alpha``, weights and base of a weighted Walsh space."""

    alpha: float
    weights: ProductWeights
    b: int = 2

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise InvalidParameterError("alpha must exceed 1")


def _weight_array(weights, d: int) -> np.ndarray:
    """Evaluation weights as an array; zeros are allowed here (they drop a coordinate)."""
    if isinstance(weights, ProductWeights):
        return weights.as_array(d)
    arr = np.asarray(list(weights), dtype=np.float64)
    if arr.shape[0] < d:
        raise InvalidParameterError(f"need {d} weights, have {arr.shape[0]}")
    arr = arr[:d]
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidParameterError("evaluation weights must be finite and non-negative")
    return arr


def _ilog(k: int, b: int) -> int:
    """``floor(log_b k)`` for ``k >= 1``, exact."""
    if b == 2:
        return k.bit_length() - 1
    e = -1
    while k:
        k //= b
        e += 1
    return e


def _base_digits(n: int, b: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        n, r = divmod(n, b)
        out.append(r)
    return out


def walsh_eval(k: int, u: int, prec: int, b: int = 2):
    """``wal_k(u / b^prec)``.

    Returns a float (+1 or -1) for ``b = 2`` and a complex root of unity
    otherwise.
    """
    if not 0 <= u < b**prec:
        raise InvalidParameterError("u must lie in [0, b^prec)")
    kappa = _base_digits(k, b, prec)
    # xi_1 is the most significant digit of u
    xi = _base_digits(u, b, prec)[::-1]
    s = sum(kc * xc for kc, xc in zip(kappa, xi)) % b
    if b == 2:
        return -1.0 if s else 1.0
    return cmath.exp(2j * math.pi * s / b)


def r_alpha(k: int, alpha: float, b: int = 2) -> float:
    """Decay function of one frequency: 1 for ``k = 0``, else ``b^(alpha floor(log_b k))``."""
    if k == 0:
        return 1.0
    return float(b) ** (alpha * _ilog(k, b))


def r_alpha_weighted(k_vec: Sequence[int], alpha: float, weights: ProductWeights, b: int = 2) -> float:
    if alpha < 1:
        raise InvalidParameterError("alpha must be at least 1")
    out = 1.0
    for j, k in enumerate(k_vec, 1):
        if k:
            out *= r_alpha(k, alpha, b) / weights.gamma(j)
    return out


def mu_b(alpha: float, b: int = 2) -> float:
    """``sum_{k >= 1} 1 / r_alpha(k) = b^alpha (b - 1) / (b^alpha - b)``."""
    if not alpha > 1:
        raise InvalidParameterError("mu_b diverges for alpha <= 1")
    ba = float(b) ** alpha
    return ba * (b - 1) / (ba - b)


def phi_table(m: int, alpha: float) -> np.ndarray:
    """``phi_alpha(u / 2^m)`` indexed by ``u.bit_length()`` (``m + 1`` entries)."""
    return _kernels.phi_by_bitlen(m, float(alpha), mu_b(alpha, 2))


def phi_alpha(u: int, m: int, alpha: float) -> float:
    """One-dimensional base-2 kernel at ``x = u / 2^m``.

    ``mu`` at ``x = 0``; otherwise ``mu - 2^((1+t)(alpha-1)) (mu + 1)`` with
    ``t = floor(log2 x)``.
    """
    if not 0 <= u < (1 << m):
        raise InvalidParameterError("u must lie in [0, 2^m)")
    return float(phi_table(m, alpha)[int(u).bit_length()])


def _require_units_mod_power(rule: PolyLatticeRule):
    if rule.is_power_modulus:
        for j, g in enumerate(rule.gen, 1):
            if g.coeff(0) == 0:
                raise DegenerateInputError(f"component {j} is not coprime to x^m")


def wce_product(rule: PolyLatticeRule, alpha: float, weights) -> float:
    """Worst-case error of a base-2 rule for product weights.

    ``-1 + 2^-m sum_n prod_j (1 + gamma_j phi_alpha(x_nj))`` with the product
    taken over ``j`` ascending and the sum over ``n`` ascending.  ``weights``
    may be a ``ProductWeights`` or any sequence of non-negative reals; a zero
    weight removes its coordinate.
    """
    if rule.b != 2:
        raise UnsupportedBaseError("closed-form worst-case error is only available for b=2")
    if not alpha > 1:
        raise InvalidParameterError("alpha must exceed 1")
    _require_units_mod_power(rule)
    gam = _weight_array(weights, rule.d)
    return float(
        _kernels.wce_from_generators(
            rule.gen_indices(), rule.modulus.index, rule.m, gam, phi_table(rule.m, alpha)
        )
    )


def delta_p(q: Poly, p: Poly) -> int:
    """1 if ``p`` divides ``q``, else 0."""
    return 0 if poly_mod(q, p) else 1


def _check_box(rule: PolyLatticeRule):
    if rule.b ** (rule.m * rule.d) > DUAL_BOX_LIMIT:
        raise ResourceLimitError(
            f"box of size {rule.b}^({rule.m}*{rule.d}) exceeds the enumeration limit"
        )


def _dual_members_f2(rule: PolyLatticeRule) -> np.ndarray:
    """Rows ``k`` of the box ``{0..2^m-1}^d`` with ``sum_j k_j g_j = 0 mod p``."""
    n = rule.n_points
    p = rule.modulus.index
    images = []
    ks = np.arange(n, dtype=np.int64)
    for g in rule.gen:
        basis = []
        gi = gf2_mod(g.index, p)
        for _ in range(rule.m):
            basis.append(gi)
            gi = gf2_mod(gi << 1, p)
        img = np.zeros(n, dtype=np.int64)
        for i, c in enumerate(basis):
            img ^= np.where((ks >> i) & 1, c, 0)
        images.append(img)
    acc = images[0]
    for img in images[1:]:
        acc = (acc[:, None] ^ img[None, :]).ravel()
    flat = np.flatnonzero(acc == 0)
    return np.stack(np.unravel_index(flat, (n,) * rule.d), axis=1).astype(np.int64)


def dual_box_set(rule: PolyLatticeRule) -> set[tuple[int, ...]]:
    """Dual-net frequencies inside the box ``{0, ..., b^m - 1}^d``."""
    _check_box(rule)
    if rule.b == 2:
        return {tuple(int(x) for x in row) for row in _dual_members_f2(rule)}
    b, m, p = rule.b, rule.m, rule.modulus
    out = set()
    for k in itertools.product(range(b**m), repeat=rule.d):
        acc = Poly(b, 0)
        for kj, g in zip(k, rule.gen):
            acc = acc + poly_from_index(kj, b) * g
        if delta_p(acc, p):
            out.add(k)
    return out


def t_measure(rule: PolyLatticeRule, weights: ProductWeights, alpha: float = 1.0) -> float:
    """``sum over nonzero k in the dual box of 1 / r_{alpha,gamma}(k)``."""
    if alpha < 1:
        raise InvalidParameterError("alpha must be at least 1")
    _check_box(rule)
    if rule.b == 2:
        members = _dual_members_f2(rule)
        n = rule.n_points
        ks = np.arange(n)
        psi = np.zeros(n, dtype=np.float64)
        psi[1:] = [int(k).bit_length() - 1 for k in ks[1:]]
        total = np.ones(members.shape[0], dtype=np.float64)
        for j in range(rule.d):
            inv = np.where(ks > 0, weights.gamma(j + 1) * 2.0 ** (-alpha * psi), 1.0)
            total *= inv[members[:, j]]
        nonzero = np.any(members != 0, axis=1)
        return float(np.sum(total[nonzero]))
    s = 0.0
    for k in sorted(dual_box_set(rule)):
        if any(k):
            s += 1.0 / r_alpha_weighted(k, alpha, weights, rule.b)
    return s


def char_sums(rule: PolyLatticeRule, ks) -> np.ndarray:
    """``b^-m sum_n wal_k(x_n)`` for every row ``k`` of the ``(K, d)`` array ``ks``.

    Real for ``b = 2``, complex otherwise.  Digits of ``k`` beyond the
    ``m``-th never meet a nonzero digit of a point, so only ``k mod b^m``
    matters.
    """
    ks = np.asarray(ks, dtype=np.int64)
    if ks.ndim != 2 or ks.shape[1] != rule.d:
        raise InvalidParameterError("frequency vectors must have one entry per dimension")
    b, m = rule.b, rule.m
    pts = generate_points(rule).numerators
    # digit i of k pairs with the (i+1)-th b-adic digit of x, i.e. digit m-1-i of u
    low = b ** np.arange(m)
    high = b ** np.arange(m - 1, -1, -1)
    phase = np.zeros((rule.n_points, ks.shape[0]), dtype=np.int64)
    for j in range(rule.d):
        xi = (pts[:, j, None] // high) % b
        kappa = (ks[:, j, None] // low) % b
        phase += xi @ kappa.T
    phase %= b
    if b == 2:
        return np.mean(1.0 - 2.0 * phase, axis=0)
    return np.mean(np.exp(2j * np.pi * phase / b), axis=0)


def char_sum(rule: PolyLatticeRule, k_vec: Sequence[int]):
    """``b^-m sum_n wal_k(x_n)``; 1 on the dual net, 0 elsewhere.

    Float for ``b = 2``, complex otherwise.
    """
    if len(k_vec) != rule.d:
        raise InvalidParameterError("frequency vector length differs from rule dimension")
    val = char_sums(rule, [list(k_vec)])[0]
    return float(val) if rule.b == 2 else complex(val)


def log_series_partial(u: int, prec: int, n_terms: int, b: int = 2) -> float:
    """``sum_{k < n_terms} wal_k(x) / r_1(k)`` at ``x = u / b^prec`` (real part)."""
    if u == 0:
        raise DegenerateInputError("the series identity holds on (0, 1) only")
    if not 0 < u < b**prec:
        raise InvalidParameterError("u must lie in (0, b^prec)")
    if b == 2:
        k = np.arange(n_terms, dtype=np.int64)
        s = int(format(u, f"0{prec}b")[::-1], 2)
        sign = 1.0 - 2.0 * (np.bitwise_count(k & s) & 1)
        r1 = np.ones(n_terms)
        r1[1:] = 2.0 ** np.array([int(x).bit_length() - 1 for x in k[1:]], dtype=np.float64)
        return float(np.sum(sign / r1))
    total = 0j
    for k in range(n_terms):
        total += walsh_eval(k, u, prec, b) / r_alpha(k, 1.0, b)
    return total.real


def trunc_gap_bound(alpha: float, weights: ProductWeights, d: int, n_points: int, b: int = 2) -> float:
    """``N^-alpha (-1 + prod_{j<=d} (1 + 2 mu_b(alpha) gamma_j))``."""
    mu = mu_b(alpha, b)
    prod = 1.0
    for j in range(1, d + 1):
        prod *= 1.0 + 2.0 * mu * weights.gamma(j)
    return (prod - 1.0) / float(n_points) ** alpha
