"""Slow, independent reference computations used by tests and ``run_self_check``.

None of these call the compiled kernels.  They are meant for small sizes.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .field_poly import Poly, clmul, gf2_mod, poly_from_index
from .pointset import PolyLatticeRule, coordinate
from .walsh_space import ProductWeights, dual_box_set, mu_b

__all__ = [
    "poly_quotient_f2",
    "laurent_by_division",
    "wce_points_oracle",
    "wce_dual_oracle",
    "phi_series_oracle",
    "state_entry_direct",
    "h_upper_bound",
    "t_upper_bound",
    "log_remainder_bound",
]


def poly_quotient_f2(a: int, p: int) -> int:
    """Quotient of bitmask polynomial division ``a // p``."""
    dp = p.bit_length() - 1
    quo = 0
    while a.bit_length() - 1 >= dp:
        s = a.bit_length() - 1 - dp
        quo |= 1 << s
        a ^= p << s
    return quo


def laurent_by_division(q: int, p: int, m: int) -> int:
    """Numerator of ``v_m(q/p)`` for ``b = 2`` as the quotient of ``q x^m`` by ``p``."""
    return poly_quotient_f2(q << m, p)


def _phi_scalar(u: int, m: int, alpha: float) -> float:
    mu = mu_b(alpha, 2)
    if u == 0:
        return mu
    x = u / 2.0**m
    t = math.floor(math.log2(x))
    return mu - 2.0 ** ((1 + t) * (alpha - 1)) * (mu + 1)


def wce_points_oracle(rule: PolyLatticeRule, alpha: float, gammas: Sequence[float]) -> float:
    """Kernel sum over points produced one coordinate at a time by pure-Python arithmetic."""
    n = rule.n_points
    acc = 0.0
    for i in range(n):
        prod = 1.0
        for j in range(1, rule.d + 1):
            prod *= 1.0 + gammas[j - 1] * _phi_scalar(coordinate(rule, i, j), rule.m, alpha)
        acc += prod
    return -1.0 + acc / n


def wce_dual_oracle(rule: PolyLatticeRule, alpha: float, weights: ProductWeights) -> float:
    """Worst-case error as the full dual-net sum of ``1 / r_{alpha,gamma}(k)``.

    Dual membership depends only on ``k mod 2^m`` in each coordinate, and for
    a residue ``rho`` the frequencies ``k = rho + 2^m s`` with ``k >= 2^m``
    contribute ``gamma 2^(-alpha m) / (1 - 2^(1-alpha))`` in closed form.
    So the infinite sum is a finite sum over the dual box.
    """
    m = rule.m
    tail = 2.0 ** (-alpha * m) / (1.0 - 2.0 ** (1.0 - alpha))
    total = 0.0
    for k in sorted(dual_box_set(rule)):
        prod = 1.0
        for j, rho in enumerate(k, 1):
            g = weights.gamma(j)
            head = 1.0 if rho == 0 else g * 2.0 ** (-alpha * (rho.bit_length() - 1))
            prod *= head + g * tail
        total += prod
    return total - 1.0


def phi_series_oracle(m: int, alpha: float, n_bits: int = 20) -> tuple[np.ndarray, float]:
    """``sum_{1 <= k < 2^n_bits} wal_k(u/2^m) / r_alpha(k)`` for every ``u < 2^m``.

    ``wal_k(u/2^m)`` only sees the low ``m`` bits of ``k``, so the finite sum
    is regrouped by ``k mod 2^m``.  Returns the values and the bound
    ``2^(n_bits (1-alpha)) / (1 - 2^(1-alpha))`` on the omitted tail.
    """
    if n_bits < m:
        raise ValueError("n_bits must be at least m")
    size = 1 << m
    psi = np.concatenate([[0.0]] + [np.full(1 << a, float(a)) for a in range(n_bits)])
    inv_r = 2.0 ** (-alpha * psi)
    inv_r[0] = 0.0
    # column lo holds k = h 2^m + lo; fsum keeps each bucket correctly rounded
    weight = np.array([math.fsum(col) for col in inv_r.reshape(-1, size).T])
    lo = np.arange(size, dtype=np.int64)
    out = np.empty(size)
    for u in range(size):
        s = int(format(u, f"0{m}b")[::-1], 2) if m else 0
        sign = 1.0 - 2.0 * (np.bitwise_count(lo & s) & 1)
        out[u] = float(np.dot(sign, weight))
    tail = 2.0 ** (n_bits * (1.0 - alpha)) / (1.0 - 2.0 ** (1.0 - alpha))
    return out, tail


def state_entry_direct(m: int, t: int, ell: int, etas: Sequence[float], gens: Sequence[int]) -> float:
    """``prod_j (1 - eta_j digitlog(l g_j mod x^t, t))`` for base 2."""
    mask = (1 << t) - 1
    prod = 1.0
    for eta, g in zip(etas, gens):
        prod *= 1.0 - eta * ((clmul(ell, g) & mask).bit_length() - t)
    return prod


def h_upper_bound(b: int, m: int, etas: Sequence[float]) -> float:
    """``b^m (-1 + prod_j (1 + eta_j))``."""
    return b**m * (math.prod(1.0 + e for e in etas) - 1.0)


def t_upper_bound(b: int, m: int, etas: Sequence[float]) -> float:
    """Upper bound on the dual-box measure of a constructed vector (``m >= 4``)."""
    p1 = math.prod(1.0 + e * ((b - 1) * m + 1) for e in etas)
    p2 = math.prod(1.0 + e * (2 * (b - 1) * m + 2 * b / (b - 1)) for e in etas)
    return (p1 + b * m * p2) / b**m


def log_remainder_bound(u: int, prec: int, n_terms: int, b: int = 2) -> float:
    """``b / ((b - 1) N x)`` at ``x = u / b^prec``."""
    x = u / b**prec
    return b / ((b - 1) * n_terms * x)


def dual_member_direct(rule: PolyLatticeRule, k: Sequence[int]) -> bool:
    """Whether ``sum_j tr_m(k_j) g_j`` is divisible by the modulus, by plain polynomial arithmetic."""
    b, m = rule.b, rule.m
    acc = Poly(b, 0)
    for kj, g in zip(k, rule.gen):
        acc = acc + poly_from_index(kj % b**m, b) * g
    if b == 2:
        return gf2_mod(acc.index, rule.modulus.index) == 0
    return not (acc % rule.modulus)
