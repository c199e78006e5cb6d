"""Compiled inner loops for base 2.

Everything here works on plain int64 bitmasks and float64 arrays.  Loops are
strictly sequential and compiled without fastmath, so the floating-point
summation order is the one written in the source.
"""

import numpy as np
from numba import njit, prange

# bitlen tables above this size are not worth the memory
BITLEN_TABLE_MAX_M = 24


@njit(cache=True)
def bitlen(y):
    n = 0
    while y:
        y >>= 1
        n += 1
    return n


@njit(cache=True)
def bitlen_table(m):
    """``tab[y] = y.bit_length()`` for ``0 <= y < 2^m``."""
    n = 1 << m
    tab = np.zeros(n, dtype=np.int8)
    for y in range(1, n):
        tab[y] = tab[y >> 1] + 1
    return tab


@njit(cache=True)
def _bl(y, table, use_table):
    if use_table:
        return table[y]
    return bitlen(y)


@njit(cache=True)
def product_table(q, w, out):
    """``out[l] = (l * q) mod x^w`` for every ``l < 2^w`` by linearity over F_2."""
    mask = (1 << w) - 1
    out[0] = 0
    size = 1
    for i in range(w):
        s = (q << i) & mask
        for l in range(size):
            out[size + l] = out[l] ^ s
        size <<= 1


@njit(cache=True)
def factor_table(q, w, eta, scratch, fac, table, use_table):
    """``fac[i] = 1 - eta * digitlog((2i+1) q mod x^w, w)`` for odd ``2i+1 < 2^w``."""
    product_table(q, w, scratch)
    half = 1 << (w - 1)
    for i in range(half):
        fac[i] = 1.0 - eta * (_bl(scratch[2 * i + 1], table, use_table) - w)


@njit(cache=True)
def init_state(v, m, eta1, table, use_table):
    """First component (g_1 = 1): ``v[l] = 1 - eta_1 * digitlog(l, m)``."""
    v[0] = 0.0
    for l in range(1, 1 << m):
        v[l] = 1.0 - eta1 * (_bl(l, table, use_table) - m)


@njit(cache=True)
def h_sum(v, m, w, fac):
    """Quality sum over levels ``t = w..m`` (ascending), odd ``l`` ascending."""
    wmask = (1 << w) - 1
    acc = 0.0
    for t in range(w, m + 1):
        shift = m - t
        s = 0.0
        for l in range(1, 1 << t, 2):
            s += v[l << shift] * fac[(l & wmask) >> 1]
        acc += s * 2.0 ** (w - t)
    return acc


@njit(cache=True)
def h_sum_pair(v, m, w, fac0, fac1):
    """Two independent ``h_sum`` evaluations sharing one sweep over ``v``."""
    wmask = (1 << w) - 1
    acc0 = 0.0
    acc1 = 0.0
    for t in range(w, m + 1):
        shift = m - t
        s0 = 0.0
        s1 = 0.0
        for l in range(1, 1 << t, 2):
            x = v[l << shift]
            k = (l & wmask) >> 1
            s0 += x * fac0[k]
            s1 += x * fac1[k]
        scale = 2.0 ** (w - t)
        acc0 += s0 * scale
        acc1 += s1 * scale
    return acc0, acc1


@njit(cache=True)
def apply_level(v, m, w, fac):
    """Multiply every level-``w`` entry ``v[l * 2^(m-w)]`` by its factor."""
    shift = m - w
    for l in range(1, 1 << w, 2):
        v[l << shift] *= fac[l >> 1]


@njit(cache=True)
def construct(m, d, eta, use_table, trace):
    """Whole fast construction; returns the bitmask generating vector.

    ``trace[r, w, c]`` receives the quality value of candidate digit ``c``
    at component ``r`` and digit ``w`` (0-based ``r``).
    """
    n = 1 << m
    if use_table:
        table = bitlen_table(m)
    else:
        table = np.zeros(1, dtype=np.int8)
    v = np.empty(n, dtype=np.float64)
    init_state(v, m, eta[0], table, use_table)
    gens = np.ones(d, dtype=np.int64)
    scratch = np.empty(n, dtype=np.int64)
    half = max(n // 2, 1)
    fac0 = np.empty(half, dtype=np.float64)
    fac1 = np.empty(half, dtype=np.float64)
    for r in range(1, d):
        q = 1
        for w in range(2, m + 1):
            q1 = q | (1 << (w - 1))
            factor_table(q, w, eta[r], scratch, fac0, table, use_table)
            factor_table(q1, w, eta[r], scratch, fac1, table, use_table)
            h0, h1 = h_sum_pair(v, m, w, fac0, fac1)
            trace[r, w, 0] = h0
            trace[r, w, 1] = h1
            if h1 < h0:
                q = q1
                apply_level(v, m, w, fac1)
            else:
                apply_level(v, m, w, fac0)
        gens[r] = q
    return gens


# ---------------------------------------------------------------------------
# point columns and error sums


@njit(cache=True)
def mulmod_f2(a, g, p, m):
    """``(a * g) mod p`` for bitmasks with ``deg p = m`` and ``deg a, deg g < m``."""
    r = 0
    while g:
        if g & 1:
            r ^= a
        g >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= p
    return r


@njit(cache=True)
def laurent_f2(q, p, m):
    u = 0
    digits = 0
    for ell in range(1, m + 1):
        s = (q >> (m - ell)) & 1
        for i in range(1, ell):
            s ^= ((p >> (m - i)) & 1) & ((digits >> (ell - i - 1)) & 1)
        digits |= s << (ell - 1)
        u = (u << 1) | s
    return u


@njit(cache=True)
def column(g, p, m, out):
    """Numerators of coordinate ``j`` for all ``2^m`` points, generator ``g``, modulus ``p``.

    The map ``n -> v_m(n g / p) 2^m`` is F_2-linear in the bits of ``n``, so
    the column is built from the images of ``x^i`` by doubling.
    """
    out[0] = 0
    size = 1
    gi = g
    for i in range(m):
        c = laurent_f2(gi, p, m)
        for l in range(size):
            out[size + l] = out[l] ^ c
        size <<= 1
        gi = mulmod_f2(gi, 2, p, m)


@njit(cache=True)
def phi_by_bitlen(m, alpha, mu):
    """``phi_alpha(u / 2^m)`` indexed by ``u.bit_length()``."""
    tab = np.empty(m + 1, dtype=np.float64)
    tab[0] = mu
    for length in range(1, m + 1):
        t = length - 1 - m
        tab[length] = mu - 2.0 ** ((1 + t) * (alpha - 1.0)) * (mu + 1.0)
    return tab


@njit(cache=True)
def update_products(prod, col, gamma, phitab):
    for n in range(prod.shape[0]):
        prod[n] *= 1.0 + gamma * phitab[bitlen(col[n])]


@njit(cache=True)
def ordered_sum(x):
    """Neumaier-compensated sum in index order."""
    acc = 0.0
    comp = 0.0
    for i in range(x.shape[0]):
        s = acc + x[i]
        if abs(acc) >= abs(x[i]):
            comp += (acc - s) + x[i]
        else:
            comp += (x[i] - s) + acc
        acc = s
    return acc + comp


@njit(cache=True)
def wce_from_generators(gens, p, m, gammas, phitab):
    """``-1 + 2^-m sum_n prod_j (1 + gamma_j phi(x_nj))``; j ascending, n ascending."""
    n = 1 << m
    prod = np.ones(n, dtype=np.float64)
    col = np.empty(n, dtype=np.int64)
    for j in range(gens.shape[0]):
        if gammas[j] == 0.0:
            continue
        column(gens[j], p, m, col)
        update_products(prod, col, gammas[j], phitab)
    return -1.0 + ordered_sum(prod) / n


@njit(cache=True)
def cbc_scan(prod, candidates, p, m, gamma, phitab, errors):
    """Error of every candidate appended to the frozen per-point product cache."""
    n = 1 << m
    col = np.empty(n, dtype=np.int64)
    terms = np.empty(n, dtype=np.float64)
    for c in range(candidates.shape[0]):
        column(candidates[c], p, m, col)
        for i in range(n):
            terms[i] = prod[i] * (1.0 + gamma * phitab[bitlen(col[i])])
        # compensated, so candidates permuting the same terms get (nearly) equal sums
        errors[c] = -1.0 + ordered_sum(terms) / n


@njit(cache=True, parallel=True)
def columns_parallel(gens, p, m, out):
    for j in prange(gens.shape[0]):
        column(gens[j], p, m, out[:, j])


@njit(cache=True)
def columns_serial(gens, p, m, out):
    for j in range(gens.shape[0]):
        column(gens[j], p, m, out[:, j])


@njit(cache=True)
def h_quantity_f2(gens, m, eta):
    """``sum_{n=1}^{2^m-1} prod_j (1 - eta_j digitlog(n g_j mod x^m, m))``, n ascending."""
    n = 1 << m
    prod = np.ones(n, dtype=np.float64)
    col = np.empty(n, dtype=np.int64)
    for j in range(gens.shape[0]):
        product_table(gens[j], m, col)
        for i in range(1, n):
            prod[i] *= 1.0 - eta[j] * (bitlen(col[i]) - m)
    acc = 0.0
    for i in range(1, n):
        acc += prod[i]
    return acc
