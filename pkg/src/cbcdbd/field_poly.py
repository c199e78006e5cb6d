"""Polynomial arithmetic over the prime field F_b.

A polynomial is identified with the integer whose base-b digits are its
coefficients, constant term first: ``n = n_0 + n_1 b + ... + n_a b^a`` maps to
``n_0 + n_1 x + ... + n_a x^a``.  For ``b = 2`` that integer is the usual
bitmask and products are carry-less multiplications on machine words.

The maps used to turn polynomials into points are

* ``vm_numerator(q, m)``: the numerator of ``v_m(q / x^m)`` over ``b^m``,
* ``laurent_numerator(q, p, m)``: the numerator of ``v_m(q / p)`` over ``b^m``,
* ``digitlog(q, w)``: ``floor(log_b(v_w(q / x^w))) + 1`` computed from digits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInputError, InvalidParameterError

__all__ = [
    "Poly",
    "is_prime",
    "poly_from_index",
    "index_from_poly",
    "monomial",
    "mul_mod_xw",
    "poly_mod",
    "vm_numerator",
    "laurent_numerator",
    "digitlog",
    "primitive_poly_f2",
    "clmul",
    "gf2_mod",
    "MAX_M_BASE2",
]

#: Largest precision supported for b = 2: products of degree <= 2m - 2 fit a 64-bit word.
MAX_M_BASE2 = 30

# Smallest-encoding primitive polynomial over F_2 of each degree 1..24.
_PRIMITIVE_F2 = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 37,
    6: 67,
    7: 131,
    8: 285,
    9: 529,
    10: 1033,
    11: 2053,
    12: 4179,
    13: 8219,
    14: 16427,
    15: 32771,
    16: 65581,
    17: 131081,
    18: 262183,
    19: 524327,
    20: 1048585,
    21: 2097157,
    22: 4194307,
    23: 8388641,
    24: 16777243,
}


def is_prime(b: int) -> bool:
    if b < 2:
        return False
    i = 2
    while i * i <= b:
        if b % i == 0:
            return False
        i += 1
    return True


def _check_base(b):
    if not isinstance(b, int) or not is_prime(b):
        raise InvalidParameterError(f"base must be a prime, got {b!r}")


def _digits(n: int, b: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, b)
        out.append(r)
    return out


def _from_digits(digits, b: int) -> int:
    n = 0
    for c in reversed(digits):
        n = n * b + c
    return n


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def clmul(a: int, g: int) -> int:
    """Carry-less product of two F_2[x] bitmasks."""
    if a.bit_length() < g.bit_length():
        a, g = g, a
    r = 0
    while g:
        if g & 1:
            r ^= a
        a <<= 1
        g >>= 1
    return r


def gf2_mod(a: int, p: int) -> int:
    """Remainder of bitmask ``a`` modulo nonzero bitmask ``p``."""
    dp = p.bit_length() - 1
    if dp < 0:
        raise DegenerateInputError("division by the zero polynomial")
    da = a.bit_length() - 1
    while da >= dp:
        a ^= p << (da - dp)
        da = a.bit_length() - 1
    return a


@dataclass(frozen=True, order=True)
class Poly:
    """Polynomial over F_b stored by its base-b index (bitmask for b = 2)."""

    base: int
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise InvalidParameterError("polynomial index must be non-negative")

    @classmethod
    def from_coeffs(cls, coeffs, b: int) -> "Poly":
        _check_base(b)
        return cls(b, _from_digits([c % b for c in coeffs], b))

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficients, constant term first; empty for the zero polynomial."""
        if self.base == 2:
            n = self.index
            return tuple((n >> i) & 1 for i in range(n.bit_length()))
        return tuple(_digits(self.index, self.base))

    @property
    def degree(self) -> int:
        """Degree, with -1 standing in for the zero polynomial."""
        if self.base == 2:
            return self.index.bit_length() - 1
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> int:
        if i < 0:
            return 0
        if self.base == 2:
            return (self.index >> i) & 1
        return (self.index // self.base**i) % self.base

    def __bool__(self):
        return self.index != 0

    def _same_base(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.base != self.base:
            raise InvalidParameterError(
                f"mismatched bases {self.base} and {other.base}"
            )
        return other

    def __add__(self, other):
        other = self._same_base(other)
        if other is NotImplemented:
            return other
        if self.base == 2:
            return Poly(2, self.index ^ other.index)
        a, c = list(self.coeffs), list(other.coeffs)
        n = max(len(a), len(c))
        a += [0] * (n - len(a))
        c += [0] * (n - len(c))
        return Poly(self.base, _from_digits([(x + y) % self.base for x, y in zip(a, c)], self.base))

    def __neg__(self):
        if self.base == 2:
            return self
        return Poly(self.base, _from_digits([(-c) % self.base for c in self.coeffs], self.base))

    def __sub__(self, other):
        other = self._same_base(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._same_base(other)
        if other is NotImplemented:
            return other
        if self.base == 2:
            return Poly(2, clmul(self.index, other.index))
        a, c = self.coeffs, other.coeffs
        if not a or not c:
            return Poly(self.base, 0)
        out = [0] * (len(a) + len(c) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(c):
                    out[i + j] = (out[i + j] + x * y) % self.base
        return Poly(self.base, _from_digits(_trim(out), self.base))

    def __mod__(self, other):
        other = self._same_base(other)
        if other is NotImplemented:
            return other
        return poly_mod(self, other)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1:
                terms.append(mono)
            elif i == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}{mono}")
        body = " + ".join(terms) if terms else "0"
        return body if self.base == 2 else f"{body} (mod {self.base})"


def poly_from_index(n: int, b: int = 2) -> Poly:
    """Polynomial whose coefficients are the base-b digits of ``n``.

    >>> str(poly_from_index(6, 2))
    'x^2 + x'
    """
    _check_base(b)
    if n < 0:
        raise InvalidParameterError("index must be non-negative")
    return Poly(b, int(n))


def index_from_poly(q: Poly) -> int:
    return q.index


def monomial(k: int, b: int = 2) -> Poly:
    """The polynomial ``x^k``."""
    _check_base(b)
    return Poly(b, b**k)


def mul_mod_xw(a: Poly, g: Poly, w: int) -> Poly:
    """``(a * g) mod x^w``."""
    if a.base != g.base:
        raise InvalidParameterError(f"mismatched bases {a.base} and {g.base}")
    if w < 1:
        raise InvalidParameterError("w must be positive")
    b = a.base
    if b == 2:
        mask = (1 << w) - 1
        return Poly(2, clmul(a.index & mask, g.index & mask) & mask)
    return Poly(b, (a * g).index % b**w)


def poly_mod(a: Poly, p: Poly) -> Poly:
    """Remainder of ``a`` on division by ``p``."""
    if a.base != p.base:
        raise InvalidParameterError(f"mismatched bases {a.base} and {p.base}")
    if not p:
        raise DegenerateInputError("division by the zero polynomial")
    b = a.base
    if b == 2:
        return Poly(2, gf2_mod(a.index, p.index))
    r = list(a.coeffs)
    pc = p.coeffs
    dp = len(pc) - 1
    inv_lead = pow(pc[-1], -1, b)
    while len(r) - 1 >= dp:
        f = (r[-1] * inv_lead) % b
        shift = len(r) - 1 - dp
        for i, c in enumerate(pc):
            r[shift + i] = (r[shift + i] - f * c) % b
        _trim(r)
    return Poly(b, _from_digits(r, b))


def vm_numerator(q: Poly, m: int) -> int:
    """Integer ``u`` with ``v_m(q / x^m) = u / b^m``.

    The first ``m`` Laurent digits of ``q / x^m`` are the coefficients of
    ``q mod x^m`` read from the top, so ``u`` is just the index of that
    remainder.
    """
    if m < 1:
        raise InvalidParameterError("m must be positive")
    return q.index % q.base**m


def laurent_numerator(q: Poly, p: Poly, m: int) -> int:
    """Integer ``u`` with ``v_m(q / p) = u / b^m`` for ``deg q < deg p = m``.

    Uses the long-division recurrence for the Laurent digits ``t_1, ..., t_m``
    of ``q / p``; a non-monic ``p`` is handled by scaling with the inverse of
    its leading coefficient.
    """
    if q.base != p.base:
        raise InvalidParameterError(f"mismatched bases {q.base} and {p.base}")
    if p.degree != m:
        raise InvalidParameterError(f"modulus has degree {p.degree}, expected {m}")
    if q.degree >= m:
        raise InvalidParameterError("reduce q modulo p first (deg q must be < m)")
    b = q.base
    if b == 2:
        return _laurent_numerator_f2(q.index, p.index, m)
    pc = p.coeffs
    inv_lead = pow(pc[m], -1, b)
    t = [0] * (m + 1)
    u = 0
    for ell in range(1, m + 1):
        s = q.coeff(m - ell)
        for i in range(1, ell):
            s -= pc[m - i] * t[ell - i]
        t[ell] = (s * inv_lead) % b
        u = u * b + t[ell]
    return u


def _laurent_numerator_f2(q: int, p: int, m: int) -> int:
    u = 0
    digits = 0  # bit (ell - 1) holds t_ell
    for ell in range(1, m + 1):
        s = (q >> (m - ell)) & 1
        for i in range(1, ell):
            s ^= ((p >> (m - i)) & 1) & ((digits >> (ell - i - 1)) & 1)
        digits |= s << (ell - 1)
        u = (u << 1) | s
    return u


def digitlog(q: Poly, w: int) -> int:
    """``floor(log_b(v_w(q / x^w))) + 1``, computed without floating point.

    Equals ``j - w + 1`` where ``j`` is the highest nonzero coefficient index
    of ``q mod x^w``; lies in ``{1 - w, ..., 0}``.
    """
    if w < 1:
        raise InvalidParameterError("w must be positive")
    b = q.base
    r = q.index % b**w
    if r == 0:
        raise DegenerateInputError("q is divisible by x^w; v_w(q/x^w) = 0")
    if b == 2:
        return r.bit_length() - w
    return len(_digits(r, b)) - w


def primitive_poly_f2(m: int) -> Poly:
    """A fixed primitive polynomial of degree ``m`` over F_2 (1 <= m <= 24)."""
    if not isinstance(m, int) or not 1 <= m <= 24:
        raise InvalidParameterError(f"primitive polynomial table covers 1..24, got {m!r}")
    return Poly(2, _PRIMITIVE_F2[m])
