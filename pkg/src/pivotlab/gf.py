"""Small finite fields GF(q) backed by lookup tables.

Elements are plain integers in ``range(q)``.  For a prime field the integer is
the residue; for an extension field GF(p^k) it packs the coefficients of the
polynomial representative in base p, i.e. ``index = sum(c_i * p**i)`` where
``c_i`` is the coefficient of ``x**i``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, NotPrimePower, UnsupportedOrder

# Conway polynomials, low-degree coefficient first, monic term omitted.
CONWAY = {
    (2, 2): (1, 1),        # x^2 + x + 1
    (2, 3): (1, 1, 0),     # x^3 + x + 1
    (2, 4): (1, 1, 0, 0),  # x^4 + x + 1
    (3, 2): (2, 2),        # x^2 + 2x + 2
    (3, 3): (1, 2, 0),     # x^3 + 2x + 1
    (5, 2): (2, 4),        # x^2 + 4x + 2
}

MAX_ORDER = 256


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k`` or raise NotPrimePower."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise NotPrimePower(f"{q!r} is not a prime power")
    q = int(q)
    p = next(d for d in range(2, q + 1) if q % d == 0)
    if not _is_prime(p):
        raise NotPrimePower(f"{q} is not a prime power")
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, k


def _digits(a: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(a % p)
        a //= p
    return out


def _pack(coeffs, p: int) -> int:
    return sum(int(c) * p**i for i, c in enumerate(coeffs))


def _poly_mulmod(a, b, modulus, p):
    k = len(modulus)
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # x^k == -(modulus)
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i, m in enumerate(modulus):
                prod[d - k + i] = (prod[d - k + i] - c * m) % p
    return prod[:k]


class GF:
    """The finite field with ``q = p**k`` elements.

    Immutable once built; use :func:`field` to get a cached instance.
    """

    def __init__(self, q: int):
        p, k = prime_power(q)
        if q > MAX_ORDER:
            raise UnsupportedOrder(f"GF({q}): orders above {MAX_ORDER} are not supported")
        if k > 1 and (p, k) not in CONWAY:
            raise UnsupportedOrder(f"GF({q}): no Conway polynomial in the supported table")
        self.p, self.k, self.q = p, k, q
        self.modulus = CONWAY.get((p, k))
        els = np.arange(q)
        if k == 1:
            add = (els[:, None] + els[None, :]) % p
            mul = (els[:, None] * els[None, :]) % p
        else:
            digs = [_digits(a, p, k) for a in range(q)]
            add = np.empty((q, q), dtype=np.int64)
            mul = np.empty((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    add[a, b] = _pack([(x + y) % p for x, y in zip(digs[a], digs[b])], p)
                    mul[a, b] = _pack(_poly_mulmod(digs[a], digs[b], self.modulus, p), p)
        self.add_table = np.ascontiguousarray(add, dtype=np.int64)
        self.mul_table = np.ascontiguousarray(mul, dtype=np.int64)
        self.neg_table = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
        self.inv_table = inv
        self.sub_table = self.add_table[:, self.neg_table]
        for t in (self.add_table, self.mul_table, self.neg_table, self.inv_table, self.sub_table):
            t.flags.writeable = False
        self.zero, self.one = 0, 1
        self.minus_one = int(self.neg_table[1])

    # scalar API
    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.sub_table[a, b])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def neg(self, a):
        return int(self.neg_table[a])

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def arith(self, op: str, a, b=None):
        """Dispatch ``op`` in {add, sub, mul, div, neg, inv}."""
        if op in ("neg", "inv"):
            return getattr(self, op)(a)
        return getattr(self, op)(a, b)

    def elements(self):
        return range(self.q)

    @property
    def characteristic(self) -> int:
        return self.p

    def element(self, value) -> int:
        """Parse an element from its text or integer form."""
        v = int(value)
        if not 0 <= v < self.q:
            raise ValueError(f"{value!r} is not an element of GF({self.q})")
        return v

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under the ring map Z -> GF(q)."""
        return n % self.p

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __reduce__(self):
        return (field, (self.q,))


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    """Cached constructor; ``field(4) is field(4)``."""
    return GF(q)


field_new = field
