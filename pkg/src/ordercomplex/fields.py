"""Finite fields GF(p^k) with table-driven arithmetic.

Field elements are the integers ``0 .. q-1``; the base-``p`` digits of an
element (least significant first) are its coefficients in the polynomial
basis ``1, t, t^2, ...`` where ``t`` is a root of the modulus.  The integer
value is the "representation order" used whenever a least element is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InputRejected, NonPrime


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q = p**k``, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return None


# Polynomials over GF(p): coefficient lists, lowest degree first, no trailing zeros.

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, m, p):
    """Remainder of ``a`` modulo the monic polynomial ``m`` over GF(p)."""
    a = _trim(x % p for x in a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _trim(a)
    return a


def monic_polys(p, d):
    """All monic degree-``d`` polynomials, lexicographic in (c0, c1, ...)."""
    for tail in itertools.product(range(p), repeat=d):
        yield list(tail) + [1]


def is_irreducible(f, p) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg(f)//2."""
    k = len(f) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for g in monic_polys(p, d):
            if not poly_mod(f, g, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) defined by a monic irreducible ``modulus`` over GF(p)."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NonPrime(f"{self.p} is not prime")
        if self.k < 1 or len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if self.k > 1 and not is_irreducible(list(self.modulus), self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p**self.k

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def from_digits(self, ds) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(ds))

    @cached_property
    def add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        dig = np.array([self.digits(a) for a in range(q)], dtype=np.int64).reshape(q, self.k)
        weights = p ** np.arange(self.k, dtype=np.int64)
        s = (dig[:, None, :] + dig[None, :, :]) % p
        return (s @ weights).astype(np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        table = np.zeros((q, q), dtype=np.int64)
        m = list(self.modulus)
        for a in range(q):
            da = self.digits(a)
            for b in range(a, q):
                db = self.digits(b)
                prod = [0] * (2 * self.k)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            prod[i + j] += x * y
                r = poly_mod(prod, m, self.p) if self.k > 1 else [prod[0] % self.p]
                table[a, b] = table[b, a] = self.from_digits(r)
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([int(np.flatnonzero(self.add_table[a] == 0)[0]) for a in range(self.q)])

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            inv[a] = int(np.flatnonzero(self.mul_table[a] == 1)[0])
        return inv

    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def pow(self, a, e):
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        x, n = a, 1
        while x != 1:
            x = self.mul(x, a)
            n += 1
        return n

    @cached_property
    def primitive_element(self) -> int:
        """Least element of multiplicative order q-1."""
        for a in range(1, self.q):
            if self.mult_order(a) == self.q - 1:
                return a
        raise AssertionError("no primitive element")  # unreachable for a field

    @cached_property
    def squares(self) -> frozenset[int]:
        return frozenset(int(self.mul_table[a, a]) for a in range(1, self.q))

    @cached_property
    def frobenius(self) -> np.ndarray:
        """The map a -> a^p as an array."""
        return np.array([self.pow(a, self.p) for a in range(self.q)])

    def describe(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


def gf_make(p: int, k: int = 1) -> FieldSpec:
    """GF(p^k) with the lexicographically least monic irreducible modulus.

    Coefficients are compared lowest degree first, so for ``k == 1`` the
    modulus is ``x`` itself.
    """
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if k < 1:
        raise InputRejected("extension degree must be positive")
    for f in monic_polys(p, k):
        if k == 1 or is_irreducible(f, p):
            return FieldSpec(p, k, tuple(f))
    raise AssertionError("irreducible polynomials exist in every degree")
