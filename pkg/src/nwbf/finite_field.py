"""
Exact arithmetic in GF(q), q = p**c.

Elements are coefficient vectors over Z/p in the monomial basis
1, x, ..., x**(c-1) of GF(p)[x]/(modulus).  Every element also has an
integer index n = a0 + a1*p + ... + a_{c-1}*p**(c-1); that index is the
order used for Laurent digits and for the coset representatives u(n).

All operations go through precomputed q x q tables, so the per-call cost
is a lookup.

>>> F = FieldSpec(2, 2, (1, 1, 1))
>>> x = F.element(2)
>>> (x * x).coeffs
(1, 1)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, UsageError

MAX_DEGREE = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _poly_mod(num, den, p):
    # coefficient lists are low-to-high; den is monic
    num = list(num)
    d = len(den) - 1
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i] % p
        if c:
            for t in range(d + 1):
                num[i - d + t] = (num[i - d + t] - c * den[t]) % p
    return [v % p for v in num[:d]]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg//2 divides ``modulus``."""
    c = len(modulus) - 1
    if c < 1 or modulus[-1] % p == 0:
        return False
    for d in range(1, c // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_mod(modulus, list(low) + [1], p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p**c) with a fixed modulus.

    ``modulus`` holds the c+1 coefficients of an irreducible polynomial,
    lowest degree first; it is ignored (and normalised to ``(0, 1)``) when
    c == 1.
    """

    p: int
    c: int = 1
    modulus: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise UsageError(f"p={self.p} is not prime")
        if not 1 <= self.c <= MAX_DEGREE:
            raise UsageError(f"extension degree c={self.c} outside 1..{MAX_DEGREE}")
        if self.c == 1:
            object.__setattr__(self, "modulus", (0, 1))
            return
        if self.modulus is None:
            raise UsageError(f"c={self.c} requires a modulus polynomial")
        mod = tuple(int(v) % self.p for v in self.modulus)
        if len(mod) != self.c + 1:
            raise UsageError(f"modulus must have {self.c + 1} coefficients, got {len(mod)}")
        if mod[-1] != 1:
            raise UsageError("modulus must be monic (last coefficient 1)")
        if not is_irreducible(mod, self.p):
            raise UsageError(f"modulus {mod} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p ** self.c

    def coeffs_of(self, index: int) -> Tuple[int, ...]:
        return tuple((index // self.p ** i) % self.p for i in range(self.c))

    def index_of(self, coeffs: Sequence[int]) -> int:
        return sum((int(a) % self.p) * self.p ** i for i, a in enumerate(coeffs))

    def _mul_coeffs(self, a, b):
        prod = [0] * (2 * self.c - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        if self.c == 1:
            return [prod[0] % self.p]
        return _poly_mod(prod, self.modulus, self.p)

    @cached_property
    def add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        t = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            ca = self.coeffs_of(a)
            for b in range(q):
                cb = self.coeffs_of(b)
                t[a, b] = self.index_of([(x + y) % p for x, y in zip(ca, cb)])
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.index_of([-v for v in self.coeffs_of(a)]) for a in range(self.q)],
                        dtype=np.int64)

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        t = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            ca = self.coeffs_of(a)
            for b in range(q):
                t[a, b] = self.index_of(self._mul_coeffs(ca, self.coeffs_of(b)))
        return t

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            inv[a] = int(np.flatnonzero(self.mul_table[a] == 1)[0])
        return inv

    @cached_property
    def trace0_table(self) -> np.ndarray:
        """``trace0_table[a, b]`` is the zeta_0 (constant) coordinate of a*b."""
        return self.mul_table % self.p

    def element(self, value) -> "Scalar":
        """Build a Scalar from an index or a coefficient sequence."""
        if isinstance(value, Scalar):
            _check_same(self, value.spec)
            return value
        if isinstance(value, (int, np.integer)):
            if not 0 <= value < self.q:
                raise DomainError(f"index {value} outside GF({self.q})")
            return Scalar(self, self.coeffs_of(int(value)))
        coeffs = tuple(int(v) for v in value)
        return Scalar(self, coeffs)

    def zero(self) -> "Scalar":
        return self.element(0)

    def one(self) -> "Scalar":
        return self.element(1)


def _check_same(a: FieldSpec, b: FieldSpec):
    if a != b:
        raise UsageError(f"field mismatch: GF({a.q}) vs GF({b.q})")


@dataclass(frozen=True)
class Scalar:
    spec: FieldSpec = field(repr=False)
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.c:
            raise UsageError(f"expected {self.spec.c} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= a < self.spec.p for a in self.coeffs):
            raise DomainError(f"coefficients {self.coeffs} not reduced mod {self.spec.p}")

    @property
    def index(self) -> int:
        return self.spec.index_of(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        return ff_add(self, other)

    def __sub__(self, other):
        return ff_add(self, -other)

    def __neg__(self):
        return self.spec.element(int(self.spec.neg_table[self.index]))

    def __mul__(self, other):
        return ff_mul(self, other)

    def __repr__(self):
        return f"Scalar({'+'.join(_term(a, i) for i, a in enumerate(self.coeffs) if a) or '0'})"


def _term(a, i):
    mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
    if not mono:
        return str(a)
    return mono if a == 1 else f"{a}{mono}"


def ff_add(a: Scalar, b: Scalar) -> Scalar:
    _check_same(a.spec, b.spec)
    return a.spec.element(int(a.spec.add_table[a.index, b.index]))


def ff_mul(a: Scalar, b: Scalar) -> Scalar:
    _check_same(a.spec, b.spec)
    return a.spec.element(int(a.spec.mul_table[a.index, b.index]))


def ff_inv(a: Scalar) -> Scalar:
    if not a:
        raise DomainError("zero has no multiplicative inverse")
    return a.spec.element(int(a.spec.inv_table[a.index]))


def digit_set(spec: FieldSpec) -> list:
    """The digit alphabet a_0, ..., a_{q-1} in index order (a_0 = 0, a_1 = 1)."""
    return [spec.element(n) for n in range(spec.q)]
