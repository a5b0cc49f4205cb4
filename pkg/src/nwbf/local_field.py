"""
Elements of K = GF(q)((p)) as finite digit windows.

A KNumber stores the digits c_lo, c_{lo+1}, ... of x = sum c_l p**l as
integer indices into ``digit_set(spec)``.  Values are always kept in
canonical form (no zero digits at either end; zero is the empty window),
so dataclass equality is equality in K.

Addition is digitwise (characteristic p has no carries) and
multiplication is the Cauchy product of the digit sequences, which is
exact because every KNumber is a finite Laurent polynomial in p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import RangeError, UsageError
from .finite_field import FieldSpec, Scalar

INF = math.inf


@dataclass(frozen=True)
class KNumber:
    spec: FieldSpec = field(repr=False)
    lo: int = 0
    digits: Tuple[int, ...] = ()

    def __post_init__(self):
        d = tuple(int(v) for v in self.digits)
        if any(not 0 <= v < self.spec.q for v in d):
            raise RangeError(f"digit outside 0..{self.spec.q - 1}: {d}")
        start = 0
        while start < len(d) and d[start] == 0:
            start += 1
        end = len(d)
        while end > start and d[end - 1] == 0:
            end -= 1
        lo = self.lo + start if end > start else 0
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "digits", d[start:end])

    @classmethod
    def zero(cls, spec: FieldSpec) -> "KNumber":
        return cls(spec)

    @classmethod
    def from_powers(cls, spec: FieldSpec, terms: Dict[int, object]) -> "KNumber":
        """Build sum_l terms[l] * p**l; values may be indices or Scalars."""
        terms = {int(k): (v.index if isinstance(v, Scalar) else int(v)) for k, v in terms.items()}
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return cls(spec)
        lo, hi = min(terms), max(terms) + 1
        return cls(spec, lo, tuple(terms.get(l, 0) for l in range(lo, hi)))

    @classmethod
    def monomial(cls, spec: FieldSpec, power: int, digit: int = 1) -> "KNumber":
        return cls(spec, power, (digit,))

    @property
    def hi(self) -> int:
        return self.lo + len(self.digits)

    def is_zero(self) -> bool:
        return not self.digits

    def digit_at(self, power: int) -> int:
        if self.lo <= power < self.hi:
            return self.digits[power - self.lo]
        return 0

    def scalar_at(self, power: int) -> Scalar:
        return self.spec.element(self.digit_at(power))

    def powers(self) -> Dict[int, int]:
        return {self.lo + i: d for i, d in enumerate(self.digits) if d}

    def __add__(self, other):
        return k_add(self, other)

    def __neg__(self):
        neg = self.spec.neg_table
        return KNumber(self.spec, self.lo, tuple(int(neg[d]) for d in self.digits))

    def __sub__(self, other):
        return k_add(self, -other)

    def __mul__(self, other):
        return k_mul(self, other)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for power, d in sorted(self.powers().items()):
            coef = "" if d == 1 else f"[{d}]"
            parts.append(f"{coef}p^{power}" if power else (coef.strip("[]") or "1"))
        return " + ".join(parts)


def _check(x: KNumber, y: KNumber):
    if x.spec != y.spec:
        raise UsageError("KNumbers over different fields")


def k_add(x: KNumber, y: KNumber) -> KNumber:
    _check(x, y)
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    lo, hi = min(x.lo, y.lo), max(x.hi, y.hi)
    add = x.spec.add_table
    return KNumber(x.spec, lo, tuple(int(add[x.digit_at(l), y.digit_at(l)]) for l in range(lo, hi)))


def k_mul(x: KNumber, y: KNumber) -> KNumber:
    _check(x, y)
    if x.is_zero() or y.is_zero():
        return KNumber(x.spec)
    add, mul = x.spec.add_table, x.spec.mul_table
    out = [0] * (len(x.digits) + len(y.digits) - 1)
    for i, a in enumerate(x.digits):
        if not a:
            continue
        for j, b in enumerate(y.digits):
            out[i + j] = int(add[out[i + j], mul[a, b]])
    return KNumber(x.spec, x.lo + y.lo, tuple(out))


def k_norm(x: KNumber) -> Tuple[float, float]:
    """(valuation, |x|) with |x| = q**(-valuation); zero gives (inf, 0.0)."""
    if x.is_zero():
        return INF, 0.0
    return x.lo, float(x.spec.q) ** (-x.lo)


def p_shift(x: KNumber, j: int) -> KNumber:
    """Multiply by p**j."""
    if x.is_zero():
        return x
    return KNumber(x.spec, x.lo + j, x.digits)


def base_q_digits(n: int, q: int) -> list:
    out = []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return out


def u_of_n(spec: FieldSpec, n: int, max_depth: Optional[int] = None) -> KNumber:
    """The coset representative u(n).

    With n = b_0 + b_1 q + ... + b_s q**s, u(n) carries digit b_i at
    power -1-i.  ``max_depth`` bounds the window: u(n) must lie in
    p**(-max_depth) D, i.e. n < q**max_depth.
    """
    if n < 0:
        raise RangeError(f"u(n) needs n >= 0, got {n}")
    b = base_q_digits(n, spec.q)
    if max_depth is not None and len(b) > max_depth:
        raise RangeError(f"u({n}) needs {len(b)} digits, window allows {max_depth}")
    if not b:
        return KNumber(spec)
    return KNumber(spec, -len(b), tuple(reversed(b)))


def n_of_u(x: KNumber) -> Optional[int]:
    """Inverse of u_of_n; None if x is not a lattice point."""
    if x.is_zero():
        return 0
    if x.hi > 0:
        return None
    q = x.spec.q
    return sum(x.digit_at(-1 - i) * q ** i for i in range(-x.lo))


def kappa(k: int, q: int):
    """Number of trailing zero base-q digits of k; kappa(0) is +inf.

    Equivalently the largest j with p**j u(k) still a lattice point.
    """
    if k < 0:
        raise RangeError(f"kappa needs k >= 0, got {k}")
    if k == 0:
        return INF
    j = 0
    while k % q == 0:
        k //= q
        j += 1
    return j


def lattice_add(spec: FieldSpec, n: int, m: int) -> int:
    """Index r with u(r) = u(n) + u(m)."""
    return _lattice_op(spec.add_table, spec.q, n, m)


def lattice_sub(spec: FieldSpec, n: int, m: int) -> int:
    """Index r with u(r) = u(n) - u(m)."""
    return _lattice_op(spec.sub_table, spec.q, n, m)


def _lattice_op(table: np.ndarray, q: int, n: int, m: int) -> int:
    r, scale = 0, 1
    while n or m:
        n, a = divmod(n, q)
        m, b = divmod(m, q)
        r += int(table[a, b]) * scale
        scale *= q
    return r
