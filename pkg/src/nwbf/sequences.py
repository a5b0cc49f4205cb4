"""
Sequences on the lattice {u(n)} and their transforms.

A Sequence maps an index n (standing for the lattice point u(n)) to a
complex number.  Its transform is a function on D, sampled on the
D-cells of a frequency grid; with support below q**N the round trip is
exact because {chi_{u(n)} : n < q**N} is an orthonormal basis for the
functions on D that are constant on cosets of p**N D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .analysis import FREQUENCY, Grid, SampledFunction, chi
from .errors import DomainError, RangeError, UsageError
from .finite_field import FieldSpec
from .local_field import k_mul, lattice_add, n_of_u, p_shift, u_of_n


@dataclass
class Sequence:
    spec: FieldSpec
    values: Dict[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, v in self.values.items():
            if int(n) < 0:
                raise RangeError(f"sequence index {n} < 0")
            if v != 0:
                clean[int(n)] = complex(v)
        self.values = dict(sorted(clean.items()))

    @classmethod
    def delta(cls, spec: FieldSpec, n: int, value: complex = 1.0) -> "Sequence":
        return cls(spec, {n: value})

    @classmethod
    def from_array(cls, spec: FieldSpec, arr) -> "Sequence":
        return cls(spec, {n: v for n, v in enumerate(np.asarray(arr, dtype=complex))})

    def __getitem__(self, n: int) -> complex:
        return self.values.get(n, 0j)

    def support_bound(self) -> int:
        return max(self.values) + 1 if self.values else 0

    def to_array(self, length: int) -> np.ndarray:
        if self.support_bound() > length:
            raise RangeError(f"support {self.support_bound()} exceeds length {length}")
        out = np.zeros(length, dtype=complex)
        for n, v in self.values.items():
            out[n] = v
        return out

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(v) ** 2 for v in self.values.values()))

    def inner(self, other: "Sequence") -> complex:
        terms = [v * np.conj(other[n]) for n, v in self.values.items()]
        return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))

    def isclose(self, other: "Sequence", tol: float = 1e-12) -> bool:
        keys = set(self.values) | set(other.values)
        return all(abs(self[n] - other[n]) <= tol for n in keys)


def _lattice_characters(grid: Grid, count: int) -> np.ndarray:
    """(count, q**N) array of chi_{u(n)}(w) on the D-cells."""
    cells = grid.integer_cells
    return np.stack([grid.character_on(u_of_n(grid.spec, n), FREQUENCY)[cells] for n in range(count)])


def seq_fourier(z: Sequence, grid: Grid) -> SampledFunction:
    """z^(w) = sum_n z(u(n)) chi_{u(n)}(w), on D (zero elsewhere on the grid)."""
    if z.spec != grid.spec:
        raise UsageError("sequence and grid use different fields")
    width = grid.q ** grid.N
    if z.support_bound() > width:
        raise RangeError(f"support {z.support_bound()} exceeds q^N = {width}")
    vals = np.zeros(grid.size, dtype=complex)
    if z.values:
        vals[grid.integer_cells] = z.to_array(width) @ _lattice_characters(grid, width)
    return SampledFunction(grid, FREQUENCY, vals)


def seq_inv_fourier(F: SampledFunction) -> Sequence:
    """f^v(u(n)) = integral over D of F conj(chi_{u(n)}), for n < q**N."""
    if F.domain != FREQUENCY:
        raise UsageError("seq_inv_fourier expects a frequency-domain function")
    grid = F.grid
    width = grid.q ** grid.N
    coeffs = np.conj(_lattice_characters(grid, width)) @ F.values[grid.integer_cells]
    return Sequence.from_array(grid.spec, coeffs * grid.cell_measure(FREQUENCY))


def seq_translate(z: Sequence, m: int) -> Sequence:
    """(T_{u(m)} z)(u(n)) = z(u(n) - u(m)).

    Digitwise arithmetic makes n -> n (-) m a bijection of the indices, so
    every input entry lands on exactly one output index.
    """
    # z(r) lands at n with u(n) = u(r) + u(m)
    return Sequence(z.spec, {lattice_add(z.spec, r, m): v for r, v in z.values.items()})


def seq_modulate(z: Sequence, k: int) -> Sequence:
    """(M_{u(k)} z)(u(n)) = z(u(n)) conj(chi_{u(k)}(u(n))).

    u(k) u(n) has no digit at p**-1, so the factor is 1 at every lattice
    point and this operator is the identity.  It is kept as a literal
    evaluation rather than short-circuited.
    """
    spec = z.spec
    uk = u_of_n(spec, k)
    return Sequence(spec, {n: v * np.conj(chi(k_mul(uk, u_of_n(spec, n)))) for n, v in z.values.items()})


def lattice_shift_index(spec: FieldSpec, j: int, m: int) -> int:
    """Index r with u(r) = p**j u(m); DomainError if that point is off the lattice."""
    r = n_of_u(p_shift(u_of_n(spec, m), j))
    if r is None:
        raise DomainError(f"p^{j} u({m}) is not a lattice point (needs kappa({m}) >= {j})")
    return r


def wave_packet_atom(v: Sequence, j: int, k: int, m: int, grid: Grid = None) -> Sequence:
    """T_{p^j u(m)} M_{u(k)} v.

    With ``grid`` given, the translation must stay inside the q**N window.
    """
    r = lattice_shift_index(v.spec, j, m)
    if grid is not None and r >= grid.q ** grid.N:
        raise RangeError(f"translation u({r}) leaves the q^{grid.N} window")
    return seq_translate(seq_modulate(v, k), r)
