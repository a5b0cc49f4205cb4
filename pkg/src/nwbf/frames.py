"""
Nonhomogeneous wavelet systems in Sobolev scale on a finite grid.

The system generated by (psi_0; psi_1..psi_L) with exponent s is

    psi_{0,0,k}(x)   = psi_0(x - u(k))
    psi^s_{l,j,k}(x) = q**(j(1/2 - s)) psi_l(p**-j x - u(k)),   j >= 0,

whose spectra are

    psi_0^(w) conj(chi_{u(k)}(w))
    q**(-j(1/2 + s)) psi_l^(p**j w) conj(chi(p**j u(k) w)).

Scale-j atoms therefore live at frequency moduli q**j times those of
psi_l.  All pairings are the frequency-side form <f, g> = int f^ conj(g^).

Translation ranges: on a grid whose time support is p**-N D, psi_0 has
K_max (<= q**N) translates and scale j has K_max * q**j, which is exactly
the set of atoms not annihilated by projection onto the grid when
K_max = q**N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Tuple

import numpy as np

from .analysis import FREQUENCY, Grid, SampledFunction, _fsum_complex, root_table, spectrum
from .errors import RangeError, UsageError
from .local_field import p_shift, u_of_n


@dataclass
class GeneratorSet:
    psi0_hat: SampledFunction
    psis_hat: List[SampledFunction] = field(default_factory=list)
    s: float = 0.0
    side: str = "primal"

    def __post_init__(self):
        if self.side not in ("primal", "dual"):
            raise UsageError(f"side must be 'primal' or 'dual', got {self.side!r}")
        for F in [self.psi0_hat, *self.psis_hat]:
            if F.domain != FREQUENCY:
                raise UsageError("generator spectra must be frequency-domain functions")
            if F.grid != self.psi0_hat.grid:
                raise UsageError("all generators must share one grid")

    @classmethod
    def dual_of(cls, psi0_hat, psis_hat, s: float) -> "GeneratorSet":
        """Dual-side generators for primal exponent ``s`` (atoms use -s)."""
        return cls(psi0_hat, list(psis_hat), -s, "dual")

    @property
    def grid(self) -> Grid:
        return self.psi0_hat.grid

    @property
    def L(self) -> int:
        return len(self.psis_hat)

    def spectra(self) -> List[SampledFunction]:
        return [self.psi0_hat, *self.psis_hat]


class AtomIndex(NamedTuple):
    ell: int
    j: int
    k: int


class FrameBounds(NamedTuple):
    lower: float
    upper: float
    rank: int


@dataclass(frozen=True)
class Ranges:
    J_max: int
    K_max: int

    def translates(self, grid: Grid, ell: int, j: int) -> int:
        return self.K_max if ell == 0 else self.K_max * grid.q ** j

    def indices(self, grid: Grid, L: int) -> List[AtomIndex]:
        out = [AtomIndex(0, 0, k) for k in range(self.K_max)]
        for ell in range(1, L + 1):
            for j in range(self.J_max + 1):
                out.extend(AtomIndex(ell, j, k) for k in range(self.translates(grid, ell, j)))
        return out

    @classmethod
    def full(cls, grid: Grid) -> "Ranges":
        """Ranges that capture every atom visible on ``grid``."""
        return cls(J_max=grid.M - 1, K_max=grid.q ** grid.N)


def _check_index(gen: GeneratorSet, idx: AtomIndex):
    grid = gen.grid
    if not 0 <= idx.ell <= gen.L:
        raise RangeError(f"ell={idx.ell} outside 0..{gen.L}")
    if idx.j < 0 or (idx.ell == 0 and idx.j != 0):
        raise RangeError(f"invalid scale j={idx.j} for ell={idx.ell}")
    limit = grid.q ** (grid.N + (idx.j if idx.ell else 0))
    if not 0 <= idx.k < limit:
        raise RangeError(f"translate u({idx.k}) at scale {idx.j} leaves the time window (limit {limit})")


def scale_factor(s: float, j: int, q: int) -> float:
    return float(q) ** (-j * (0.5 + s))


def atom_spectrum(gen: GeneratorSet, idx: AtomIndex) -> SampledFunction:
    """Spectrum of one atom, evaluated cell by cell through KNumber arithmetic."""
    _check_index(gen, idx)
    grid = gen.grid
    ell, j, k = idx
    shift = p_shift(u_of_n(grid.spec, k), j)
    phase = np.conj(grid.character_on(shift, FREQUENCY))
    base = gen.spectra()[ell].values[grid.dilate(j)]
    factor = 1.0 if ell == 0 else scale_factor(gen.s, j, grid.q)
    return SampledFunction(grid, FREQUENCY, factor * base * phase)


def _phase_block(grid: Grid, j: int, count: int) -> np.ndarray:
    """conj(chi(p**j u(k) w)) for k < count, as a (count, size) array.

    u(k) carries base-q digit b_i at p**(-1-i); after the shift it sits at
    p**(j-1-i) and pairs with the frequency digit at p**(i-j), column
    M - j + i of the digit matrix.
    """
    q, M, D = grid.q, grid.M, grid.depth
    tr = grid.spec.trace0_table
    ks = np.arange(count)
    phase = np.zeros((count, grid.size), dtype=np.int64)
    i = 0
    while q ** i < count:
        t = M - j + i
        b = (ks // q ** i) % q
        if 0 <= t < D:
            phase += tr[b[:, None], grid.digits[:, t][None, :]]
        i += 1
    return np.conj(root_table(grid.spec.p)[phase % grid.spec.p])


def analysis_matrix(gen: GeneratorSet, ranges: Ranges) -> Tuple[List[AtomIndex], np.ndarray]:
    """All atom spectra in ``ranges`` as rows of an (atoms, cells) array."""
    grid = gen.grid
    indices, rows = [], []
    if ranges.K_max > grid.q ** grid.N:
        raise RangeError(f"K_max={ranges.K_max} exceeds q^N={grid.q ** grid.N}")
    spectra = gen.spectra()
    for ell in range(gen.L + 1):
        for j in range(ranges.J_max + 1 if ell else 1):
            count = ranges.translates(grid, ell, j)
            base = spectra[ell].values[grid.dilate(j)]
            factor = 1.0 if ell == 0 else scale_factor(gen.s, j, grid.q)
            rows.append(factor * base[None, :] * _phase_block(grid, j, count))
            indices.extend(AtomIndex(ell, j, k) for k in range(count))
    if not rows:
        return [], np.zeros((0, grid.size), dtype=complex)
    return indices, np.concatenate(rows, axis=0)


def analysis_coeffs(f: SampledFunction, gen: GeneratorSet, ranges: Ranges) -> Dict[AtomIndex, complex]:
    """<f, atom> = int f^ conj(atom^) for every atom in ``ranges``, in index order."""
    F = spectrum(f)
    if F.grid != gen.grid:
        raise UsageError("function and generators live on different grids")
    indices, A = analysis_matrix(gen, ranges)
    coeffs = F.grid.cell_measure(FREQUENCY) * (np.conj(A) @ F.values)
    return dict(zip(indices, coeffs))


def bessel_bound(gen: GeneratorSet, ranges: Ranges, omega=None, rank_tol: float = 1e-10) -> FrameBounds:
    """Frame bounds of the truncated system, read off the Gram spectrum.

    Atoms pair against H^s through the H^{-s} inner product, so the Gram
    entries are int a^ conj(b^) (1+|w|^2)**(-s) dw.  ``upper`` is the
    largest eigenvalue (the Bessel bound), ``lower`` the smallest one on
    the span of the atoms.  With ``omega`` the atoms are first projected
    onto that frequency set.
    """
    grid = gen.grid
    _, A = analysis_matrix(gen, ranges)
    if A.shape[0] == 0:
        return FrameBounds(0.0, 0.0, 0)
    weight = grid.sobolev_weight(-gen.s)
    if omega is not None:
        weight = weight * omega.member
    B = A * np.sqrt(weight * grid.cell_measure(FREQUENCY))[None, :]
    small = B @ B.conj().T if B.shape[0] <= B.shape[1] else B.conj().T @ B
    eig = np.linalg.eigvalsh(small)
    top = float(eig[-1]) if eig.size else 0.0
    if top <= 0.0:
        return FrameBounds(0.0, 0.0, 0)
    span = eig[eig > rank_tol * top]
    return FrameBounds(float(span[0]), top, int(span.size))


def _pair_check(primal: GeneratorSet, dual: GeneratorSet):
    if primal.grid != dual.grid:
        raise UsageError("primal and dual generators live on different grids")
    if primal.L != dual.L:
        raise UsageError(f"primal has L={primal.L}, dual has L={dual.L}")


def reconstruction_form(f: SampledFunction, g: SampledFunction, primal: GeneratorSet,
                        dual: GeneratorSet, ranges: Ranges) -> complex:
    """sum over atoms of <f, dual atom> <primal atom, g>."""
    _pair_check(primal, dual)
    cf = analysis_coeffs(f, dual, ranges)
    cg = analysis_coeffs(g, primal, ranges)
    return _fsum_complex([cf[i] * np.conj(cg[i]) for i in cf])


def mixed_operator(primal: GeneratorSet, dual: GeneratorSet, ranges: Ranges) -> np.ndarray:
    """Matrix S with reconstruction_form(f, g) = int conj(g^) (S f^) dw.

    S[w, w'] = q**-N sum_a primal_a(w) conj(dual_a(w')).
    """
    _pair_check(primal, dual)
    _, P = analysis_matrix(primal, ranges)
    _, D = analysis_matrix(dual, ranges)
    return primal.grid.cell_measure(FREQUENCY) * (P.T @ np.conj(D))


def sobolev_scale(gen: GeneratorSet, t: float) -> GeneratorSet:
    """Same generators with the exponent moved by t (primal) or -t (dual)."""
    shift = t if gen.side == "primal" else -t
    return GeneratorSet(gen.psi0_hat, list(gen.psis_hat), gen.s + shift, gen.side)


def norm_sq(values: np.ndarray, grid: Grid) -> float:
    return grid.cell_measure(FREQUENCY) * math.fsum(np.abs(values) ** 2)
