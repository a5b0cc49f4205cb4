"""
Character, Fourier analysis and Sobolev weights on finite quotient grids of K.

A Grid(M, N) models functions supported in p**(-N) D that are constant on
cosets of p**M D.  Time cells are the q**(M+N) points
x = sum_{l=-N}^{M-1} c_l p**l (measure q**-M each); frequency cells are
the points w = sum_{l=-M}^{N-1} d_l p**l (measure q**-N each).  Under the
character the two grids are exact duals, so the transforms below are
exact on the represented class, not discretisations.

Cell indices are mixed radix, least significant digit = lowest power of p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .errors import DomainError, RangeError, UsageError
from .finite_field import FieldSpec
from .local_field import KNumber, k_mul, u_of_n

TIME = "time"
FREQUENCY = "frequency"

NAIVE_BLOCK = 512


def root_table(p: int) -> np.ndarray:
    """exp(2 pi i t / p) for t = 0..p-1, with exactly representable values snapped."""
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    re, im = roots.real.copy(), roots.imag.copy()
    re[np.abs(re) < 1e-15] = 0.0
    im[np.abs(im) < 1e-15] = 0.0
    return re + 1j * im


@dataclass(frozen=True)
class Grid:
    spec: FieldSpec
    M: int
    N: int

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise UsageError(f"grid needs M, N >= 1 (got M={self.M}, N={self.N})")

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def depth(self) -> int:
        return self.M + self.N

    @property
    def size(self) -> int:
        return self.q ** self.depth

    def cell_measure(self, domain: str) -> float:
        return float(self.q) ** (-self.M if domain == TIME else -self.N)

    def low_power(self, domain: str) -> int:
        return -self.N if domain == TIME else -self.M

    @cached_property
    def digits(self) -> np.ndarray:
        """(size, depth) digit matrix; column t is the digit at low_power + t."""
        idx = np.arange(self.size)
        return np.stack([(idx // self.q ** t) % self.q for t in range(self.depth)], axis=1)

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.q ** np.arange(self.depth)

    def index_of_digits(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self._weights

    # -- cells <-> KNumbers -------------------------------------------------
    def point(self, index: int, domain: str) -> KNumber:
        """Canonical representative of a cell (digits below the cell scale are 0)."""
        if not 0 <= index < self.size:
            raise RangeError(f"cell {index} outside grid of size {self.size}")
        return KNumber(self.spec, self.low_power(domain), tuple(int(v) for v in self.digits[index]))

    def cell_of(self, x: KNumber, domain: str) -> int:
        """Cell containing x; RangeError if x lies outside the grid support."""
        lo = self.low_power(domain)
        if not x.is_zero() and x.lo < lo:
            raise RangeError(f"{x} lies outside the {domain} grid support")
        return sum(x.digit_at(lo + t) * self.q ** t for t in range(self.depth))

    # -- frequency-cell geometry ---------------------------------------------
    @cached_property
    def valuation(self) -> np.ndarray:
        """Valuation of each frequency representative; the zero cell gets +inf."""
        d = self.digits
        nz = d != 0
        first = np.where(nz.any(axis=1), nz.argmax(axis=1), -1)
        val = (first - self.M).astype(float)
        val[first < 0] = np.inf
        return val

    @cached_property
    def freq_abs(self) -> np.ndarray:
        """|w| at each frequency representative (0 on the zero cell)."""
        v = self.valuation
        out = np.zeros(self.size)
        fin = np.isfinite(v)
        out[fin] = float(self.q) ** (-v[fin])
        return out

    def sobolev_weight(self, s: float) -> np.ndarray:
        """(1 + |w|^2)**s per frequency cell, evaluated at the representative."""
        return (1.0 + self.freq_abs ** 2) ** s

    @cached_property
    def integer_cells(self) -> np.ndarray:
        """Frequency cells inside D, in order of their D-digit index."""
        return np.arange(self.q ** self.N) * self.q ** self.M

    def lattice_digits(self, k: int):
        """Digits of u(k) as a frequency-cell digit vector, or None if off grid."""
        if k >= self.q ** self.M:
            return None
        vec = np.zeros(self.depth, dtype=np.int64)
        t = self.M - 1
        while k:
            k, r = divmod(k, self.q)
            vec[t] = r
            t -= 1
        return vec

    def translate(self, k: int, cells: np.ndarray = None):
        """Index of w + u(k) for each frequency cell w (or None if u(k) is off grid)."""
        vec = self.lattice_digits(k)
        if vec is None:
            return None
        d = self.digits if cells is None else self.digits[cells]
        return self.index_of_digits(self.spec.add_table[d, vec[None, :]])

    def dilate(self, j: int, cells: np.ndarray = None) -> np.ndarray:
        """Index of the cell containing p**j w, j >= 0.

        Multiplying by p**j moves every digit up j places; digits pushed
        past the top of the window lie in p**N D and are dropped.
        """
        if j < 0:
            raise DomainError("only contracting dilations p**j, j >= 0, map cells to cells")
        idx = np.arange(self.size) if cells is None else np.asarray(cells)
        if j >= self.depth:
            return np.zeros_like(idx)
        return (idx * self.q ** j) % self.size

    def character_on(self, y: KNumber, domain: str) -> np.ndarray:
        """chi(y * x) for every cell representative x of ``domain``.

        Exact provided y times the cell radius lies in D, i.e. chi(y .) is
        constant on cells; RangeError otherwise.
        """
        radius_power = self.M if domain == TIME else self.N
        if not y.is_zero() and y.lo + radius_power < 0:
            raise RangeError(f"chi({y} * x) is not constant on {domain} cells")
        lo = self.low_power(domain)
        tr = self.spec.trace0_table
        phase = np.zeros(self.size, dtype=np.int64)
        for power, a in y.powers().items():
            t = -1 - power - lo
            if 0 <= t < self.depth:
                phase += tr[a, self.digits[:, t]]
        return root_table(self.spec.p)[phase % self.spec.p]

    @cached_property
    def kernel(self) -> np.ndarray:
        """q x q one-digit character table W[a, b] = exp(2 pi i trace0(a b) / p)."""
        return root_table(self.spec.p)[self.spec.trace0_table % self.spec.p]


@dataclass
class SampledFunction:
    grid: Grid
    domain: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.domain not in (TIME, FREQUENCY):
            raise UsageError(f"unknown domain {self.domain!r}")
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        if self.values.size != self.grid.size:
            raise UsageError(f"expected {self.grid.size} values, got {self.values.size}")

    @classmethod
    def zeros(cls, grid: Grid, domain: str) -> "SampledFunction":
        return cls(grid, domain, np.zeros(grid.size, dtype=complex))

    def like(self, values) -> "SampledFunction":
        return SampledFunction(self.grid, self.domain, values)

    def __add__(self, other):
        _same(self, other)
        return self.like(self.values + other.values)

    def __sub__(self, other):
        _same(self, other)
        return self.like(self.values - other.values)

    def __mul__(self, scalar):
        return self.like(self.values * scalar)

    __rmul__ = __mul__


def _same(f: SampledFunction, g: SampledFunction):
    if f.grid != g.grid or f.domain != g.domain:
        raise UsageError("functions live on different grids or domains")


@dataclass
class OmegaSet:
    """Frequency support set for a reducing subspace.

    By default the constructor rejects sets that are not dilation
    invariant on the grid (see ``dilation_violations``); pass
    ``require_invariant=False`` for arbitrary masks.
    """

    grid: Grid
    member: np.ndarray = field(repr=False)
    require_invariant: bool = True

    def __post_init__(self):
        self.member = np.asarray(self.member, dtype=bool).reshape(-1)
        if self.member.size != self.grid.size:
            raise UsageError(f"expected {self.grid.size} membership flags, got {self.member.size}")
        if self.require_invariant:
            bad = self.dilation_violations()
            if bad:
                raise DomainError(f"Omega is not dilation invariant on the grid ({bad} cell pairs differ)")

    @classmethod
    def full(cls, grid: Grid) -> "OmegaSet":
        return cls(grid, np.ones(grid.size, dtype=bool))

    @classmethod
    def empty(cls, grid: Grid) -> "OmegaSet":
        return cls(grid, np.zeros(grid.size, dtype=bool))

    def dilation_violations(self) -> int:
        """Count cells w whose membership differs from that of the cell of p w.

        The zero cell p**N D cannot be resolved (it meets every cone), so
        pairs involving it are skipped.  Pairs (w, p w) cover both
        directions of the dilation.
        """
        image = self.grid.dilate(1)
        ok = (np.arange(self.grid.size) != 0) & (image != 0)
        return int(np.count_nonzero(self.member[ok] != self.member[image[ok]]))


# -- character -------------------------------------------------------------
def chi(x: KNumber) -> complex:
    """The fixed character: exp(2 pi i t / p), t = zeta_0 coordinate of the p**-1 digit."""
    t = x.digit_at(-1) % x.spec.p
    return complex(root_table(x.spec.p)[t])


def chi_n(n: int, x: KNumber, max_depth: int = None) -> complex:
    """chi_{u(n)}(x) = chi(u(n) x)."""
    return chi(k_mul(u_of_n(x.spec, n, max_depth), x))


# -- integrals and transforms ------------------------------------------------
def _fsum_complex(values) -> complex:
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def integrate(f: SampledFunction) -> complex:
    """Haar integral: cell measure times the compensated sum of values."""
    return f.grid.cell_measure(f.domain) * _fsum_complex(f.values)


def pairing(f: SampledFunction, g: SampledFunction) -> complex:
    """<f, g> = integral of f conj(g) on a common grid and domain."""
    _same(f, g)
    return f.grid.cell_measure(f.domain) * _fsum_complex(f.values * np.conj(g.values))


def character_matrix(grid: Grid, freq_rows=None, time_cols=None) -> np.ndarray:
    """chi(w x) for frequency cells ``freq_rows`` by time cells ``time_cols``.

    Frequency digit at power l pairs with the time digit at power -1-l;
    with both index orders starting at the lowest power this is column
    t of w against column depth-1-t of x.
    """
    fd = grid.digits if freq_rows is None else grid.digits[freq_rows]
    td = grid.digits if time_cols is None else grid.digits[time_cols]
    tr = grid.spec.trace0_table
    phase = np.zeros((fd.shape[0], td.shape[0]), dtype=np.int64)
    D = grid.depth
    for t in range(D):
        phase += tr[fd[:, t][:, None], td[:, D - 1 - t][None, :]]
    return root_table(grid.spec.p)[phase % grid.spec.p]


def _naive(values: np.ndarray, grid: Grid, inverse: bool) -> np.ndarray:
    out = np.empty(grid.size, dtype=complex)
    for start in range(0, grid.size, NAIVE_BLOCK):
        rows = np.arange(start, min(start + NAIVE_BLOCK, grid.size))
        if inverse:
            block = character_matrix(grid, time_cols=rows).T
        else:
            block = np.conj(character_matrix(grid, freq_rows=rows))
        out[rows] = block @ values
    return out


def _fast(values: np.ndarray, grid: Grid, inverse: bool) -> np.ndarray:
    q, D = grid.q, grid.depth
    W = grid.kernel if inverse else np.conj(grid.kernel)
    arr = values.reshape((q,) * D, order="F")
    if not inverse:
        arr = arr.transpose(tuple(reversed(range(D))))
    for axis in range(D):
        arr = np.moveaxis(np.tensordot(W, arr, axes=([1], [axis])), 0, axis)
    if inverse:
        arr = arr.transpose(tuple(reversed(range(D))))
    return arr.reshape(-1, order="F")


def fourier(f: SampledFunction, method: str = "fast") -> SampledFunction:
    """f^(w) = integral f(x) conj(chi(w x)) dx on the dual grid."""
    if f.domain != TIME:
        raise UsageError("fourier expects a time-domain function")
    raw = _transform(f.values, f.grid, method, inverse=False)
    return SampledFunction(f.grid, FREQUENCY, f.grid.cell_measure(TIME) * raw)


def inv_fourier(F: SampledFunction, method: str = "fast") -> SampledFunction:
    """f(x) = integral F(w) chi(w x) dw."""
    if F.domain != FREQUENCY:
        raise UsageError("inv_fourier expects a frequency-domain function")
    raw = _transform(F.values, F.grid, method, inverse=True)
    return SampledFunction(F.grid, TIME, F.grid.cell_measure(FREQUENCY) * raw)


def _transform(values, grid, method, inverse):
    if method == "naive":
        return _naive(values, grid, inverse)
    if method == "fast":
        return _fast(values, grid, inverse)
    raise UsageError(f"unknown transform method {method!r}")


def spectrum(f: SampledFunction) -> SampledFunction:
    return f if f.domain == FREQUENCY else fourier(f)


# -- periodisation and brackets -----------------------------------------------
def _by_integer_coset(values: np.ndarray, grid: Grid) -> np.ndarray:
    # cell = a + q**M r: a carries the digits below p**0 (the lattice part u(k)),
    # r the D-part; rows of the result run over k's digit-reversed order, columns over r
    return values.reshape((grid.q ** grid.M, grid.q ** grid.N), order="F")


def periodize(F: SampledFunction) -> np.ndarray:
    """w -> sum_k F(w + u(k)) for w in the D-cells (``Grid.integer_cells`` order)."""
    if F.domain != FREQUENCY:
        raise UsageError("periodize expects a frequency-domain function")
    return _by_integer_coset(F.values, F.grid).sum(axis=0)


def bracket(F: SampledFunction, G: SampledFunction, s: float = 0.0) -> np.ndarray:
    """[F, G]_s(w) = sum_k F(w+u(k)) conj(G(w+u(k))) (1+|w+u(k)|^2)**s on D-cells."""
    _same(F, G)
    if F.domain != FREQUENCY:
        raise UsageError("bracket expects frequency-domain functions")
    prod = F.values * np.conj(G.values) * F.grid.sobolev_weight(s)
    return _by_integer_coset(prod, F.grid).sum(axis=0)


def sobolev_norm(f: SampledFunction, s: float = 0.0) -> float:
    """||f||_{H^s} = (integral |f^|^2 (1+|w|^2)**s dw)**(1/2)."""
    F = spectrum(f)
    dens = np.abs(F.values) ** 2 * F.grid.sobolev_weight(s)
    return math.sqrt(F.grid.cell_measure(FREQUENCY) * math.fsum(dens))


# -- indicators ----------------------------------------------------------------
Region = Union[Callable[[KNumber], bool], np.ndarray]


def indicator(grid: Grid, region: Region, domain: str) -> SampledFunction:
    """1 on the cells selected by ``region`` (predicate on cell representatives or mask)."""
    if callable(region):
        mask = np.array([bool(region(grid.point(i, domain))) for i in range(grid.size)])
    else:
        mask = np.asarray(region, dtype=bool).reshape(-1)
    return SampledFunction(grid, domain, mask.astype(complex))


def ball_mask(grid: Grid, center: KNumber, power: int, domain: str) -> np.ndarray:
    """Cells contained in center + p**power D.

    ``power`` must not be finer than the cell scale of ``domain``.
    """
    lo = grid.low_power(domain)
    fine = grid.M if domain == TIME else grid.N
    if power > fine:
        raise RangeError(f"ball p^{power} D is finer than the {domain} cells")
    if not center.is_zero() and center.lo < lo:
        return np.zeros(grid.size, dtype=bool)
    mask = np.ones(grid.size, dtype=bool)
    for t in range(max(0, power - lo)):
        if t < grid.depth:
            mask &= grid.digits[:, t] == center.digit_at(lo + t)
    return mask


def ball_indicator(grid: Grid, center: KNumber, power: int, domain: str) -> SampledFunction:
    """Indicator of center + p**power D (Phi_k for center 0, power k)."""
    return indicator(grid, ball_mask(grid, center, power, domain), domain)
