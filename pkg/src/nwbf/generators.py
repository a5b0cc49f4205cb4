"""
Built-in generator spectra and the standard battery of test pairs.

``haar`` is psi_0^ = 1_D and psi_l^ = 1_{u(l)+D} for l = 1..q-1, the
Parseval (indeed orthonormal) system on every grid.  The modifiers keep
or break the characterization equations in controlled ways:

* ``phased``   multiplies every spectrum by seeded unimodular phases;
               applied identically to primal and dual it keeps t_k.
* ``weighted`` multiplies the primal by seeded positive amplitudes a(w) and
               divides the dual by them; t_0 is unchanged.
* ``scaled``   multiplies chosen spectra by constants.
* ``shifted``  moves one spectrum by a lattice translate u(k).
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from .analysis import FREQUENCY, Grid, SampledFunction, ball_indicator
from .characterization import EquivalenceCase
from .errors import ConfigError
from .frames import GeneratorSet
from .local_field import KNumber, u_of_n


def haar_spectra(grid: Grid) -> List[SampledFunction]:
    spec = grid.spec
    out = [ball_indicator(grid, KNumber.zero(spec), 0, FREQUENCY)]
    out += [ball_indicator(grid, u_of_n(spec, ell), 0, FREQUENCY) for ell in range(1, spec.q)]
    return out


def phased(spectra: Sequence[SampledFunction], seed: int) -> List[SampledFunction]:
    rng = np.random.default_rng(seed)
    return [F.like(F.values * np.exp(2j * np.pi * rng.random(F.values.size))) for F in spectra]


def weighted(spectra: Sequence[SampledFunction], seed: int, side: str) -> List[SampledFunction]:
    rng = np.random.default_rng(seed)
    out = []
    for F in spectra:
        a = rng.uniform(0.5, 2.0, F.values.size)
        out.append(F.like(F.values * (a if side == "primal" else 1.0 / a)))
    return out


def scaled(spectra: Sequence[SampledFunction], factors: Dict[int, float]) -> List[SampledFunction]:
    return [F.like(F.values * factors.get(ell, 1.0)) for ell, F in enumerate(spectra)]


def shifted(spectra: Sequence[SampledFunction], ell: int, k: int) -> List[SampledFunction]:
    """Replace spectrum ``ell`` by w -> F(w - u(k))."""
    out = list(spectra)
    F = out[ell]
    target = F.grid.translate(k)
    if target is None:
        raise ConfigError(f"shift u({k}) leaves the frequency grid")
    vals = np.zeros_like(F.values)
    vals[target] = F.values
    out[ell] = F.like(vals)
    return out


def read_spectrum_csv(path, grid: Grid) -> SampledFunction:
    """Read a ``cell,re,im`` table; every cell must appear exactly once."""
    path = Path(path)
    vals = np.zeros(grid.size, dtype=complex)
    seen = set()
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [h.strip() for h in reader.fieldnames] != ["cell", "re", "im"]:
                raise ConfigError(f"{path}: header must be 'cell,re,im'")
            for lineno, row in enumerate(reader, start=2):
                try:
                    cell = int(row["cell"])
                    value = complex(float(row["re"]), float(row["im"]))
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"{path}:{lineno}: malformed row ({exc})") from None
                if not 0 <= cell < grid.size or cell in seen:
                    raise ConfigError(f"{path}:{lineno}: bad or repeated cell index {cell}")
                seen.add(cell)
                vals[cell] = value
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    if len(seen) != grid.size:
        raise ConfigError(f"{path}: expected {grid.size} rows, got {len(seen)}")
    return SampledFunction(grid, FREQUENCY, vals)


def write_function_csv(path, F: SampledFunction):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cell", "re", "im"])
        for i, v in enumerate(F.values):
            w.writerow([i, repr(float(v.real)), repr(float(v.imag))])


def haar_pair(grid: Grid, s: float = 0.0):
    spectra = haar_spectra(grid)
    return (GeneratorSet(spectra[0], spectra[1:], s),
            GeneratorSet.dual_of(spectra[0], spectra[1:], s))


def _pair(primal: List[SampledFunction], dual: List[SampledFunction], s: float):
    return GeneratorSet(primal[0], primal[1:], s), GeneratorSet.dual_of(dual[0], dual[1:], s)


def standard_cases(grid: Grid, s: float = 0.0, seed: int = 0) -> List[EquivalenceCase]:
    """Five pairs satisfying the characterization and five that violate it."""
    base = haar_spectra(grid)
    cases = [EquivalenceCase("haar", *_pair(base, base, s))]
    for i in range(4):
        ph = phased(base, seed + 100 + i)
        cases.append(EquivalenceCase(f"haar-phased-{i}", *_pair(ph, ph, s)))
    for lam in (1.5, 2.0, 4.0):
        sc = scaled(base, {1: lam})
        cases.append(EquivalenceCase(f"haar-scaled-{lam:g}", *_pair(sc, sc, s)))
    sh = shifted(base, 1, 1)
    cases.append(EquivalenceCase("haar-psi1-shifted-u1", *_pair(sh, sh, s)))
    sh0 = shifted(base, 0, 1)
    cases.append(EquivalenceCase("haar-psi0-shifted-u1", *_pair(sh0, base, s)))
    return cases
