"""
Characterization of nonhomogeneous wavelet bi-frames on a finite grid.

For a primal/dual pair the k-th characterization function is

    t_k(w) = psi_0^(w) conj(dpsi_0^(w + u(k)))
             + sum_l sum_{j=0}^{kappa(k)} psi_l^(p^j w) conj(dpsi_l^(p^j (w + u(k))))

and the pair reconstructs on FH^s(Omega) exactly when t_k = delta_{0,k}
on Omega.  Both sides of that equivalence are computed here through
separate routes: t_k from the spectra directly, the reconstruction
identity from atom coefficients (module ``frames``).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, NamedTuple, Optional

import numpy as np

from .analysis import FREQUENCY, Grid, OmegaSet, SampledFunction, _fsum_complex, fourier, inv_fourier, spectrum
from .errors import UsageError
from .frames import (GeneratorSet, Ranges, analysis_coeffs, bessel_bound, mixed_operator,
                     reconstruction_form)
from .local_field import kappa

DEFAULT_TOLERANCES = {"unitary": 1e-12, "identity": 1e-10}


class TkMap(NamedTuple):
    values: np.ndarray
    checkable: np.ndarray


class IdentityCheck(NamedTuple):
    lhs: complex
    rhs: complex
    deviation: float


def _scale_limit(k: int, q: int, J_max: int) -> int:
    return int(min(kappa(k, q), J_max))


def pair_terms(primal: GeneratorSet, dual: GeneratorSet, k: int, J_max: int) -> TkMap:
    """t_k for an arbitrary pair of exponents.

    Scale j carries the factor q**(-j (s_primal + s_dual)), which is 1 for a
    bi-frame pair (s, -s) and q**(-2 j s) when a system is paired with itself.
    """
    grid = primal.grid
    if dual.grid != grid or dual.L != primal.L:
        raise UsageError("primal and dual must share grid and L")
    shifted = grid.translate(k)
    if shifted is None:
        return TkMap(np.zeros(grid.size, dtype=complex), np.zeros(grid.size, dtype=bool))
    vals = primal.psi0_hat.values * np.conj(dual.psi0_hat.values[shifted])
    for j in range(_scale_limit(k, grid.q, J_max) + 1):
        here, there = grid.dilate(j), grid.dilate(j, shifted)
        factor = float(grid.q) ** (-j * (primal.s + dual.s))
        for P, D in zip(primal.psis_hat, dual.psis_hat):
            vals = vals + factor * P.values[here] * np.conj(D.values[there])
    return TkMap(vals, np.ones(grid.size, dtype=bool))


def t_k(primal: GeneratorSet, dual: GeneratorSet, k: int, J_max: Optional[int] = None) -> TkMap:
    """The k-th characterization function; cells where w + u(k) is off grid are not checkable."""
    if J_max is None:
        J_max = primal.grid.M - 1
    return pair_terms(primal, dual, k, J_max)


def _quadratic_rhs(F: np.ndarray, G: np.ndarray, primal, dual, J_max) -> complex:
    # int conj(G(w)) sum_k F(w + u(k)) T_k(w) dw over every lattice translate on the grid
    grid = primal.grid
    total = []
    for k in range(grid.q ** grid.M):
        terms = pair_terms(primal, dual, k, J_max)
        total.append(np.conj(G) * F[grid.translate(k)] * terms.values)
    return grid.cell_measure(FREQUENCY) * _fsum_complex(np.concatenate(total))


def lemma31_check(gen: GeneratorSet, g: SampledFunction, ranges: Ranges) -> IdentityCheck:
    """Coefficient energy of g against the system vs its frequency-side expression.

    The k = 0 term of the frequency side is the diagonal integral
    int |g^|^2 (|psi_0^|^2 + sum q^{-2js} |psi_l^(p^j w)|^2); the k >= 1
    terms use scales j <= kappa(k).
    """
    G = spectrum(g).values
    coeffs = np.array(list(analysis_coeffs(g, gen, ranges).values()))
    lhs = math.fsum(np.abs(coeffs) ** 2)
    rhs = _quadratic_rhs(G, G, gen, gen, ranges.J_max).real
    return IdentityCheck(lhs, rhs, abs(lhs - rhs) / max(abs(lhs), 1e-300) if lhs or rhs else 0.0)


def lemma32_check(primal: GeneratorSet, dual: GeneratorSet, f: SampledFunction, g: SampledFunction,
                  ranges: Ranges) -> IdentityCheck:
    """Mixed coefficient sum vs int conj(g^) sum_k f^(w+u(k)) t_k(w) dw."""
    lhs = reconstruction_form(f, g, primal, dual, ranges)
    rhs = _quadratic_rhs(spectrum(f).values, spectrum(g).values, primal, dual, ranges.J_max)
    return IdentityCheck(lhs, rhs, abs(lhs - rhs))


def project_reducing(f: SampledFunction, omega: OmegaSet) -> SampledFunction:
    """Zero the spectrum off Omega; the result is returned in f's own domain."""
    if f.grid != omega.grid:
        raise UsageError("function and Omega live on different grids")
    F = spectrum(f)
    P = F.like(F.values * omega.member)
    return P if f.domain == FREQUENCY else inv_fourier(P)


def random_spectrum(grid: Grid, rng: np.random.Generator) -> SampledFunction:
    """Unit-norm random frequency-domain function."""
    v = rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)
    v /= math.sqrt(grid.cell_measure(FREQUENCY) * math.fsum(np.abs(v) ** 2))
    return SampledFunction(grid, FREQUENCY, v)


@dataclass
class CheckReport:
    field: Dict
    grid: Dict
    ranges: Dict
    s: float
    t_deviation: List[Optional[float]]
    t_max_deviation: float
    uncheckable_cells: int
    bessel_primal: Dict
    bessel_dual: Dict
    lemma31_max_deviation: float
    lemma32_max_deviation: float
    reconstruction_max_deviation: float
    reconstruction_pairs: int
    verdicts: Dict[str, bool]
    overall: bool
    status: str
    tolerances: Dict[str, float]
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return asdict(self)


def t_check(primal: GeneratorSet, dual: GeneratorSet, omega: OmegaSet, ranges: Ranges):
    """Per-k maximum of |t_k - delta_{0,k}| over checkable cell pairs in Omega.

    A pair (w, k) is visible to the reconstruction identity on FH^s(Omega)
    only when both w and w + u(k) lie in Omega, so only those pairs are
    compared.  Returns (per-k deviations, uncheckable cell count).
    """
    grid = primal.grid
    per_k, uncheckable = [], 0
    for k in range(ranges.K_max):
        tk = t_k(primal, dual, k, ranges.J_max)
        uncheckable += int(np.count_nonzero(omega.member & ~tk.checkable))
        shifted = grid.translate(k)
        if shifted is None:
            per_k.append(None)
            continue
        mask = omega.member & omega.member[shifted] & tk.checkable
        if not mask.any():
            per_k.append(None)
            continue
        target = 1.0 if k == 0 else 0.0
        per_k.append(float(np.max(np.abs(tk.values[mask] - target))))
    return per_k, uncheckable


def reconstruction_deviation(primal: GeneratorSet, dual: GeneratorSet, omega: OmegaSet, ranges: Ranges,
                             n_pairs: int = 20, seed: int = 0):
    """max |R(f, g) - <f, g>| over unit-norm test pairs in FH^s(Omega).

    The battery is the spanning family of normalised cell indicators inside
    Omega (read off the mixed operator) plus ``n_pairs`` seeded random
    pairs evaluated through the coefficient sums.
    """
    grid = primal.grid
    S = mixed_operator(primal, dual, ranges)
    member = omega.member
    block = (S - np.eye(grid.size))[np.ix_(member, member)]
    dev = float(np.max(np.abs(block))) if block.size else 0.0
    rng = np.random.default_rng(seed)
    for _ in range(n_pairs):
        f = project_reducing(random_spectrum(grid, rng), omega)
        g = project_reducing(random_spectrum(grid, rng), omega)
        inner = grid.cell_measure(FREQUENCY) * _fsum_complex(f.values * np.conj(g.values))
        dev = max(dev, abs(reconstruction_form(f, g, primal, dual, ranges) - inner))
    return dev, int(np.count_nonzero(member)) ** 2 + n_pairs


def _bounds_dict(b) -> Dict:
    return {"lower": b.lower, "upper": b.upper, "rank": b.rank}


def check_nwbf(primal: GeneratorSet, dual: GeneratorSet, omega: OmegaSet, ranges: Ranges,
               tolerances: Optional[Dict[str, float]] = None, n_pairs: int = 20, seed: int = 0) -> CheckReport:
    tol = dict(DEFAULT_TOLERANCES, **(tolerances or {}))
    grid = primal.grid
    notes = []
    if dual.grid != grid or omega.grid != grid:
        raise UsageError("primal, dual and Omega must share one grid")
    if dual.L != primal.L:
        raise UsageError(f"primal has L={primal.L}, dual has L={dual.L}")
    if not math.isclose(dual.s, -primal.s, abs_tol=1e-15):
        notes.append(f"dual exponent {dual.s} is not the negative of the primal exponent {primal.s}")
    if ranges.K_max < grid.q ** grid.N:
        notes.append("K_max < q^N: the psi_0 translates are truncated")
    if ranges.J_max < grid.M - 1:
        notes.append(f"J_max < M-1: scales above {ranges.J_max} that reach the grid are dropped")

    bp = bessel_bound(primal, ranges, omega)
    bd = bessel_bound(dual, ranges, omega)

    per_k, uncheckable = t_check(primal, dual, omega, ranges)
    observed = [d for d in per_k if d is not None]
    t_max = max(observed) if observed else 0.0

    rec_dev, rec_pairs = reconstruction_deviation(primal, dual, omega, ranges, n_pairs, seed)

    rng = np.random.default_rng(seed + 1)
    l31, l32 = 0.0, 0.0
    for _ in range(n_pairs):
        f = project_reducing(random_spectrum(grid, rng), omega)
        g = project_reducing(random_spectrum(grid, rng), omega)
        l31 = max(l31, lemma31_check(primal, g, ranges).deviation)
        l32 = max(l32, lemma32_check(primal, dual, f, g, ranges).deviation)

    verdicts = {
        "bessel": bool(np.isfinite(bp.upper) and np.isfinite(bd.upper)),
        "t_check": t_max <= tol["identity"],
        "reconstruction": rec_dev <= tol["identity"],
        "lemma31": l31 <= tol["identity"],
        "lemma32": l32 <= tol["identity"],
    }
    overall = all(verdicts.values())
    if not overall:
        status = "fail"
    elif uncheckable:
        status = "pass (restricted)"
    else:
        status = "pass"
    spec = grid.spec
    return CheckReport(
        field={"p": spec.p, "c": spec.c, "q": spec.q, "modulus": list(spec.modulus)},
        grid={"M": grid.M, "N": grid.N, "cells": grid.size},
        ranges={"J_max": ranges.J_max, "K_max": ranges.K_max},
        s=primal.s,
        t_deviation=per_k,
        t_max_deviation=t_max,
        uncheckable_cells=uncheckable,
        bessel_primal=_bounds_dict(bp),
        bessel_dual=_bounds_dict(bd),
        lemma31_max_deviation=l31,
        lemma32_max_deviation=l32,
        reconstruction_max_deviation=rec_dev,
        reconstruction_pairs=rec_pairs,
        verdicts=verdicts,
        overall=overall,
        status=status,
        tolerances=tol,
        notes=notes,
    )


@dataclass
class EquivalenceCase:
    name: str
    primal: GeneratorSet
    dual: GeneratorSet


def _serialize_case(case: EquivalenceCase) -> Dict:
    def enc(F):
        return [[float(v.real), float(v.imag)] for v in F.values]
    return {
        "name": case.name,
        "s": case.primal.s,
        "primal": [enc(F) for F in case.primal.spectra()],
        "dual": [enc(F) for F in case.dual.spectra()],
    }


def theorem_equivalence_harness(cases: List[EquivalenceCase], omega: OmegaSet, ranges: Ranges,
                                tolerance: float = DEFAULT_TOLERANCES["identity"], n_pairs: int = 20,
                                seed: int = 0) -> Dict:
    """Run the t_k check and the reconstruction check on every case and compare verdicts."""
    rows, counterexamples = [], []
    for case in cases:
        per_k, uncheckable = t_check(case.primal, case.dual, omega, ranges)
        observed = [d for d in per_k if d is not None]
        t_max = max(observed) if observed else 0.0
        rec_dev, _ = reconstruction_deviation(case.primal, case.dual, omega, ranges, n_pairs, seed)
        t_ok, rec_ok = t_max <= tolerance, rec_dev <= tolerance
        rows.append({
            "name": case.name,
            "t_max_deviation": t_max,
            "reconstruction_max_deviation": rec_dev,
            "t_verdict": t_ok,
            "reconstruction_verdict": rec_ok,
            "agree": t_ok == rec_ok,
            "uncheckable_cells": uncheckable,
        })
        if t_ok != rec_ok:
            counterexamples.append(_serialize_case(case))
    return {
        "cases": rows,
        "agreements": sum(r["agree"] for r in rows),
        "total": len(rows),
        "counterexamples": counterexamples,
    }
