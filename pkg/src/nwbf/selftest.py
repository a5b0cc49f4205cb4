"""
Invariant suites for every module, run by ``nwbf selftest``.

Each suite returns a list of (check, ok, detail) rows.  The default scale
is p=2 with M=N=4 (256 cells).
"""

from __future__ import annotations

import itertools
import time
from typing import Callable, List, Tuple

import numpy as np

from .analysis import FREQUENCY, TIME, Grid, OmegaSet, SampledFunction, character_matrix, fourier, inv_fourier
from .characterization import (lemma31_check, lemma32_check, random_spectrum, t_check,
                               theorem_equivalence_harness)
from .config import parse_config
from .finite_field import FieldSpec
from .frames import GeneratorSet, Ranges, bessel_bound
from .generators import haar_pair, haar_spectra, scaled, standard_cases
from .local_field import k_add, k_mul, k_norm, kappa, n_of_u, p_shift, u_of_n
from .report import run
from .sequences import Sequence, seq_fourier, seq_inv_fourier

Row = Tuple[str, bool, str]

# every field with q <= 16, two moduli each for GF(8) and GF(16)
SMALL_FIELDS = [(2, 1, None), (2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (2, 3, (1, 0, 1, 1)),
                (2, 4, (1, 1, 0, 0, 1)), (2, 4, (1, 0, 0, 1, 1)), (3, 1, None), (3, 2, (1, 0, 1)),
                (5, 1, None), (7, 1, None), (11, 1, None), (13, 1, None)]


def _row(name: str, dev: float, tol: float) -> Row:
    return name, bool(dev <= tol), f"max dev {dev:.3g} (tol {tol:g})"


def suite_finite_field() -> List[Row]:
    rows = []
    for p, c, modulus in SMALL_FIELDS:
        spec = FieldSpec(p, c, modulus)
        q = spec.q
        add, mul, inv = spec.add_table, spec.mul_table, spec.inv_table
        ok = True
        for a, b, d in itertools.product(range(q), repeat=3):
            if add[add[a, b], d] != add[a, add[b, d]] or mul[mul[a, b], d] != mul[a, mul[b, d]]:
                ok = False
            if mul[a, add[b, d]] != add[mul[a, b], mul[a, d]]:
                ok = False
        ok &= all(mul[a, inv[a]] == 1 for a in range(1, q))
        ok &= bool((add == add.T).all() and (mul == mul.T).all())
        rows.append((f"axioms GF({p}^{c}) mod {spec.modulus}", ok, f"q={q}"))
    return rows


def suite_local_field() -> List[Row]:
    spec = FieldSpec(2)
    q = spec.q
    bad = 0
    for k in range(4):
        for r in range(16):
            for s in range(min(16, q ** k)):
                if u_of_n(spec, r * q ** k + s) != k_add(p_shift(u_of_n(spec, r), -k), u_of_n(spec, s)):
                    bad += 1
    rows = [("lattice identity r,s<16, k<=3", bad == 0, f"{bad} mismatches")]

    bad = 0
    for k in range(1, 256):
        j = 0
        while n_of_u(p_shift(u_of_n(spec, k), j + 1)) is not None:
            j += 1
        bad += j != kappa(k, q)
    rows.append(("kappa brute force k<256", bad == 0, f"{bad} mismatches"))

    rng = np.random.default_rng(7)
    bad = 0
    for _ in range(200):
        a, b = (u_of_n(spec, int(n)) for n in rng.integers(0, 4096, 2))
        a, b = p_shift(a, int(rng.integers(-3, 4))), p_shift(b, int(rng.integers(-3, 4)))
        na, nb, ns = k_norm(a)[1], k_norm(b)[1], k_norm(a + b)[1]
        bad += ns > max(na, nb) or abs(k_norm(k_mul(a, b))[1] - na * nb) > 1e-12 * max(1.0, na * nb)
    rows.append(("ultrametric and multiplicative norm", bad == 0, f"{bad} violations in 200 samples"))
    return rows


def suite_analysis() -> List[Row]:
    g3 = Grid(FieldSpec(2), 3, 3)
    chars = np.stack([g3.character_on(u_of_n(g3.spec, n), FREQUENCY)[g3.integer_cells] for n in range(8)])
    gram = chars.conj() @ chars.T * g3.cell_measure(FREQUENCY)
    rows = [_row("character orthonormality M=N=3", float(np.max(np.abs(gram - np.eye(8)))), 1e-12)]

    grid = Grid(FieldSpec(2), 4, 4)
    rng = np.random.default_rng(11)
    plan = inv = agree = 0.0
    for _ in range(10):
        f = SampledFunction(grid, TIME, rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size))
        F = fourier(f)
        nf = grid.cell_measure(TIME) * np.sum(np.abs(f.values) ** 2)
        nF = grid.cell_measure(FREQUENCY) * np.sum(np.abs(F.values) ** 2)
        plan = max(plan, abs(nf - nF) / nf)
        inv = max(inv, float(np.max(np.abs(inv_fourier(F).values - f.values))))
        agree = max(agree, float(np.max(np.abs(fourier(f, method="naive").values - F.values))))
    rows += [_row("Plancherel M=N=4", plan, 1e-12), _row("inversion M=N=4", inv, 1e-12),
             _row("naive vs fast M=N=4", agree, 1e-12)]

    K = character_matrix(g3)
    unit = K.conj().T @ K * (g3.cell_measure(FREQUENCY) * g3.cell_measure(TIME))
    rows.append(_row("character matrix unitary M=N=3", float(np.max(np.abs(unit - np.eye(g3.size)))), 1e-12))
    return rows


def suite_sequences() -> List[Row]:
    grid = Grid(FieldSpec(2), 4, 4)
    rng = np.random.default_rng(5)
    z = Sequence.from_array(grid.spec, rng.standard_normal(16) + 1j * rng.standard_normal(16))
    back = seq_inv_fourier(seq_fourier(z, grid))
    dev = max(abs(back[n] - z[n]) for n in range(16))
    F = seq_fourier(z, grid)
    pars = abs(grid.cell_measure(FREQUENCY) * np.sum(np.abs(F.values) ** 2) - z.norm() ** 2)
    return [_row("sequence transform round trip", dev, 1e-12), _row("sequence Parseval", pars, 1e-12)]


def suite_frames() -> List[Row]:
    grid = Grid(FieldSpec(2), 4, 4)
    ranges = Ranges.full(grid)
    primal, _ = haar_pair(grid)
    b = bessel_bound(primal, ranges)
    doubled = scaled(haar_spectra(grid), {1: 2.0})
    bd = bessel_bound(GeneratorSet(doubled[0], doubled[1:]), ranges)
    return [_row("Haar C = 1", abs(b.lower - 1), 1e-8), _row("Haar D = 1", abs(b.upper - 1), 1e-8),
            _row("doubled psi_1 D = 4", abs(bd.upper - 4), 1e-6)]


def suite_characterization() -> List[Row]:
    grid = Grid(FieldSpec(2), 4, 4)
    ranges = Ranges(3, 16)
    omega = OmegaSet.full(grid)
    primal, dual = haar_pair(grid)
    rng = np.random.default_rng(3)
    l31 = max(lemma31_check(primal, random_spectrum(grid, rng), ranges).deviation for _ in range(20))
    l32 = max(lemma32_check(primal, dual, random_spectrum(grid, rng), random_spectrum(grid, rng), ranges).deviation
              for _ in range(20))
    per_k, _ = t_check(primal, dual, omega, ranges)
    t_haar = max(d for d in per_k if d is not None)
    doubled = scaled(haar_spectra(grid), {1: 2.0})
    per_k2, _ = t_check(GeneratorSet(doubled[0], doubled[1:]), GeneratorSet.dual_of(doubled[0], doubled[1:], 0.0),
                        omega, ranges)
    harness = theorem_equivalence_harness(standard_cases(grid), omega, ranges, n_pairs=5)
    return [
        _row("quadratic identity, Haar, 20 trials", l31, 1e-10),
        _row("bilinear identity, Haar, 20 pairs", l32, 1e-10),
        _row("Haar t_k = delta", t_haar, 1e-12),
        _row("doubled psi_1 max|t_0 - 1| = 3", abs(per_k2[0] - 3.0), 1e-12),
        (f"equivalence harness {harness['agreements']}/{harness['total']}",
         harness["agreements"] == harness["total"] == 10, "t verdict vs reconstruction verdict"),
    ]


def suite_cli_report() -> List[Row]:
    cfg = parse_config({"field": {"p": 2}, "grid": {"M": 3, "N": 3}, "ranges": {"J_max": 2, "K_max": 8},
                        "primal": {"name": "haar"}, "test_pairs": 4})
    first, text1 = run(cfg)
    _, text2 = run(cfg)
    return [("haar config passes", first.overall, first.status),
            ("report is byte-identical on rerun", text1 == text2, f"{len(text1)} bytes")]


SUITES: List[Tuple[str, Callable[[], List[Row]]]] = [
    ("finite_field", suite_finite_field),
    ("local_field", suite_local_field),
    ("analysis_core", suite_analysis),
    ("sequence_space", suite_sequences),
    ("frame_lab", suite_frames),
    ("characterization", suite_characterization),
    ("cli_report", suite_cli_report),
]


def run_selftest(out=print) -> bool:
    """Run every suite, print a summary table, and return overall success."""
    results = []
    start = time.perf_counter()
    for module, suite in SUITES:
        t0 = time.perf_counter()
        try:
            rows = suite()
        except Exception as exc:  # a crashing suite is a failed suite, not a crashed selftest
            rows = [("suite raised", False, f"{type(exc).__name__}: {exc}")]
        results.append((module, rows, time.perf_counter() - t0))
    width = max(len(name) for _, rows, _ in results for name, _, _ in rows)
    out(f"{'module':<17} {'check':<{width}}  result  detail")
    for module, rows, secs in results:
        for name, ok, detail in rows:
            out(f"{module:<17} {name:<{width}}  {'PASS' if ok else 'FAIL':<6}  {detail}")
        out(f"{module:<17} {'(suite time)':<{width}}  {'':<6}  {secs:.2f} s")
    passed = sum(ok for _, rows, _ in results for _, ok, _ in rows)
    total = sum(len(rows) for _, rows, _ in results)
    out(f"summary: {passed}/{total} checks passed in {time.perf_counter() - start:.2f} s")
    return passed == total
