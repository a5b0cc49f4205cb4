import numpy as np
import pytest

from nwbf import characterization
from nwbf.analysis import FREQUENCY, Grid, OmegaSet, SampledFunction, ball_indicator, inv_fourier, pairing
from nwbf.characterization import (EquivalenceCase, check_nwbf, lemma31_check, lemma32_check, project_reducing,
                                   random_spectrum, t_check, t_k, theorem_equivalence_harness)
from nwbf.finite_field import FieldSpec
from nwbf.frames import GeneratorSet, Ranges
from nwbf.generators import haar_pair, haar_spectra, phased, scaled, shifted, standard_cases, weighted
from nwbf.local_field import KNumber
from oracles import brute_t_k

F2, F3 = FieldSpec(2), FieldSpec(3)
G3 = Grid(F2, 3, 3)
G4 = Grid(F2, 4, 4)
R4 = Ranges(3, 16)


def pair(primal_spectra, dual_spectra=None, s=0.0):
    dual_spectra = dual_spectra or primal_spectra
    return (GeneratorSet(primal_spectra[0], primal_spectra[1:], s),
            GeneratorSet.dual_of(dual_spectra[0], dual_spectra[1:], s))


def d_indicator(grid):
    return ball_indicator(grid, KNumber.zero(grid.spec), 0, FREQUENCY)


def test_haar_t_examples():
    primal, dual = haar_pair(G4)
    assert np.allclose(t_k(primal, dual, 0, 3).values, 1.0, atol=1e-15)
    assert np.allclose(t_k(primal, dual, 1, 3).values, 0.0, atol=1e-15)


def test_doubled_t0_example():
    primal, dual = pair(scaled(haar_spectra(G4), {1: 2.0}))
    t0 = t_k(primal, dual, 0, 3).values
    assert np.allclose(t0[G4.freq_abs <= 1], 1.0)
    assert np.allclose(t0[G4.freq_abs > 1], 4.0)


CASES = {
    "haar-q2": lambda g: pair(haar_spectra(g)),
    "phased-s": lambda g: pair(phased(haar_spectra(g), 1), s=0.6),
    "scaled": lambda g: pair(scaled(haar_spectra(g), {1: 1.5})),
    "weighted": lambda g: pair(weighted(haar_spectra(g), 2, "primal"), weighted(haar_spectra(g), 2, "dual")),
    "random": lambda g: pair([random_spectrum(g, np.random.default_rng(i)) for i in range(g.q)],
                             [random_spectrum(g, np.random.default_rng(9 + i)) for i in range(g.q)], s=-0.4),
}


@pytest.mark.parametrize("grid", [G3, Grid(F3, 2, 2)], ids=["q2", "q3"])
@pytest.mark.parametrize("case", sorted(CASES))
def test_t_k_matches_cellwise_oracle(grid, case):
    primal, dual = CASES[case](grid)
    for k in range(grid.q ** grid.N):
        for J_max in (0, grid.M - 1, grid.M + grid.N - 2):
            got = t_k(primal, dual, k, J_max)
            if k >= grid.q ** grid.M:
                assert not got.checkable.any()
                continue
            assert np.max(np.abs(got.values - brute_t_k(primal, dual, k, J_max))) <= 1e-12


def test_weighted_bi_frame_is_not_self_dual_but_passes():
    primal, dual = CASES["weighted"](G3)
    assert not np.allclose(primal.psi0_hat.values, dual.psi0_hat.values)
    report = check_nwbf(primal, dual, OmegaSet.full(G3), Ranges.full(G3), n_pairs=5)
    assert report.overall, report.verdicts


def test_extra_scales_do_not_change_t_k():
    primal, dual = pair(phased(haar_spectra(G4), 8))
    for k in (0, 2, 8):
        base = t_k(primal, dual, k, G4.M - 1).values
        for J in (G4.M, G4.M + G4.N - 2, 12):
            assert np.max(np.abs(t_k(primal, dual, k, J).values - base)) <= 1e-15


def test_perturbation_monotonicity():
    last = -1.0
    for lam in (1.0, 1.2, 2.0, 3.5):
        primal, dual = pair(scaled(haar_spectra(G4), {1: lam}))
        dev = float(np.max(np.abs(t_k(primal, dual, 0, 3).values - 1)))
        assert dev >= last
        last = dev


def test_lemma31_examples():
    gen, _ = haar_pair(G4)
    zero = lemma31_check(gen, SampledFunction.zeros(G4, FREQUENCY), R4)
    assert tuple(zero) == (0.0, 0.0, 0.0)
    one = lemma31_check(gen, d_indicator(G4), R4)
    assert one.lhs == pytest.approx(1.0, abs=1e-15) and one.rhs == pytest.approx(1.0, abs=1e-15)
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert lemma31_check(gen, random_spectrum(G4, rng), R4).deviation <= 1e-10


def test_lemma31_with_sobolev_exponent_and_perturbation():
    rng = np.random.default_rng(1)
    sp = scaled(phased(haar_spectra(G3), 3), {1: 2.5})
    for s in (-0.5, 0.8):
        gen = GeneratorSet(sp[0], sp[1:], s)
        for _ in range(5):
            assert lemma31_check(gen, random_spectrum(G3, rng), Ranges.full(G3)).deviation <= 1e-10


def test_lemma32_examples():
    primal, dual = haar_pair(G4)
    d = d_indicator(G4)
    zero = lemma32_check(primal, dual, SampledFunction.zeros(G4, FREQUENCY), d, R4)
    assert tuple(zero) == (0, 0, 0)
    one = lemma32_check(primal, dual, d, d, R4)
    assert abs(one.lhs - 1) < 1e-15 and abs(one.rhs - 1) < 1e-15
    rng = np.random.default_rng(2)
    for _ in range(20):
        f, g = random_spectrum(G4, rng), random_spectrum(G4, rng)
        assert lemma32_check(primal, dual, f, g, R4).deviation <= 1e-10


def test_lemma32_holds_for_invalid_pairs_too():
    # the identity is unconditional; only its right side stops being <f, g>
    primal, dual = pair(shifted(haar_spectra(G3), 0, 1), haar_spectra(G3), s=0.3)
    rng = np.random.default_rng(3)
    for _ in range(5):
        f, g = random_spectrum(G3, rng), random_spectrum(G3, rng)
        assert lemma32_check(primal, dual, f, g, Ranges.full(G3)).deviation <= 1e-10


def test_project_reducing_examples():
    rng = np.random.default_rng(4)
    f = random_spectrum(G3, rng)
    assert np.array_equal(project_reducing(f, OmegaSet.full(G3)).values, f.values)
    assert not project_reducing(f, OmegaSet.empty(G3)).values.any()
    outside = OmegaSet(G3, G3.freq_abs > 1, require_invariant=False)
    ball = ball_indicator(G3, KNumber.zero(F2), -1, FREQUENCY)
    got = project_reducing(ball, outside).values
    assert np.array_equal(got, np.where(G3.freq_abs == 2, 1.0, 0.0))


def test_project_reducing_idempotent_and_self_adjoint():
    rng = np.random.default_rng(5)
    omega = OmegaSet(G3, G3.freq_abs >= 2, require_invariant=False)
    f, g = random_spectrum(G3, rng), random_spectrum(G3, rng)
    Pf = project_reducing(f, omega)
    assert np.max(np.abs(project_reducing(Pf, omega).values - Pf.values)) <= 1e-12
    assert abs(pairing(Pf, g) - pairing(f, project_reducing(g, omega))) <= 1e-12
    assert project_reducing(inv_fourier(f), omega).domain == "time"


def test_check_haar_passes():
    primal, dual = haar_pair(G4)
    rep = check_nwbf(primal, dual, OmegaSet.full(G4), R4)
    assert rep.overall and rep.status == "pass"
    assert rep.t_max_deviation <= 1e-12
    assert rep.overall == all(rep.verdicts.values())
    devs = [rep.t_max_deviation, rep.lemma31_max_deviation, rep.lemma32_max_deviation,
            rep.reconstruction_max_deviation]
    assert all(d >= 0 for d in devs)


def test_check_doubled_fails():
    primal, dual = pair(scaled(haar_spectra(G4), {1: 2.0}))
    rep = check_nwbf(primal, dual, OmegaSet.full(G4), R4)
    assert not rep.overall and rep.status == "fail"
    assert abs(rep.t_deviation[0] - 3.0) <= 1e-12
    assert not rep.verdicts["t_check"] and not rep.verdicts["reconstruction"]
    assert rep.verdicts["lemma31"] and rep.verdicts["lemma32"] and rep.verdicts["bessel"]


def test_check_translates_only_on_d():
    psi0 = d_indicator(G3)
    primal, dual = GeneratorSet(psi0, [], 0.0), GeneratorSet.dual_of(psi0, [], 0.0)
    omega = OmegaSet(G3, G3.freq_abs <= 1, require_invariant=False)
    rep = check_nwbf(primal, dual, omega, Ranges(0, 8))
    assert rep.overall, rep.verdicts
    # the same system misses everything outside D
    assert not check_nwbf(primal, dual, OmegaSet.full(G3), Ranges(0, 8)).overall


def test_t_check_counts_pairs_inside_omega_only():
    primal, dual = haar_pair(G3)
    per_k, uncheckable = t_check(primal, dual, OmegaSet.full(G3), Ranges(2, 8))
    assert uncheckable == 0 and len(per_k) == 8 and max(per_k) <= 1e-15
    per_k, _ = t_check(primal, dual, OmegaSet.empty(G3), Ranges(2, 8))
    assert per_k == [None] * 8


def test_harness_examples():
    omega = OmegaSet.full(G4)
    summary = theorem_equivalence_harness(standard_cases(G4), omega, R4, n_pairs=5)
    assert (summary["agreements"], summary["total"]) == (10, 10)
    assert summary["counterexamples"] == []
    verdicts = [row["t_verdict"] for row in summary["cases"]]
    assert verdicts == [True] * 5 + [False] * 5
    assert theorem_equivalence_harness([], omega, R4) == {"cases": [], "agreements": 0, "total": 0,
                                                          "counterexamples": []}
    primal, dual = haar_pair(G4)
    one = theorem_equivalence_harness([EquivalenceCase("haar", primal, dual)], omega, R4)
    row = one["cases"][0]
    assert row["agree"] and row["t_verdict"] and row["reconstruction_verdict"]


def test_harness_serializes_disagreements(monkeypatch):
    primal, dual = haar_pair(G3)
    monkeypatch.setattr(characterization, "reconstruction_deviation", lambda *a, **k: (1.0, 1))
    summary = theorem_equivalence_harness([EquivalenceCase("haar", primal, dual)], OmegaSet.full(G3),
                                          Ranges.full(G3))
    assert summary["agreements"] == 0
    (artifact,) = summary["counterexamples"]
    assert artifact["name"] == "haar" and artifact["s"] == 0.0
    assert len(artifact["primal"]) == 2 and len(artifact["primal"][0]) == G3.size
    assert artifact["primal"][1][G3.translate(1)[0]] == [1.0, 0.0]
