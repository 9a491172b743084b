import numpy as np
import pytest

import gaussqfi as gq
from gaussqfi.errors import DegenerateBudgetError, InvalidInputError
from gaussqfi.optimizer import (
    FAMILY_COHERENT,
    FAMILY_ONE_MODE_PROBE,
    FAMILY_OPTIMAL,
    ONE_MODE,
    TWO_MODE,
    EnergyBudget,
    OptimizerConfig,
    _decode,
    _fast_objective,
    conjecture_probe,
    optimize_probe,
    scaling_exponent,
)

QUICK = OptimizerConfig(restarts=6, max_iter=600, seed=11, tol=1e-10)


def test_budget_reconstruction_invariant(rng):
    for _ in range(40):
        n = float(rng.uniform(0.1, 5.0))
        fd, ft = rng.uniform(0, 0.5, 2)
        budget = EnergyBudget(n, ((fd, ft),))
        params = budget.one_mode_params(theta=0.3, phi_d=-0.2)
        got = gq.mean_photon_number(params.to_probe_state().to_state())
        assert abs(got - n) < 1e-8
        g = float(rng.uniform(0.1, 0.9))
        budget2 = EnergyBudget(n, ((fd, ft), (ft, fd)), (g, 1.0 - g))
        params2 = budget2.two_mode_params(theta=0.4, psi=0.1)
        got2 = gq.mean_photon_number(params2.to_probe_state().to_state())
        assert abs(got2 - n) < 1e-8


def test_budget_rejects_infeasible():
    with pytest.raises(InvalidInputError):
        EnergyBudget(1.0, ((0.7, 0.5),))
    with pytest.raises(InvalidInputError):
        EnergyBudget(-1.0)
    with pytest.raises(InvalidInputError):
        EnergyBudget(1.0, ((0.0, 0.0), (0.0, 0.0)), (0.7, 0.7))


def test_fast_objective_matches_engine(rng):
    # the optimizer's raw-array path must agree with the public engine
    for fam, channel in ((ONE_MODE, gq.combined_channel(0.7, 1.2, 0.4)),
                         (TWO_MODE, gq.mix_channel(0.3)),
                         (TWO_MODE, gq.twomode_squeeze_channel(0.9))):
        dim = 4 if fam == ONE_MODE else 11
        ikw = channel.generator.ikw()
        gamma = channel.generator.gamma
        for _ in range(40):
            x = rng.normal(size=dim) * 2.0
            n_total = float(rng.uniform(0.2, 4.0))
            fast = -_fast_objective(x, fam, n_total, None, ikw, gamma)
            params, _ = _decode(x, fam, n_total, None)
            slow = gq.qfi_unitary(params.to_probe_state(), channel).total
            assert abs(fast - slow) < 1e-10 * max(1.0, abs(slow))
            # every candidate the search can visit is exactly on budget
            assert abs(params.mean_photon() - n_total) < 1e-8


def test_phase_channel_heisenberg():
    result = optimize_probe(gq.phase_channel(), ONE_MODE, EnergyBudget(1.0), QUICK)
    assert result.best_qfi >= 16.0 - 1e-6
    fd, ft = result.best_params["splits"][0]
    assert fd < 1e-3 and ft < 1e-3
    assert result.converged


def test_squeeze_channel_optimum_angles():
    chi = 0.6
    result = optimize_probe(gq.squeeze_channel(chi), ONE_MODE, EnergyBudget(1.0), QUICK)
    assert result.best_qfi >= 18.0 - 1e-6
    probe = result.best_params["probe"]
    assert abs(abs(np.sin(2 * probe.theta + chi)) - 1.0) < 1e-3


def test_determinism():
    cfg = OptimizerConfig(restarts=5, max_iter=300, seed=42, tol=1e-10)
    a = optimize_probe(gq.phase_channel(), ONE_MODE, EnergyBudget(1.3), cfg)
    b = optimize_probe(gq.phase_channel(), ONE_MODE, EnergyBudget(1.3), cfg)
    assert a.best_qfi == b.best_qfi
    assert a.trace == b.trace
    assert a.best_params["probe"] == b.best_params["probe"]


def test_parallel_matches_serial():
    cfg = OptimizerConfig(restarts=4, max_iter=200, seed=3, tol=1e-10)
    a = optimize_probe(gq.phase_channel(), ONE_MODE, EnergyBudget(0.8), cfg, jobs=1)
    b = optimize_probe(gq.phase_channel(), ONE_MODE, EnergyBudget(0.8), cfg, jobs=2)
    assert a.best_qfi == b.best_qfi
    assert a.trace == b.trace


def test_degenerate_budget():
    with pytest.raises(DegenerateBudgetError):
        optimize_probe(gq.phase_channel(), ONE_MODE, EnergyBudget(0.0), QUICK)


def test_trace_monotone_bound():
    result = optimize_probe(gq.squeeze_channel(0.0), ONE_MODE, EnergyBudget(1.0), QUICK)
    best_index = max(result.trace, key=lambda t: t[1])[0]
    for idx, value in result.trace:
        if idx >= best_index:
            assert result.best_qfi >= value - 1e-12


def test_psi_redundant_at_zero_mixing(rng):
    # at theta = 0 the asymmetric rotation only relabels the local phases
    # (phi1 -> phi1 + psi, phi2 -> phi2 - psi): any psi is reachable at
    # psi = 0, so the parameter adds nothing to the family there
    for channel in (gq.mix_channel(0.4), gq.twomode_squeeze_channel(0.7)):
        base = gq.TwoModeProbeParams(lambda1=1.3, lambda2=1.1, r1=0.5, r2=0.3,
                                     theta=0.0, psi=0.0, phi1=0.2, phi2=-0.4,
                                     d1_mag=0.6, d2_mag=0.4, phi_d1=0.1, phi_d2=0.9)
        h0 = gq.qfi_unitary(base.to_probe_state(), channel).total
        for _ in range(20):
            psi = float(rng.uniform(-np.pi, np.pi))
            shifted = gq.TwoModeProbeParams(
                lambda1=base.lambda1, lambda2=base.lambda2, r1=base.r1, r2=base.r2,
                theta=0.0, psi=psi, phi1=base.phi1 - psi, phi2=base.phi2 + psi,
                d1_mag=base.d1_mag, d2_mag=base.d2_mag,
                phi_d1=base.phi_d1, phi_d2=base.phi_d2)
            h1 = gq.qfi_unitary(shifted.to_probe_state(), channel).total
            assert abs(h1 - h0) < 1e-9 * max(1.0, abs(h0))


def test_psi_literal_invariance_undisplaced_st(rng):
    # for the two-mode squeezer with no displacement the invariance holds
    # pointwise: phi_chi = phi1 + phi2 + chi absorbs the +-psi shifts
    channel = gq.twomode_squeeze_channel(0.7)
    base = dict(lambda1=1.3, lambda2=1.1, r1=0.5, r2=0.3, theta=0.0,
                phi1=0.2, phi2=-0.4)
    h0 = gq.qfi_unitary(gq.TwoModeProbeParams(psi=0.0, **base).to_probe_state(),
                        channel).total
    for _ in range(20):
        psi = float(rng.uniform(-np.pi, np.pi))
        h1 = gq.qfi_unitary(gq.TwoModeProbeParams(psi=psi, **base).to_probe_state(),
                            channel).total
        assert abs(h1 - h0) < 1e-9 * max(1.0, abs(h0))


def test_scaling_exponents_basic():
    grid = [1, 2, 4, 8, 16, 32, 64]
    fit = scaling_exponent(gq.phase_channel(), FAMILY_OPTIMAL, grid)
    assert abs(fit.exponent - 2.0) <= 0.05
    fit = scaling_exponent(gq.phase_channel(), FAMILY_COHERENT, grid)
    assert abs(fit.exponent - 1.0) <= 0.05
    fit = scaling_exponent(gq.twomode_squeeze_channel(), FAMILY_ONE_MODE_PROBE, grid)
    assert abs(fit.exponent - 1.0) <= 0.05


def test_scaling_grid_validation():
    with pytest.raises(InvalidInputError):
        scaling_exponent(gq.phase_channel(), FAMILY_OPTIMAL, [1, 2, 3])
    with pytest.raises(InvalidInputError):
        scaling_exponent(gq.phase_channel(), FAMILY_OPTIMAL, [1, 2, 4, 8])


def test_conjecture_probe_quick():
    report = conjecture_probe(gq.phase_channel(), [0.5, 1.0], restarts=4, seed=5)
    assert len(report) == 2
    for entry in report:
        assert not entry["flagged"]
        assert entry["f_d"] < 1e-3 and entry["f_th"] < 1e-3
        want = 8 * entry["n"] * (entry["n"] + 1)
        assert entry["best_qfi"] >= want - 1e-6


def test_conjecture_probe_mix_channel():
    # the optimum keeps all energy in squeezing for the mixer as well
    report = conjecture_probe(gq.mix_channel(), [2.0], restarts=32, seed=9)
    entry = report[0]
    assert not entry["flagged"]
    assert entry["f_d"] < 1e-3 and entry["f_th"] < 1e-3
    assert entry["best_qfi"] >= 32.0 - 1e-6
