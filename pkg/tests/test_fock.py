import numpy as np
import pytest
from scipy.special import factorial

import gaussqfi as gq
from gaussqfi.errors import CutoffTooSmallError, InvalidInputError
from gaussqfi.fock import build_fock_state, choose_cutoff, fock_qfi, ladder


def test_ladder_matrix():
    a = ladder(4)
    assert a[0, 1] == 1.0 and abs(a[1, 2] - np.sqrt(2)) < 1e-15
    assert np.allclose(a.conj().T @ a, np.diag([0, 1, 2, 3]))


def test_vacuum_density():
    rho = build_fock_state(gq.OneModeProbeParams(), 8)
    expected = np.zeros((8, 8))
    expected[0, 0] = 1.0
    assert np.allclose(rho.matrix, expected, atol=1e-15)


def test_coherent_poisson_weights():
    rho = build_fock_state(gq.OneModeProbeParams(d_mag=1.0), 30)
    ks = np.arange(30)
    poisson = np.exp(-1.0) / factorial(ks)
    assert np.max(np.abs(np.diag(rho.matrix).real - poisson)) < 1e-10


def test_thermal_geometric_weights():
    rho = build_fock_state(gq.OneModeProbeParams(lambda1=2.0), 40)
    n_th = 0.5
    ks = np.arange(40)
    geometric = n_th ** ks / (1 + n_th) ** (ks + 1)
    assert np.max(np.abs(np.diag(rho.matrix).real - geometric)) < 1e-10


def test_cutoff_too_small_raises():
    with pytest.raises(CutoffTooSmallError):
        build_fock_state(gq.OneModeProbeParams(d_mag=2.0), 8)


def test_cutoff_minimum_enforced():
    with pytest.raises(InvalidInputError):
        build_fock_state(gq.OneModeProbeParams(), 4)


def test_choose_cutoff_grows_with_state():
    small = choose_cutoff(gq.OneModeProbeParams(d_mag=0.3))
    large = choose_cutoff(gq.OneModeProbeParams(d_mag=1.5))
    assert large > small


def test_fock_qfi_coherent_phase():
    h = fock_qfi(gq.OneModeProbeParams(d_mag=1.0), gq.phase_channel(), cutoff=30)
    assert abs(h - 4.0) < 1e-3


def test_fock_qfi_squeezed_vacuum_phase():
    h = fock_qfi(gq.OneModeProbeParams(r=0.5), gq.phase_channel(), cutoff=40)
    assert abs(h - 2 * np.sinh(1.0) ** 2) < 1e-3


def test_fock_qfi_universal_probe_mix():
    p = gq.TwoModeProbeParams(r1=0.3, r2=0.3, theta=np.pi / 4, psi=np.pi / 4,
                              phi_d2=-np.pi / 2)
    h = fock_qfi(p, gq.mix_channel(), cutoff=20)
    assert abs(h - 4 * np.sinh(0.6) ** 2) < 1e-3 * max(1.0, 4 * np.sinh(0.6) ** 2)


def test_fock_qfi_mode_mismatch():
    with pytest.raises(InvalidInputError):
        fock_qfi(gq.OneModeProbeParams(), gq.mix_channel())


def test_step_robustness():
    cases = [
        (gq.OneModeProbeParams(lambda1=1.4, r=0.4, theta=0.2, d_mag=0.6, phi_d=0.5),
         gq.combined_channel(1.0, 0.5, 0.3), 32),
        (gq.OneModeProbeParams(lambda1=2.0, d_mag=1.0), gq.phase_channel(), 32),
        (gq.TwoModeProbeParams(lambda1=1.2, r1=0.3, r2=0.2, phi1=0.3, d2_mag=0.4),
         gq.mix_channel(0.5), 20),
    ]
    for p, ch, cutoff in cases:
        h3 = fock_qfi(p, ch, cutoff=cutoff, h=1e-3)
        h4 = fock_qfi(p, ch, cutoff=cutoff, h=1e-4)
        assert abs(h3 - h4) < 1e-4


def test_cutoff_monotone_improvement():
    # doubling the cutoff never worsens the agreement (one-mode panel
    # cases; the two-mode ladder tops out at its 40-per-mode cap)
    from gaussqfi.validate import fock_panel_cases

    for name, p, ch in fock_panel_cases():
        if not isinstance(p, gq.OneModeProbeParams):
            continue
        cutoff = choose_cutoff(p, ch)
        if 2 * cutoff > 128:
            continue
        engine = gq.qfi_unitary(p.to_probe_state(), ch).total
        dev_lo = abs(fock_qfi(p, ch, cutoff=cutoff) - engine)
        dev_hi = abs(fock_qfi(p, ch, cutoff=2 * cutoff) - engine)
        assert dev_hi <= dev_lo + 1e-6, name
