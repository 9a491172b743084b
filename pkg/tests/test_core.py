import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gaussqfi as gq
from gaussqfi.errors import InvalidDimensionError, StructureError
from conftest import random_state


def test_k_matrix_one_mode():
    assert np.array_equal(gq.k_matrix(1), np.diag([1.0, -1.0]))


def test_k_matrix_two_modes():
    assert np.array_equal(gq.k_matrix(2), np.diag([1.0, 1.0, -1.0, -1.0]))


def test_k_matrix_squares_to_identity():
    k = gq.k_matrix(3)
    assert np.array_equal(k @ k, np.eye(6))


def test_k_matrix_zero_modes_rejected():
    with pytest.raises(InvalidDimensionError):
        gq.k_matrix(0)


def test_vacuum_is_valid():
    assert gq.validate_state(gq.GaussianState.vacuum(1)) == []
    assert gq.validate_state(gq.GaussianState.vacuum(3)) == []


def test_below_vacuum_covariance_flagged():
    report = gq.validate_moments(np.zeros(2), 0.5 * np.eye(2))
    assert any("physicality" in item for item in report)


def test_conjugate_pair_violation_flagged():
    report = gq.validate_moments(np.array([1.0, 2.0]), np.eye(2))
    assert any("conjugate-pair" in item for item in report)


def test_dimension_mismatch_raises():
    with pytest.raises(InvalidDimensionError):
        gq.validate_moments(np.zeros(4), np.eye(2))
    with pytest.raises(InvalidDimensionError):
        gq.validate_moments(np.zeros(3), np.eye(3))


def test_constructor_rejects_non_hermitian_block():
    x = np.array([[1.0, 1.0], [0.0, 1.0]])
    with pytest.raises(StructureError):
        gq.GaussianState(np.zeros(2), x, np.zeros((2, 2)))


def test_state_arrays_are_frozen():
    state = gq.GaussianState.vacuum(1)
    with pytest.raises(ValueError):
        state.cov_x[0, 0] = 5.0


def test_complex_to_real_vacuum():
    d_re, sigma_re = gq.complex_to_real(gq.GaussianState.vacuum(2))
    assert np.allclose(d_re, 0.0)
    assert np.allclose(sigma_re, np.eye(4))


def test_squeezing_real_form_matches_diagonal():
    # real form of S(r, chi=0) is diag(e^-r, e^r)
    from gaussqfi.channels import squeeze_matrix

    for r in (0.3, -0.88, 1.4):
        s_re = gq.complex_to_real_matrix(squeeze_matrix(r).matrix)
        assert np.allclose(s_re, np.diag([np.exp(-r), np.exp(r)]), atol=1e-12)


def test_real_to_complex_identity_gives_vacuum():
    state = gq.real_to_complex(np.zeros(2), np.eye(2))
    assert gq.validate_state(state) == []
    assert np.allclose(state.covariance, np.eye(2))


def test_beam_splitter_real_form_round_trip():
    from gaussqfi.channels import mix_matrix

    rng = np.random.default_rng(5)
    for _ in range(20):
        theta, chi = rng.uniform(-np.pi, np.pi, 2)
        b = mix_matrix(theta, chi).matrix
        assert np.allclose(gq.real_to_complex_matrix(gq.complex_to_real_matrix(b)), b,
                           atol=1e-12)


def test_round_trip_random_states(rng):
    for _ in range(100):
        n = int(rng.integers(1, 4))
        state = random_state(rng, n)
        d_re, sigma_re = gq.complex_to_real(state)
        back = gq.real_to_complex(d_re, sigma_re)
        assert np.max(np.abs(back.displacement - state.displacement)) < 1e-12
        assert np.max(np.abs(back.covariance - state.covariance)) < 1e-12


def test_random_real_psd_above_vacuum_is_valid(rng):
    for _ in range(25):
        n = int(rng.integers(1, 4))
        m = rng.normal(size=(2 * n, 2 * n))
        sigma_re = m @ m.T + np.eye(2 * n)
        state = gq.real_to_complex(rng.normal(size=2 * n), sigma_re)
        assert gq.validate_state(state) == []


def test_real_to_complex_rejects_asymmetric():
    with pytest.raises(StructureError):
        gq.real_to_complex(np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_mean_photon_vacuum():
    assert gq.mean_photon_number(gq.GaussianState.vacuum(2)) == 0.0


def test_mean_photon_coherent():
    p = gq.OneModeProbeParams(d_mag=1.0)
    assert abs(gq.mean_photon_number(p.to_probe_state().to_state()) - 1.0) < 1e-12


def test_mean_photon_squeezed():
    p = gq.OneModeProbeParams(r=float(np.arcsinh(1.0)))
    assert abs(gq.mean_photon_number(p.to_probe_state().to_state()) - 1.0) < 1e-12


@given(st.floats(min_value=1.0, max_value=50.0))
@settings(max_examples=40, deadline=None)
def test_mean_photon_thermal(lam):
    state = gq.GaussianState.thermal([lam])
    assert abs(gq.mean_photon_number(state) - (lam - 1.0) / 2.0) < 1e-10


def test_mean_photon_invariant_under_passive(rng):
    from gaussqfi.channels import mix_matrix, phase_matrix

    for _ in range(25):
        n = 2
        state = random_state(rng, n)
        s = (phase_matrix(rng.uniform(-np.pi, np.pi), 0, 2)
             @ mix_matrix(rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi, np.pi))).matrix
        sigma = s @ state.covariance @ s.conj().T
        d = s @ state.displacement
        after = gq.GaussianState.from_moments(d, sigma)
        assert abs(gq.mean_photon_number(after) - gq.mean_photon_number(state)) < 1e-10


def test_symplectic_eigenvalues_sorted(rng):
    from conftest import random_covariance

    sigma, lams = random_covariance(rng, 3)
    got = gq.symplectic_eigenvalues(sigma)
    assert np.allclose(got, np.sort(lams)[::-1], atol=1e-9)


def test_json_round_trip(rng):
    for n in (1, 2):
        state = random_state(rng, n)
        back = gq.state_from_json(gq.state_to_json(state))
        assert np.allclose(back.displacement, state.displacement, atol=1e-15)
        assert np.allclose(back.covariance, state.covariance, atol=1e-15)


def test_json_schema_fields():
    data = gq.state_to_dict(gq.GaussianState.vacuum(2))
    assert set(data) == {"modes", "d_tilde", "sigma_X", "sigma_Y"}
    assert data["modes"] == 2
    assert len(data["sigma_X"]) == 4
    text = json.dumps(data)
    assert gq.validate_state(gq.state_from_json(text)) == []


def test_state_from_dict_rejects_bad_pairs():
    with pytest.raises(StructureError):
        gq.state_from_dict({"modes": 1, "d_tilde": [[0, 0]], "sigma_X": [[1, 0], [0, 0]]})
