"""Complex-form phase-space data model for N-mode Gaussian states.

Conventions (fixed globally, hbar-free):

* mode operators are collected as ``A = (a_1..a_N, a_1^dag..a_N^dag)``;
* the commutation matrix is ``K = diag(+I, -I)``;
* first moments ``d = <A>`` carry the conjugate-pair structure
  ``d = (d_tilde, conj(d_tilde))``;
* second moments use the anticommutator form
  ``sigma_ij = <{dA_i, dA_j^dag}>`` so the vacuum covariance is the
  identity and a thermal mode has ``sigma = diag(lam, lam)`` with
  ``lam = 1 + 2 n_th >= 1``.

Only the irredundant halves (``d_tilde`` and the ``X``, ``Y`` covariance
blocks) are stored; full vectors and matrices are assembled views, which
makes the conjugate-pair structure impossible to violate through the
typed constructors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._util import _as_complex, _freeze
from .errors import InvalidDimensionError, StructureError

# Gate for accepting nearly-Hermitian / nearly-symmetric blocks at
# construction; accepted blocks are symmetrized exactly.
STRUCTURE_ATOL = 1e-8
# Residual imaginary part allowed when a complex-form object is mapped to
# the real form.
IMAG_RESIDUE_ATOL = 1e-9
# Symplectic eigenvalues >= 1 - PHYSICALITY_TOL count as physical.
PHYSICALITY_TOL = 1e-9


def k_matrix(modes: int) -> np.ndarray:
    """Commutation matrix ``K = diag(+1 x N, -1 x N)`` for N modes."""
    if modes < 1:
        raise InvalidDimensionError(f"modes must be >= 1, got {modes}")
    return np.diag(k_signs(modes)).astype(float)


def k_signs(modes: int) -> np.ndarray:
    """Diagonal of the commutation matrix as a length-2N sign vector."""
    if modes < 1:
        raise InvalidDimensionError(f"modes must be >= 1, got {modes}")
    return np.concatenate([np.ones(modes), -np.ones(modes)])


def l_matrix(modes: int) -> np.ndarray:
    """Fixed linear map from ladder to quadrature ordering.

    ``Q = L A`` with ``x = (a^dag + a)/sqrt2``, ``p = i(a^dag - a)/sqrt2``
    and real-form ordering ``(x_1..x_N, p_1..p_N)``.
    """
    eye = np.eye(modes)
    return np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2.0)


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of an N-mode Gaussian state.

    Attributes:
        d_tilde: length-N complex vector of mode expectations ``<a_k>``.
        cov_x: ``N x N`` Hermitian block ``<{da_k, da_l^dag}>``.
        cov_y: ``N x N`` symmetric block ``<{da_k, da_l}>``.
    """

    d_tilde: np.ndarray
    cov_x: np.ndarray
    cov_y: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.array(self.d_tilde, dtype=complex))
        n = d.shape[0]
        if d.ndim != 1 or n < 1:
            raise InvalidDimensionError("d_tilde must be a non-empty vector")
        x = _as_complex(self.cov_x, (n, n), "cov_x")
        y = _as_complex(self.cov_y, (n, n), "cov_y")
        if np.max(np.abs(x - x.conj().T)) > STRUCTURE_ATOL:
            raise StructureError("cov_x block must be Hermitian")
        if np.max(np.abs(y - y.T)) > STRUCTURE_ATOL:
            raise StructureError("cov_y block must be symmetric")
        object.__setattr__(self, "d_tilde", _freeze(d))
        object.__setattr__(self, "cov_x", _freeze((x + x.conj().T) / 2))
        object.__setattr__(self, "cov_y", _freeze((y + y.T) / 2))

    @property
    def modes(self) -> int:
        return self.d_tilde.shape[0]

    @property
    def displacement(self) -> np.ndarray:
        """Full conjugate-pair displacement ``(d_tilde, conj(d_tilde))``."""
        return np.concatenate([self.d_tilde, self.d_tilde.conj()])

    @property
    def covariance(self) -> np.ndarray:
        """Full 2N x 2N covariance ``[[X, Y], [conj(Y), conj(X)]]``."""
        return np.block([[self.cov_x, self.cov_y],
                         [self.cov_y.conj(), self.cov_x.conj()]])

    @classmethod
    def vacuum(cls, modes: int) -> "GaussianState":
        if modes < 1:
            raise InvalidDimensionError(f"modes must be >= 1, got {modes}")
        return cls(np.zeros(modes, dtype=complex),
                   np.eye(modes, dtype=complex),
                   np.zeros((modes, modes), dtype=complex))

    @classmethod
    def thermal(cls, lams, d_tilde=None) -> "GaussianState":
        """Product thermal state with symplectic eigenvalues ``lams``."""
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        n = lams.shape[0]
        d = np.zeros(n, dtype=complex) if d_tilde is None else np.asarray(d_tilde, dtype=complex)
        return cls(d, np.diag(lams).astype(complex), np.zeros((n, n), dtype=complex))

    @classmethod
    def from_moments(cls, displacement, covariance) -> "GaussianState":
        """Build a state from full complex-form moments, checking structure."""
        d = np.atleast_1d(np.asarray(displacement, dtype=complex))
        sigma = np.asarray(covariance, dtype=complex)
        if d.shape[0] % 2 != 0 or sigma.shape != (d.shape[0], d.shape[0]):
            raise InvalidDimensionError(
                f"inconsistent moment shapes {d.shape} / {sigma.shape}")
        n = d.shape[0] // 2
        problems = _structure_report(d, sigma, n)
        if problems:
            raise StructureError("; ".join(problems))
        return cls(d[:n], sigma[:n, :n], sigma[:n, n:])


def _structure_report(d: np.ndarray, sigma: np.ndarray, n: int) -> list:
    report = []
    res = np.max(np.abs(d[n:] - d[:n].conj()))
    if res > STRUCTURE_ATOL:
        report.append(f"displacement lacks conjugate-pair structure (residual {res:.2e})")
    res = np.max(np.abs(sigma - sigma.conj().T))
    if res > STRUCTURE_ATOL:
        report.append(f"covariance is not Hermitian (residual {res:.2e})")
    block = np.block([[sigma[n:, n:].conj(), sigma[n:, :n].conj()],
                      [sigma[:n, n:].conj(), sigma[:n, :n].conj()]])
    res = np.max(np.abs(sigma - block))
    if res > STRUCTURE_ATOL:
        report.append(f"covariance lacks (X, Y) block-conjugation structure (residual {res:.2e})")
    return report


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a complex-form covariance, sorted descending.

    Computed from the positive half of the spectrum of ``K sigma``.
    """
    sigma = np.asarray(sigma, dtype=complex)
    n = sigma.shape[0] // 2
    vals = np.linalg.eigvals(k_signs(n)[:, None] * sigma)
    pos = np.sort(vals.real[vals.real > 0])[::-1]
    return pos[:n]


def validate_moments(displacement, covariance) -> list:
    """Validation report for raw full complex-form moments.

    Returns a list of human-readable violations (empty when valid).
    Raises InvalidDimensionError when the shapes are inconsistent.
    """
    d = np.atleast_1d(np.asarray(displacement, dtype=complex))
    sigma = np.asarray(covariance, dtype=complex)
    if d.ndim != 1 or d.shape[0] % 2 != 0 or d.shape[0] == 0:
        raise InvalidDimensionError(f"displacement length must be even, got {d.shape}")
    if sigma.shape != (d.shape[0], d.shape[0]):
        raise InvalidDimensionError(
            f"covariance shape {sigma.shape} does not match displacement {d.shape}")
    n = d.shape[0] // 2
    report = _structure_report(d, sigma, n)
    lams = symplectic_eigenvalues(sigma)
    if lams.shape[0] < n or np.min(lams) < 1.0 - PHYSICALITY_TOL:
        lam_min = float(np.min(lams)) if lams.size else float("nan")
        report.append(
            f"physicality violated: smallest symplectic eigenvalue {lam_min:.12g} < 1")
    return report


def validate_state(state: GaussianState) -> list:
    """Validation report for a GaussianState (empty when valid)."""
    return validate_moments(state.displacement, state.covariance)


def complex_to_real(state: GaussianState):
    """Map a state to real-form moments ``(d_re, sigma_re)``.

    Ordering is ``(x_1..x_N, p_1..p_N)``; the output is checked to be real
    to IMAG_RESIDUE_ATOL and the imaginary residue is discarded.
    """
    el = l_matrix(state.modes)
    d_re = el @ state.displacement
    sigma_re = el @ state.covariance @ el.conj().T
    res = max(np.max(np.abs(d_re.imag)), np.max(np.abs(sigma_re.imag)))
    if res > IMAG_RESIDUE_ATOL:
        raise StructureError(
            f"complex-form input maps to non-real moments (imag residue {res:.2e})")
    return d_re.real, sigma_re.real


def complex_to_real_matrix(matrix: np.ndarray) -> np.ndarray:
    """Real form ``L M L^dag`` of a complex-form symplectic matrix."""
    m = np.asarray(matrix, dtype=complex)
    n = m.shape[0] // 2
    el = l_matrix(n)
    out = el @ m @ el.conj().T
    if np.max(np.abs(out.imag)) > IMAG_RESIDUE_ATOL:
        raise StructureError("matrix lacks the block-conjugation structure")
    return out.real


def real_to_complex_matrix(matrix_re: np.ndarray) -> np.ndarray:
    """Inverse of complex_to_real_matrix: ``L^dag M_re L``."""
    m = np.asarray(matrix_re, dtype=float)
    n = m.shape[0] // 2
    el = l_matrix(n)
    return el.conj().T @ m @ el


def real_to_complex(displacement_re, covariance_re) -> GaussianState:
    """Build a GaussianState from real-form moments."""
    d_re = np.atleast_1d(np.asarray(displacement_re, dtype=float))
    sig_re = np.asarray(covariance_re, dtype=float)
    if d_re.shape[0] % 2 != 0 or sig_re.shape != (d_re.shape[0], d_re.shape[0]):
        raise InvalidDimensionError(
            f"inconsistent real-form shapes {d_re.shape} / {sig_re.shape}")
    if np.max(np.abs(sig_re - sig_re.T)) > STRUCTURE_ATOL:
        raise StructureError("real-form covariance must be symmetric")
    n = d_re.shape[0] // 2
    el = l_matrix(n)
    d = el.conj().T @ d_re
    sigma = el.conj().T @ sig_re @ el
    return GaussianState(d[:n], sigma[:n, :n], sigma[:n, n:])


def mean_photon_number(state: GaussianState) -> float:
    """Mean total particle number ``sum_k (sigma_kk - 1)/2 + |d_k|^2``."""
    diag = np.diagonal(state.cov_x).real
    return float(np.sum((diag - 1.0) / 2.0 + np.abs(state.d_tilde) ** 2))


# ---------------------------------------------------------------------------
# JSON interchange (the schema used by the CLI)

def _pairs(arr: np.ndarray) -> list:
    flat = np.asarray(arr, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _unpairs(pairs, shape, name: str) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] != int(np.prod(shape)):
        raise StructureError(f"field {name!r} must hold {int(np.prod(shape))} [re, im] pairs")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(shape)


def state_to_dict(state: GaussianState) -> dict:
    n = state.modes
    return {
        "modes": n,
        "d_tilde": _pairs(state.d_tilde),
        "sigma_X": _pairs(state.cov_x),
        "sigma_Y": _pairs(state.cov_y),
    }


def state_from_dict(data: dict) -> GaussianState:
    try:
        n = int(data["modes"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError("state JSON needs an integer 'modes' field") from exc
    if n < 1:
        raise InvalidDimensionError(f"modes must be >= 1, got {n}")
    d = _unpairs(data.get("d_tilde", [[0.0, 0.0]] * n), (n,), "d_tilde")
    x = _unpairs(data["sigma_X"], (n, n), "sigma_X")
    y = _unpairs(data.get("sigma_Y", [[0.0, 0.0]] * (n * n)), (n, n), "sigma_Y")
    return GaussianState(d, x, y)


def state_to_json(state: GaussianState) -> str:
    return json.dumps(state_to_dict(state))


def state_from_json(text: str) -> GaussianState:
    return state_from_dict(json.loads(text))
