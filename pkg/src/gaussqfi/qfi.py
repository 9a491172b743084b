"""Quantum Fisher information for Gaussian states.

Two evaluation paths are provided:

* ``qfi_unitary`` - the one-parameter-group path.  The probe enters
  through its Williamson factors, the channel through its quadratic
  generator; the result needs no channel parameter value because the QFI
  of a one-parameter group is the same at every point.
* ``qfi_general`` - the raw formula with caller-supplied derivatives of
  the Williamson data, used as a finite-difference cross-check and for
  encodings outside the group framework.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import GaussianState, validate_state
from .errors import DegenerateInputError, InvalidInputError
from .symplectic import SymplecticMatrix, WilliamsonForm
from .channels import ChannelSpec
from ._util import _freeze

# Eigenvalue products within this distance of 1 trigger the degenerate
# (pure-pure) conventions of the QFI formula.
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class ProbeState:
    """Probe specified by Williamson factors plus a displacement.

    The equivalent moments are ``sigma = S diag(lams, lams) S^dag`` and
    ``d = (d_tilde, conj(d_tilde))``.
    """

    williamson: WilliamsonForm
    d_tilde: np.ndarray = None

    def __post_init__(self):
        n = self.williamson.modes
        d = self.d_tilde
        d = np.zeros(n, dtype=complex) if d is None else np.atleast_1d(np.asarray(d, dtype=complex))
        if d.shape != (n,):
            raise InvalidInputError(f"d_tilde must have length {n}")
        if np.min(self.williamson.eigenvalues) < 1.0 - 1e-9:
            raise InvalidInputError("probe symplectic eigenvalues must be >= 1")
        object.__setattr__(self, "d_tilde", _freeze(d))

    @property
    def modes(self) -> int:
        return self.williamson.modes

    @property
    def displacement(self) -> np.ndarray:
        return np.concatenate([self.d_tilde, self.d_tilde.conj()])

    def to_state(self) -> GaussianState:
        sigma = self.williamson.covariance
        n = self.modes
        return GaussianState(self.d_tilde, sigma[:n, :n], sigma[:n, n:])

    @classmethod
    def from_state(cls, state: GaussianState) -> "ProbeState":
        from .symplectic import williamson

        report = validate_state(state)
        if report:
            raise InvalidInputError("invalid probe state: " + "; ".join(report))
        return cls(williamson(state.covariance), state.d_tilde)


@dataclass(frozen=True)
class PMatrix:
    """Blocks of ``P = S^{-1} dS/deps``, an element of the symplectic
    Lie algebra (``PK + KP^dag = 0``)."""

    r_block: np.ndarray
    q_block: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.r_block, self.q_block],
                         [self.q_block.conj(), self.r_block.conj()]])

    def algebra_residual(self) -> float:
        """Max-norm residual of the Lie-algebra condition."""
        r, q = self.r_block, self.q_block
        return max(float(np.max(np.abs(r + r.conj().T))),
                   float(np.max(np.abs(q - q.T))))


@dataclass(frozen=True)
class QfiBreakdown:
    """QFI total split into its four formula terms."""

    r_term: float
    q_term: float
    eigen_term: float
    disp_term: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "total",
            self.r_term + self.q_term + self.eigen_term + self.disp_term)

    def to_dict(self) -> dict:
        return {"r_term": self.r_term, "q_term": self.q_term,
                "eigen_term": self.eigen_term, "disp_term": self.disp_term,
                "total": self.total}


def _mode_factors(lams: np.ndarray):
    """Pairwise eigenvalue factors with the pure-pure zero convention."""
    li = lams[:, None]
    lj = lams[None, :]
    prod = li * lj
    f_minus = np.where(prod - 1.0 < DEGENERACY_TOL, 0.0,
                       (li - lj) ** 2 / np.where(prod - 1.0 < DEGENERACY_TOL, 1.0, prod - 1.0))
    f_plus = (li + lj) ** 2 / (prod + 1.0)
    return f_minus, f_plus


def p_matrix(probe: ProbeState, channel: ChannelSpec) -> PMatrix:
    """Blocks of ``S_0^{-1} (iKW) S_0`` for the group framework."""
    if probe.modes != channel.modes:
        raise InvalidInputError(
            f"probe has {probe.modes} modes but channel has {channel.modes}")
    n = probe.modes
    s0 = probe.williamson.s
    p = s0.inverse().matrix @ channel.generator.ikw() @ s0.matrix
    return PMatrix(p[:n, :n], p[:n, n:])


def qfi_unitary(probe: ProbeState, channel: ChannelSpec) -> QfiBreakdown:
    """QFI of a one-parameter Gaussian unitary channel on a Gaussian probe.

    The symplectic eigenvalues are unchanged by a unitary channel, so the
    eigenvalue term vanishes identically; the displacement term evaluates
    ``2 v^dag sigma_0^{-1} v`` with ``v = iKW d_0 + gamma`` through the
    Williamson factors of the probe.
    """
    pm = p_matrix(probe, channel)
    lams = probe.williamson.eigenvalues
    f_minus, f_plus = _mode_factors(lams)
    r_term = float(np.sum(f_minus * np.abs(pm.r_block) ** 2))
    q_term = float(np.sum(f_plus * np.abs(pm.q_block) ** 2))

    v = channel.generator.ikw() @ probe.displacement + channel.generator.gamma
    u = probe.williamson.s.inverse().matrix @ v
    d_full = np.concatenate([lams, lams])
    disp_term = 2.0 * float(np.sum(np.abs(u) ** 2 / d_full))
    return QfiBreakdown(r_term, q_term, 0.0, disp_term)


def qfi_general(eigenvalues, eigenvalues_dot, s: SymplecticMatrix, s_dot,
                d, d_dot, sigma, eigenvalues_ddot=None) -> QfiBreakdown:
    """QFI from Williamson data and its parameter derivatives.

    Args:
        eigenvalues: symplectic eigenvalues ``lam_i(eps)`` (length N).
        eigenvalues_dot: their derivatives ``dlam_i/deps``.
        s: Williamson factor ``S(eps)`` of the covariance.
        s_dot: derivative ``dS/deps`` as a 2N x 2N array.
        d: complex-form displacement at eps.
        d_dot: its derivative.
        sigma: covariance at eps.
        eigenvalues_ddot: second derivatives ``d2lam_i/deps2``, required
            whenever some ``lam_i`` is at the pure boundary where the
            eigenvalue term becomes the regularized limit.
    """
    lams = np.atleast_1d(np.asarray(eigenvalues, dtype=float))
    lams_dot = np.atleast_1d(np.asarray(eigenvalues_dot, dtype=float))
    n = lams.shape[0]
    if lams_dot.shape != (n,) or s.modes != n:
        raise InvalidInputError("inconsistent eigenvalue/matrix dimensions")
    if np.min(lams) < 1.0 - 1e-9:
        raise InvalidInputError("symplectic eigenvalues must be >= 1")

    p = s.inverse().matrix @ np.asarray(s_dot, dtype=complex)
    pm = PMatrix(p[:n, :n], p[:n, n:])
    f_minus, f_plus = _mode_factors(lams)
    r_term = float(np.sum(f_minus * np.abs(pm.r_block) ** 2))
    q_term = float(np.sum(f_plus * np.abs(pm.q_block) ** 2))

    eigen_term = 0.0
    for i in range(n):
        gap = lams[i] ** 2 - 1.0
        if gap < DEGENERACY_TOL:
            if eigenvalues_ddot is None:
                raise DegenerateInputError(
                    f"eigenvalue {i} is pure; supply eigenvalues_ddot for the "
                    "regularized eigenvalue term")
            eigen_term += float(np.asarray(eigenvalues_ddot, dtype=float)[i])
        else:
            eigen_term += float(lams_dot[i] ** 2 / gap)

    d_dot = np.asarray(d_dot, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    disp = 2.0 * np.real(d_dot.conj() @ np.linalg.solve(sigma, d_dot))
    return QfiBreakdown(r_term, q_term, eigen_term, float(disp))


def temperature_factors(lam_i: float, lam_j: float):
    """The four eigenvalue factor types appearing in the QFI formula.

    Returns ``(lam_i^2/(1+lam_i^2), (lam_i+lam_j)^2/(lam_i lam_j + 1),
    (lam_i-lam_j)^2/(lam_i lam_j - 1), 1/lam_i)`` with the third factor
    set to zero at a pure-pure degeneracy.
    """
    if lam_i < 1.0 or lam_j < 1.0:
        raise InvalidInputError("symplectic eigenvalues must be >= 1")
    f1 = lam_i ** 2 / (1.0 + lam_i ** 2)
    f2 = (lam_i + lam_j) ** 2 / (lam_i * lam_j + 1.0)
    prod = lam_i * lam_j
    f3 = 0.0 if prod - 1.0 < DEGENERACY_TOL else (lam_i - lam_j) ** 2 / (prod - 1.0)
    f4 = 1.0 / lam_i
    return f1, f2, f3, f4
