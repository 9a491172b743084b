"""Parametric probe families and the energy bookkeeping that links them.

One-mode probes are squeezed rotated displaced thermal states built as
``S_0 = R(theta) S(r)`` on a thermal core ``diag(lam1, lam1)``.  The
restricted two-mode family applies local rotations, a beam splitter, an
asymmetric rotation and local squeezers to a two-mode thermal core:
``S_0 = R_1(phi1) R_2(phi2) B(theta) R_as(psi) S_1(r1) S_2(r2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .channels import (
    asym_rotation_matrix,
    mix_matrix,
    phase_matrix,
    squeeze_matrix,
)
from .errors import InvalidInputError, StructureError
from .qfi import ProbeState
from .symplectic import WilliamsonForm


@dataclass(frozen=True)
class OneModeProbeParams:
    """General one-mode Gaussian probe parameters."""

    lambda1: float = 1.0
    r: float = 0.0
    theta: float = 0.0
    d_mag: float = 0.0
    phi_d: float = 0.0

    def __post_init__(self):
        if self.lambda1 < 1.0:
            raise InvalidInputError(f"lambda1 must be >= 1, got {self.lambda1}")
        if self.d_mag < 0.0:
            raise InvalidInputError("d_mag must be >= 0")

    def to_probe_state(self) -> ProbeState:
        s0 = phase_matrix(self.theta) @ squeeze_matrix(self.r)
        d = np.array([self.d_mag * np.exp(1j * self.phi_d)])
        return ProbeState(WilliamsonForm(s0, np.array([self.lambda1])), d)

    def mean_photon(self) -> float:
        n_th = (self.lambda1 - 1.0) / 2.0
        return self.d_mag ** 2 + n_th + (1.0 + 2.0 * n_th) * np.sinh(self.r) ** 2


@dataclass(frozen=True)
class TwoModeProbeParams:
    """Restricted two-mode probe family (covers all two-mode pure states)."""

    lambda1: float = 1.0
    lambda2: float = 1.0
    r1: float = 0.0
    r2: float = 0.0
    theta: float = 0.0
    psi: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    d1_mag: float = 0.0
    d2_mag: float = 0.0
    phi_d1: float = 0.0
    phi_d2: float = 0.0

    def __post_init__(self):
        if self.lambda1 < 1.0 or self.lambda2 < 1.0:
            raise InvalidInputError("lambda1, lambda2 must be >= 1")
        if self.d1_mag < 0.0 or self.d2_mag < 0.0:
            raise InvalidInputError("displacement magnitudes must be >= 0")

    def to_probe_state(self) -> ProbeState:
        s0 = (phase_matrix(self.phi1, 0, 2) @ phase_matrix(self.phi2, 1, 2)
              @ mix_matrix(self.theta) @ asym_rotation_matrix(self.psi)
              @ squeeze_matrix(self.r1, 0.0, 0, 2) @ squeeze_matrix(self.r2, 0.0, 1, 2))
        d = np.array([self.d1_mag * np.exp(1j * self.phi_d1),
                      self.d2_mag * np.exp(1j * self.phi_d2)])
        lams = np.array([self.lambda1, self.lambda2])
        return ProbeState(WilliamsonForm(s0, lams), d)

    def mean_photon(self) -> float:
        total = 0.0
        for lam, r, d in ((self.lambda1, self.r1, self.d1_mag),
                          (self.lambda2, self.r2, self.d2_mag)):
            total += d ** 2 + (lam - 1.0) / 2.0 + lam * np.sinh(r) ** 2
        return total


def one_mode_probe_on_two(lambda1: float, r1: float, phi1: float = 0.0,
                          d1_mag: float = 0.0, phi_d1: float = 0.0) -> TwoModeProbeParams:
    """General one-mode probe in mode 1, vacuum in mode 2."""
    return TwoModeProbeParams(lambda1=lambda1, r1=r1, phi1=phi1,
                              d1_mag=d1_mag, phi_d1=phi_d1)


def squeezing_from_energy(n: float, n_d: float, n_th: float) -> float:
    """Invert the mean-energy relation for the squeezing parameter.

    ``n = n_d + n_th + (1 + 2 n_th) sinh^2 r`` gives
    ``r = arcsinh(sqrt((n - n_d - n_th) / (1 + 2 n_th)))``.
    """
    rest = n - n_d - n_th
    if rest < -1e-12:
        raise InvalidInputError(
            f"energy budget infeasible: n={n} < n_d + n_th = {n_d + n_th}")
    return float(np.arcsinh(np.sqrt(max(rest, 0.0) / (1.0 + 2.0 * n_th))))


# ---------------------------------------------------------------------------
# JSON interchange for probe configurations

def probe_params_to_dict(params) -> dict:
    if isinstance(params, OneModeProbeParams):
        return {"kind": "one-mode", **asdict(params)}
    if isinstance(params, TwoModeProbeParams):
        return {"kind": "two-mode", **asdict(params)}
    raise InvalidInputError(f"unsupported probe parameter type {type(params)!r}")


def probe_params_from_dict(data: dict):
    kind = data.get("kind")
    fields = {k: float(v) for k, v in data.items() if k != "kind"}
    try:
        if kind == "one-mode":
            return OneModeProbeParams(**fields)
        if kind == "two-mode":
            return TwoModeProbeParams(**fields)
    except TypeError as exc:
        raise StructureError(f"bad probe parameters: {exc}") from exc
    raise StructureError(f"unknown probe kind {kind!r}")
