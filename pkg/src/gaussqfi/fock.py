"""Brute-force QFI oracle in a truncated Fock basis.

Probes are built as density matrices by conjugating a thermal diagonal
with truncated operator exponentials, the channel is applied at small
parameter offsets, and the QFI is evaluated through the spectral form of
the symmetric logarithmic derivative.  Nothing here touches the
phase-space machinery, which is the point: it validates the fast path
from outside the formalism.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channels import ChannelSpec
from .errors import CutoffTooSmallError, InvalidInputError
from .probes import OneModeProbeParams, TwoModeProbeParams

# Trace loss allowed after every truncated conjugation (cumulative).
LEAK_TOL = 1e-8
MAX_CUTOFF_ONE_MODE = 128
MAX_CUTOFF_TWO_MODE = 40
# Eigenvalue pairs with p_j + p_k below this are outside the support.
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class FockDensity:
    """Density matrix on a truncated Fock space (cutoff levels per mode)."""

    cutoff: int
    modes: int
    matrix: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def ladder(cutoff: int) -> np.ndarray:
    """Annihilation operator on a cutoff-level Fock space."""
    a = np.zeros((cutoff, cutoff), dtype=complex)
    ks = np.arange(1, cutoff)
    a[ks - 1, ks] = np.sqrt(ks)
    return a


def _thermal_diag(lam: float, cutoff: int) -> np.ndarray:
    n_th = (lam - 1.0) / 2.0
    if n_th <= 0.0:
        p = np.zeros(cutoff)
        p[0] = 1.0
        return p
    ks = np.arange(cutoff)
    return n_th ** ks / (1.0 + n_th) ** (ks + 1)


def _rotation_op(theta: float, cutoff: int) -> np.ndarray:
    return np.diag(np.exp(-1j * theta * np.arange(cutoff)))


def _squeeze_op(r: float, chi: float, cutoff: int) -> np.ndarray:
    a = ladder(cutoff)
    adag = a.conj().T
    gen = -(r / 2.0) * (np.exp(1j * chi) * adag @ adag - np.exp(-1j * chi) * a @ a)
    return scipy.linalg.expm(gen)


def _displacement_op(gamma: complex, cutoff: int) -> np.ndarray:
    a = ladder(cutoff)
    return scipy.linalg.expm(gamma * a.conj().T - np.conjugate(gamma) * a)


def _beamsplit_op(theta: float, chi: float, cutoff: int) -> np.ndarray:
    a = ladder(cutoff)
    a1dag_a2 = np.kron(a.conj().T, a)
    gen = theta * (np.exp(1j * chi) * a1dag_a2 - np.exp(-1j * chi) * a1dag_a2.conj().T)
    return scipy.linalg.expm(gen)


def _edge_mass(rho: np.ndarray, cutoff: int) -> float:
    """Population sitting in the top two Fock levels of any mode.

    Truncated exponentials of anti-Hermitian generators are exactly
    unitary, so trace alone never drops; the mass parked at the edge of
    the basis is what would have leaked past the cutoff and bounds the
    truncation error of every subsequent operation.  Two levels are
    inspected because parity-restricted states leave the very top level
    empty.
    """
    probs = np.diagonal(rho).real
    dim = rho.shape[0]
    idx = np.arange(dim)
    if dim == cutoff:
        edge = idx >= cutoff - 2
    else:
        edge = (idx // cutoff >= cutoff - 2) | (idx % cutoff >= cutoff - 2)
    return float(np.sum(probs[edge]))


class _LeakTracker:
    def __init__(self, rho: np.ndarray, cutoff: int):
        self.rho = rho
        self.cutoff = cutoff

    def conjugate(self, op: np.ndarray, label: str):
        self.rho = op @ self.rho @ op.conj().T
        leak = max(1.0 - float(np.trace(self.rho).real),
                   _edge_mass(self.rho, self.cutoff))
        if leak > LEAK_TOL:
            raise CutoffTooSmallError(
                f"cutoff {self.cutoff}: trace leakage {leak:.2e} after {label}")


def build_fock_state(params, cutoff: int) -> FockDensity:
    """Truncated density matrix of a parametric probe.

    Raises CutoffTooSmallError when any conjugation step leaks more than
    LEAK_TOL of trace.
    """
    if cutoff < 8:
        raise InvalidInputError(f"cutoff must be >= 8, got {cutoff}")
    if isinstance(params, OneModeProbeParams):
        rho = np.diag(_thermal_diag(params.lambda1, cutoff)).astype(complex)
        t = _LeakTracker(rho, cutoff)
        t.conjugate(_squeeze_op(params.r, 0.0, cutoff), "squeezing")
        t.conjugate(_rotation_op(params.theta, cutoff), "rotation")
        t.conjugate(_displacement_op(params.d_mag * np.exp(1j * params.phi_d), cutoff),
                    "displacement")
        rho, modes = t.rho, 1
    elif isinstance(params, TwoModeProbeParams):
        rho = np.kron(np.diag(_thermal_diag(params.lambda1, cutoff)),
                      np.diag(_thermal_diag(params.lambda2, cutoff))).astype(complex)
        t = _LeakTracker(rho, cutoff)
        t.conjugate(np.kron(_squeeze_op(params.r1, 0.0, cutoff),
                            _squeeze_op(params.r2, 0.0, cutoff)), "squeezing")
        t.conjugate(np.kron(_rotation_op(params.psi, cutoff),
                            _rotation_op(-params.psi, cutoff)), "asymmetric rotation")
        t.conjugate(_beamsplit_op(params.theta, 0.0, cutoff), "beam splitter")
        t.conjugate(np.kron(_rotation_op(params.phi1, cutoff),
                            _rotation_op(params.phi2, cutoff)), "rotations")
        t.conjugate(np.kron(_displacement_op(params.d1_mag * np.exp(1j * params.phi_d1), cutoff),
                            _displacement_op(params.d2_mag * np.exp(1j * params.phi_d2), cutoff)),
                    "displacement")
        rho, modes = t.rho, 2
    else:
        raise InvalidInputError(f"unsupported probe parameter type {type(params)!r}")

    rho = (rho + rho.conj().T) / 2.0
    min_eig = float(np.min(np.linalg.eigvalsh(rho)))
    if min_eig < -1e-10:
        raise CutoffTooSmallError(
            f"cutoff {cutoff}: truncation produced negative eigenvalue {min_eig:.2e}")
    return FockDensity(cutoff, modes, rho)


def channel_generator_fock(channel: ChannelSpec, cutoff: int) -> np.ndarray:
    """Anti-Hermitian Fock-space generator of the channel's unitary group."""
    n = channel.modes
    a1 = ladder(cutoff)
    if n == 1:
        ops = [a1]
    elif n == 2:
        eye = np.eye(cutoff)
        ops = [np.kron(a1, eye), np.kron(eye, a1)]
    else:
        raise InvalidInputError("Fock oracle supports one or two modes")
    w = channel.generator
    dim = ops[0].shape[0]
    quad = np.zeros((dim, dim), dtype=complex)
    for k in range(n):
        for l in range(n):
            if w.x_block[k, l] != 0:
                quad += w.x_block[k, l] * ops[k].conj().T @ ops[l]
                quad += np.conjugate(w.x_block[k, l]) * ops[k] @ ops[l].conj().T
            if w.y_block[k, l] != 0:
                quad += w.y_block[k, l] * ops[k].conj().T @ ops[l].conj().T
                quad += np.conjugate(w.y_block[k, l]) * ops[k] @ ops[l]
    gen = 0.5j * quad
    for k in range(n):
        if w.gamma_tilde[k] != 0:
            gen += w.gamma_tilde[k] * ops[k].conj().T
            gen -= np.conjugate(w.gamma_tilde[k]) * ops[k]
    return gen


def choose_cutoff(params, channel: ChannelSpec = None, h: float = 1e-4) -> int:
    """Smallest cutoff from the doubling ladder that passes the leak rule."""
    one_mode = isinstance(params, OneModeProbeParams)
    cutoff = 8 if one_mode else 10
    limit = MAX_CUTOFF_ONE_MODE if one_mode else MAX_CUTOFF_TWO_MODE
    last_err = None
    while cutoff <= limit:
        try:
            rho = build_fock_state(params, cutoff)
            if channel is not None:
                _evolved_pair(rho, channel, h)
            return cutoff
        except CutoffTooSmallError as err:
            last_err = err
            cutoff *= 2
    raise CutoffTooSmallError(
        f"no cutoff up to {limit} passes the leak rule: {last_err}")


def _evolved_pair(rho: FockDensity, channel: ChannelSpec, h: float):
    gen = channel_generator_fock(channel, rho.cutoff)
    u = scipy.linalg.expm(h * gen)
    plus = u @ rho.matrix @ u.conj().T
    minus = u.conj().T @ rho.matrix @ u
    for label, mat in (("+h", plus), ("-h", minus)):
        leak = max(1.0 - float(np.trace(mat).real), _edge_mass(mat, rho.cutoff))
        if leak > LEAK_TOL:
            raise CutoffTooSmallError(
                f"cutoff {rho.cutoff}: evolved state at {label} leaked {leak:.2e}")
    return plus, minus


def fock_qfi(params, channel: ChannelSpec, cutoff: int = None, h: float = 1e-4) -> float:
    """QFI via the SLD spectral formula with a central-difference dp/deps.

    ``H = 2 sum_jk |<j| drho |k>|^2 / (p_j + p_k)`` over the support.
    """
    expected = 1 if isinstance(params, OneModeProbeParams) else 2
    if channel.modes != expected:
        raise InvalidInputError("probe and channel mode counts differ")
    if cutoff is None:
        cutoff = choose_cutoff(params, channel, h)
    rho = build_fock_state(params, cutoff)
    plus, minus = _evolved_pair(rho, channel, h)
    drho = (plus - minus) / (2.0 * h)
    probs, vecs = np.linalg.eigh(rho.matrix)
    mixed = vecs.conj().T @ drho @ vecs
    denom = probs[:, None] + probs[None, :]
    mask = denom > SUPPORT_TOL
    h_val = 2.0 * float(np.sum((np.abs(mixed) ** 2)[mask] / denom[mask]))
    return h_val
