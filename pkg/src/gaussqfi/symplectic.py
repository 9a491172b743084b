"""Structured symplectic linear algebra: generator exponentials, the
displacement integral, Williamson decomposition and Euler composition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._util import _as_complex, _freeze
from .core import k_signs, STRUCTURE_ATOL
from .errors import (
    DecompositionFailureError,
    InvalidDimensionError,
    InvalidInputError,
    NumericalInstabilityError,
    StructureError,
)

# exp_generator falls back from the eigendecomposition path once the
# eigenvector basis is worse conditioned than this.
EIG_COND_LIMIT = 1e6
# Relative singular-value cutoff below which iKW counts as singular and the
# displacement integral switches to its series form.
INVERTIBILITY_RTOL = 1e-10
SYMPLECTIC_FAIL_ATOL = 1e-9
RECONSTRUCTION_FAIL_RTOL = 1e-8


@dataclass(frozen=True)
class SymplecticMatrix:
    """Complex-form symplectic matrix stored by its (alpha, beta) blocks.

    The full matrix ``[[alpha, beta], [conj(beta), conj(alpha)]]``
    satisfies ``S K S^dag = K``; equivalently
    ``alpha alpha^dag - beta beta^dag = I`` with ``alpha beta^T`` symmetric.
    """

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.array(self.alpha, dtype=complex))
        n = a.shape[0]
        b = _as_complex(self.beta, (n, n), "beta")
        if a.shape != (n, n):
            raise InvalidDimensionError("alpha must be square")
        res = max(
            float(np.max(np.abs(a @ a.conj().T - b @ b.conj().T - np.eye(n)))),
            float(np.max(np.abs(a @ b.T - (a @ b.T).T))),
        )
        # roundoff in the defining products grows with the squared entry scale
        scale = max(1.0, float(np.max(np.abs(a))) ** 2 + float(np.max(np.abs(b))) ** 2)
        if res > STRUCTURE_ATOL * scale:
            raise StructureError(f"blocks violate the symplectic condition (residual {res:.2e})")
        object.__setattr__(self, "alpha", _freeze(a))
        object.__setattr__(self, "beta", _freeze(b))

    @property
    def modes(self) -> int:
        return self.alpha.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.alpha, self.beta],
                         [self.beta.conj(), self.alpha.conj()]])

    def inverse(self) -> "SymplecticMatrix":
        """Symplectic inverse ``K S^dag K`` (never a general inverse)."""
        return SymplecticMatrix(self.alpha.conj().T, -self.beta.T)

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        a = self.alpha @ other.alpha + self.beta @ other.beta.conj()
        b = self.alpha @ other.beta + self.beta @ other.alpha.conj()
        return SymplecticMatrix(a, b)

    @classmethod
    def identity(cls, modes: int) -> "SymplecticMatrix":
        return cls(np.eye(modes, dtype=complex), np.zeros((modes, modes), dtype=complex))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "SymplecticMatrix":
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise InvalidDimensionError(f"matrix must be 2N x 2N, got {m.shape}")
        n = m.shape[0] // 2
        res = max(
            float(np.max(np.abs(m[n:, :n] - m[:n, n:].conj()))),
            float(np.max(np.abs(m[n:, n:] - m[:n, :n].conj()))),
        )
        if res > STRUCTURE_ATOL:
            raise StructureError(f"matrix lacks block-conjugation structure (residual {res:.2e})")
        return cls(m[:n, :n], m[:n, n:])


def symplectic_residual(s: SymplecticMatrix) -> float:
    """Max-norm residual of ``S K S^dag - K``."""
    m = s.matrix
    k = np.diag(k_signs(s.modes))
    return float(np.max(np.abs(m @ k @ m.conj().T - k)))


@dataclass(frozen=True)
class GeneratorW:
    """Hermitian quadratic generator with optional linear part.

    ``W = [[X, Y], [conj(Y), conj(X)]]`` with X Hermitian and Y symmetric;
    the linear part is stored as ``gamma_tilde`` with the full vector being
    ``(gamma_tilde, conj(gamma_tilde))``.
    """

    x_block: np.ndarray
    y_block: np.ndarray
    gamma_tilde: np.ndarray = None

    def __post_init__(self):
        x = np.atleast_2d(np.array(self.x_block, dtype=complex))
        n = x.shape[0]
        y = _as_complex(self.y_block, (n, n), "y_block")
        if np.max(np.abs(x - x.conj().T)) > STRUCTURE_ATOL:
            raise StructureError("X block must be Hermitian")
        if np.max(np.abs(y - y.T)) > STRUCTURE_ATOL:
            raise StructureError("Y block must be symmetric")
        g = self.gamma_tilde
        g = np.zeros(n, dtype=complex) if g is None else np.atleast_1d(np.asarray(g, dtype=complex))
        if g.shape != (n,):
            raise InvalidDimensionError(f"gamma_tilde must have length {n}")
        object.__setattr__(self, "x_block", _freeze((x + x.conj().T) / 2))
        object.__setattr__(self, "y_block", _freeze((y + y.T) / 2))
        object.__setattr__(self, "gamma_tilde", _freeze(g))

    @property
    def modes(self) -> int:
        return self.x_block.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.x_block, self.y_block],
                         [self.y_block.conj(), self.x_block.conj()]])

    @property
    def gamma(self) -> np.ndarray:
        return np.concatenate([self.gamma_tilde, self.gamma_tilde.conj()])

    def scaled(self, factor: float) -> "GeneratorW":
        return GeneratorW(factor * self.x_block, factor * self.y_block,
                          factor * self.gamma_tilde)

    def ikw(self) -> np.ndarray:
        """The matrix ``iKW`` generating the symplectic flow."""
        return 1j * k_signs(self.modes)[:, None] * self.matrix


def _exp_eig(a: np.ndarray):
    """Eigendecomposition exponential; returns None when ill-conditioned."""
    try:
        vals, vecs = np.linalg.eig(a)
        cond = np.linalg.cond(vecs)
    except np.linalg.LinAlgError:
        return None
    if not np.isfinite(cond) or cond > EIG_COND_LIMIT:
        return None
    return vecs @ (np.exp(vals)[:, None] * np.linalg.inv(vecs))


def exp_generator(w: GeneratorW) -> SymplecticMatrix:
    """Symplectic matrix ``exp(iKW)`` of a quadratic generator.

    Uses the eigendecomposition of iKW while its eigenvector basis is well
    conditioned and falls back to scaling-and-squaring otherwise; both
    paths are cross-checked in the test suite.
    """
    a = w.ikw()
    m = _exp_eig(a)
    if m is None:
        m = scipy.linalg.expm(a)
    n = w.modes
    scale = max(1.0, float(np.max(np.abs(m))))
    res = max(
        float(np.max(np.abs(m[n:, :n] - m[:n, n:].conj()))),
        float(np.max(np.abs(m[n:, n:] - m[:n, :n].conj()))),
    )
    if res > SYMPLECTIC_FAIL_ATOL * scale:
        raise NumericalInstabilityError(
            f"exponential lost block structure (residual {res:.2e}); reduce |W|")
    try:
        s = SymplecticMatrix(m[:n, :n], m[:n, n:])
    except StructureError as exc:
        raise NumericalInstabilityError(f"exponential lost symplecticity: {exc}") from exc
    res = symplectic_residual(s)
    if res > SYMPLECTIC_FAIL_ATOL * scale * scale:
        raise NumericalInstabilityError(
            f"exponential lost symplecticity (residual {res:.2e}); reduce |W|")
    return s


def _shift_series(a: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Series ``sum_n a^n / (n+1)! gamma`` for the displacement integral."""
    term = gamma.copy()
    b = term.copy()
    for n in range(1, 201):
        term = (a @ term) / (n + 1)
        b = b + term
        if np.linalg.norm(term) < 1e-16 * max(np.linalg.norm(b), 1e-300):
            return b
    raise NumericalInstabilityError("displacement series did not converge in 200 terms")


def displacement_shift(w: GeneratorW) -> np.ndarray:
    """Displacement ``b = (integral_0^1 exp(iKW t) dt) gamma``.

    Evaluates the closed form ``(iKW)^{-1} (exp(iKW) - I) gamma`` when iKW
    is safely invertible and the convergent series otherwise.
    """
    a = w.ikw()
    gamma = w.gamma
    if not np.any(gamma):
        return np.zeros_like(gamma)
    svals = np.linalg.svd(a, compute_uv=False)
    if svals[-1] > INVERTIBILITY_RTOL * svals[0]:
        s = exp_generator(w).matrix
        return np.linalg.solve(a, (s - np.eye(a.shape[0])) @ gamma)
    return _shift_series(a, gamma)


@dataclass(frozen=True)
class WilliamsonForm:
    """Williamson factorization ``sigma = S diag(lams, lams) S^dag``."""

    s: SymplecticMatrix
    eigenvalues: np.ndarray

    def __post_init__(self):
        lams = np.atleast_1d(np.asarray(self.eigenvalues, dtype=float))
        if lams.shape != (self.s.modes,):
            raise InvalidDimensionError("eigenvalue count must match modes")
        object.__setattr__(self, "eigenvalues", _freeze(lams))

    @property
    def modes(self) -> int:
        return self.s.modes

    @property
    def covariance(self) -> np.ndarray:
        m = self.s.matrix
        d = np.concatenate([self.eigenvalues, self.eigenvalues])
        return (m * d[None, :]) @ m.conj().T


def _fix_column_phases(cols: np.ndarray) -> np.ndarray:
    """Deterministic gauge: largest-magnitude entry of each column made
    real and positive."""
    out = cols.copy()
    for k in range(cols.shape[1]):
        idx = int(np.argmax(np.abs(cols[:, k])))
        z = cols[idx, k]
        if np.abs(z) > 0:
            out[:, k] = cols[:, k] * (np.abs(z) / z)
    return out


def _order_degenerate(lams: np.ndarray, cols: np.ndarray, tol: float = 1e-8):
    """Sort descending by eigenvalue; break ties lexicographically by the
    rounded column entries so the gauge is reproducible."""
    order = list(range(len(lams)))

    def key(k):
        col = np.round(cols[:, k], 10)
        return (-round(float(lams[k]) / tol) * tol,
                tuple(np.column_stack([col.real, col.imag]).ravel()))

    order.sort(key=key)
    return lams[order], cols[:, order]


def williamson(sigma: np.ndarray) -> WilliamsonForm:
    """Williamson decomposition of a valid complex-form covariance.

    The symplectic spectrum is obtained from the Hermitian similarity
    transform ``sigma^{1/2} K sigma^{1/2}`` of ``K sigma`` (same
    eigenvalues, stable eigenvectors); the symplectic factor is rebuilt
    from the positive-eigenvalue columns, K-normalized by construction.
    """
    sigma = np.asarray(sigma, dtype=complex)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
        raise InvalidDimensionError(f"covariance must be 2N x 2N, got {sigma.shape}")
    n = sigma.shape[0] // 2
    if np.max(np.abs(sigma - sigma.conj().T)) > STRUCTURE_ATOL:
        raise InvalidInputError("covariance must be Hermitian")
    evals, evecs = np.linalg.eigh((sigma + sigma.conj().T) / 2)
    if evals[0] <= 0:
        raise InvalidInputError(
            f"covariance must be positive-definite (min eigenvalue {evals[0]:.3e})")
    root = (evecs * np.sqrt(evals)[None, :]) @ evecs.conj().T
    t = root @ (k_signs(n)[:, None] * root)
    t = (t + t.conj().T) / 2
    tvals, tvecs = np.linalg.eigh(t)
    pos = np.argsort(tvals)[::-1][:n]
    lams = tvals[pos]
    if lams.shape[0] != n or lams[-1] <= 0:
        raise DecompositionFailureError("symplectic spectrum is not (+, -) paired")
    cols = root @ tvecs[:, pos] / np.sqrt(lams)[None, :]
    cols = _fix_column_phases(cols)
    lams, cols = _order_degenerate(lams, cols)
    s = SymplecticMatrix(cols[:n, :], cols[n:, :].conj())
    form = WilliamsonForm(s, lams)
    res = float(np.max(np.abs(form.covariance - sigma)))
    scale = float(np.max(np.abs(sigma)))
    if res > RECONSTRUCTION_FAIL_RTOL * max(scale, 1.0):
        raise DecompositionFailureError(
            f"reconstruction residual {res:.2e} exceeds {RECONSTRUCTION_FAIL_RTOL:.0e}")
    return form


@dataclass(frozen=True)
class EulerFactors:
    """Euler (Bloch-Messiah) factors: passive U1, squeezings r, passive U2."""

    u1: np.ndarray
    squeezings: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        u1 = np.atleast_2d(np.array(self.u1, dtype=complex))
        n = u1.shape[0]
        u2 = _as_complex(self.u2, (n, n), "u2")
        r = np.atleast_1d(np.asarray(self.squeezings, dtype=float))
        if r.shape != (n,):
            raise InvalidDimensionError("squeezings must have one entry per mode")
        for name, u in (("u1", u1), ("u2", u2)):
            if np.max(np.abs(u @ u.conj().T - np.eye(n))) > STRUCTURE_ATOL:
                raise InvalidInputError(f"{name} must be unitary")
        object.__setattr__(self, "u1", _freeze(u1))
        object.__setattr__(self, "u2", _freeze(u2))
        object.__setattr__(self, "squeezings", _freeze(r))


def euler_compose(factors: EulerFactors) -> SymplecticMatrix:
    """Assemble ``blkdiag(U1, conj U1) . squeeze(r) . blkdiag(U2, conj U2)``.

    The middle factor carries the ``-sinh`` off-diagonal sign convention.
    """
    ch = np.diag(np.cosh(factors.squeezings)).astype(complex)
    sh = np.diag(np.sinh(factors.squeezings)).astype(complex)
    alpha = factors.u1 @ ch @ factors.u2
    beta = -factors.u1 @ sh @ factors.u2.conj()
    return SymplecticMatrix(alpha, beta)
