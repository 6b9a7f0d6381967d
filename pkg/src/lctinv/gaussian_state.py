"""
Minimal-uncertainty Gaussian states and their covariance factorizations.

Conventions (hbar = 1).  Mean values are stored with lower indices.  The
coordinate wavefunction is a function of the upper-index coordinates
``x^mu = eta^{mu nu} x_nu`` and momenta act as ``p_mu = i d/dx^mu`` so that
``[p_mu, x_nu] = i eta_{mu nu}``.  In these variables

    psi(x) = exp(-B_{mu nu} dx^mu dx^nu - i <p_mu> x^mu) / [(2 pi)^D det X]^(1/4)

with ``dx^mu = x^mu - <x^mu>`` and

    B = (1/4) (eta + 2 i rho) X^-1 eta.

A covariance describes a pure Gaussian state only when ``rho X^-1 eta`` is
symmetric (equivalently ``B`` is symmetric); in that case

    P = (1/4) eta X^-1 eta + rho X^-1 rho^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, MinimalUncertaintyError, NormalizabilityError
from .lct_group import (
    CovarianceBlocks,
    LctMatrix,
    MeanVector,
    Metric,
    transform_covariance,
    transform_means,
)

__all__ = [
    "GaussianState",
    "FactorTriple",
    "minimal_momentum_covariance",
    "make_minimal_state",
    "random_minimal_state",
    "b_matrix",
    "minimal_residual",
    "factorize_covariance",
    "reassemble_covariance",
    "apply_lct",
    "wavefunction_eval",
    "coherent_overlap",
]

_PURITY_TOL = 1e-9


def _as_matrix(m, n=None) -> np.ndarray:
    m = np.array(m, dtype=float)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if n is not None and m.shape[0] != n:
        raise DimensionError(f"expected dimension {n}, got {m.shape[0]}")
    return m


def minimal_momentum_covariance(X, rho, metric: Metric) -> np.ndarray:
    """Momentum block ``P`` of the minimal state with coordinate block ``X`` and cross term ``rho``."""
    X = _as_matrix(X, metric.dim)
    rho = _as_matrix(rho, metric.dim)
    eta = metric.eta
    Xinv = np.linalg.inv(X)
    P = 0.25 * eta @ Xinv @ eta + rho @ Xinv @ rho.T
    return 0.5 * (P + P.T)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Minimal-uncertainty Gaussian state.  Build with :func:`make_minimal_state`."""

    means: MeanVector
    cov: CovarianceBlocks
    metric: Metric

    def __post_init__(self):
        if self.means.dim != self.metric.dim or self.cov.dim != self.metric.dim:
            raise DimensionError("means, covariance and metric dimensions differ")
        if abs(np.linalg.det(self.cov.X)) < 1e-300:
            raise MinimalUncertaintyError("coordinate covariance X is singular")
        object.__setattr__(self, "_b", _b_from_blocks(self.cov.X, self.cov.rho, self.metric))

    @property
    def dim(self) -> int:
        return self.metric.dim

    @property
    def b_matrix(self) -> np.ndarray:
        return self._b

    @property
    def x_upper(self) -> np.ndarray:
        """``<x^mu>``."""
        return self.metric.signs * self.means.x_means


def _b_from_blocks(X, rho, metric: Metric) -> np.ndarray:
    eta = metric.eta
    return 0.25 * (eta + 2j * rho) @ np.linalg.inv(X) @ eta


def make_minimal_state(means: MeanVector, X, rho, metric: Metric) -> GaussianState:
    """Gaussian ground state with the given means, ``X`` and ``rho``; ``P`` is derived."""
    n = metric.dim
    X = _as_matrix(X, n)
    rho = _as_matrix(rho, n)
    if not np.allclose(X, X.T, rtol=0, atol=1e-12 * max(1.0, np.abs(X).max())):
        raise MinimalUncertaintyError("coordinate covariance X must be symmetric")
    X = 0.5 * (X + X.T)
    if abs(np.linalg.det(X)) < 1e-300:
        raise MinimalUncertaintyError("coordinate covariance X is singular")
    g = rho @ np.linalg.inv(X) @ metric.eta
    if np.max(np.abs(g - g.T)) > _PURITY_TOL * max(1.0, np.abs(g).max()):
        raise MinimalUncertaintyError(
            "rho X^-1 eta must be symmetric for a pure Gaussian state"
        )
    P = minimal_momentum_covariance(X, rho, metric)
    return GaussianState(means=means, cov=CovarianceBlocks(P=P, X=X, rho=rho), metric=metric)


def random_minimal_state(metric: Metric, seed: int, mean_scale: float = 1.0) -> GaussianState:
    """Random pure state: ``X`` positive definite, ``rho = G eta X`` with ``G`` symmetric."""
    rng = np.random.default_rng(seed)
    n = metric.dim
    A = rng.uniform(-1.0, 1.0, size=(n, n))
    X = A @ A.T + 0.5 * np.eye(n)
    G = rng.uniform(-0.5, 0.5, size=(n, n))
    G = 0.5 * (G + G.T)
    rho = G @ metric.eta @ X
    means = MeanVector(
        rng.uniform(-mean_scale, mean_scale, n), rng.uniform(-mean_scale, mean_scale, n)
    )
    return make_minimal_state(means, X, rho, metric)


def b_matrix(state: GaussianState) -> np.ndarray:
    """Complex quadratic-form parameter ``B = (1/4)(eta + 2 i rho) X^-1 eta``."""
    return state.b_matrix


def minimal_residual(state_or_cov, metric: Metric = None) -> float:
    """Max-abs violation of ``P = (1/4) eta X^-1 eta + rho X^-1 rho^T``."""
    if isinstance(state_or_cov, GaussianState):
        cov, metric = state_or_cov.cov, state_or_cov.metric
    else:
        cov = state_or_cov
    P = minimal_momentum_covariance(cov.X, cov.rho, metric)
    return float(np.max(np.abs(cov.P - P)))


@dataclass(frozen=True, eq=False)
class FactorTriple:
    """Complex D x D matrices ``(a, b_factor, c)`` factorizing a minimal covariance.

    ``C = L^T (eta (+) eta) L`` with ``L = [[b, 0], [2 a c b, a]]`` and
    ``L^-1 = 2 [[a, 0], [-c, b]]``.
    """

    a: np.ndarray
    b_factor: np.ndarray
    c: np.ndarray

    def lower_block(self) -> np.ndarray:
        """``L = [[b, 0], [2 a c b, a]]``."""
        z = np.zeros_like(self.a)
        return np.block([[self.b_factor, z], [2.0 * self.a @ self.c @ self.b_factor, self.a]])

    def reduction_block(self) -> np.ndarray:
        """``R = [[a, 0], [-c, b]] = L^-1 / 2``; reduced operators are ``sqrt(2) (dp, dx) R``."""
        z = np.zeros_like(self.a)
        return np.block([[self.a, z], [-self.c, self.b_factor]])


def _signed_sqrt(eta: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Square root of ``eta X`` built from the symmetric form ``X^(1/2) eta X^(1/2)``.

    Positive eigenvalues take the positive root, negative ones ``i sqrt(|l|)``.
    Being a primary matrix function of ``eta X``, the result satisfies
    ``a^T = eta a eta``.
    """
    w, U = np.linalg.eigh(X)
    if np.any(w <= 0):
        raise MinimalUncertaintyError("coordinate covariance X must be positive definite")
    xh = U @ np.diag(np.sqrt(w)) @ U.T
    xhi = U @ np.diag(1.0 / np.sqrt(w)) @ U.T
    W = xh @ eta @ xh
    lam, V = np.linalg.eigh(0.5 * (W + W.T))
    roots = np.where(lam > 0, np.sqrt(np.abs(lam)) + 0j, 1j * np.sqrt(np.abs(lam)))
    return xhi @ V @ np.diag(roots) @ V.T @ xh


def factorize_covariance(state: GaussianState, tol: float = 1e-9) -> FactorTriple:
    """Factor the covariance of a minimal state into ``(a, b, c)``.

    ``a`` solves ``a^T eta a = X`` (``a = sqrt(eta X)``), ``b = a^-1 / 2``
    and ``c = a^-1 K a`` where ``K = eta a^-T rho^T`` is the lower-left block
    ``2 a c b`` reproducing ``rho``.  In 1D with ``eta = -1`` this gives
    ``a = i sqrt(X)``, ``b = -i / (2 sqrt(X))`` and ``c = i rho / sqrt(X)``.
    """
    r = minimal_residual(state)
    if r > tol * max(1.0, np.abs(state.cov.P).max()):
        raise MinimalUncertaintyError(f"state violates minimal uncertainty by {r:.3e}")
    eta = state.metric.eta
    X, rho = state.cov.X, state.cov.rho
    a = _signed_sqrt(eta, X)
    ainv = np.linalg.inv(a)
    K = eta @ ainv.T @ rho.T
    c = ainv @ K @ a
    return FactorTriple(a=a, b_factor=0.5 * ainv, c=c)


def reassemble_covariance(f: FactorTriple, metric: Metric) -> np.ndarray:
    """``L^T (eta (+) eta) L`` as a complex 2D x 2D matrix."""
    L = f.lower_block()
    E = np.kron(np.eye(2), metric.eta)
    return L.T @ E @ L


def apply_lct(state: GaussianState, M: LctMatrix) -> GaussianState:
    """Transform means and covariance; ``B`` is recomputed from the new ``(X, rho)``."""
    if M.metric != state.metric:
        raise DimensionError(f"LCT metric {M.metric} differs from state metric {state.metric}")
    means = transform_means(state.means, M)
    cov = transform_covariance(state.cov, M)
    return GaussianState(means=means, cov=cov, metric=state.metric)


def wavefunction_eval(state: GaussianState, points) -> np.ndarray:
    """Evaluate the coordinate wavefunction (global phase ``K = 0``).

    ``points`` holds upper-index coordinates ``x^mu``, shape ``(n_points, D)``
    or ``(n_points,)`` in 1D.
    """
    n = state.dim
    pts = np.asarray(points, dtype=float)
    if n == 1 and pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != n:
        raise DimensionError(f"points must have shape (n, {n}), got {pts.shape}")
    B = state.b_matrix
    Bs = 0.5 * (B + B.T)
    if np.any(np.linalg.eigvalsh(Bs.real) <= 0):
        raise NormalizabilityError("Re(B) is not positive definite")
    detX = np.linalg.det(state.cov.X)
    if detX <= 0:
        raise NormalizabilityError("det X must be positive for wavefunction evaluation")
    dx = pts - state.x_upper
    quad = np.einsum("ki,ij,kj->k", dx, Bs, dx)
    norm = ((2.0 * np.pi) ** n * detX) ** -0.25
    return norm * np.exp(-quad - 1j * pts @ state.means.p_means)


def coherent_overlap(s1: GaussianState, s2: GaussianState, tol: float = 1e-12) -> complex:
    """Closed-form ``<<z1|z2>>`` for 1D states sharing a real ``B`` (``rho = 0``).

    Mean values enter with lower indices; both states must share a metric.
    """
    if s1.metric != s2.metric:
        raise DimensionError("states live over different metrics")
    if s1.dim != 1 or s2.dim != 1:
        raise DimensionError("coherent_overlap is defined for one-dimensional states")
    B1, B2 = s1.b_matrix[0, 0], s2.b_matrix[0, 0]
    if abs(B1.imag) > tol or abs(B2.imag) > tol:
        raise MinimalUncertaintyError("coherent_overlap requires rho = 0 (real B)")
    if abs(B1 - B2) > tol * max(1.0, abs(B1)):
        raise MinimalUncertaintyError(f"states have different B: {B1.real} vs {B2.real}")
    B = B1.real
    A = 1.0 / (4.0 * B)
    dp = s1.means.p_means[0] - s2.means.p_means[0]
    dx = s1.means.x_means[0] - s2.means.x_means[0]
    sx = s1.means.x_means[0] + s2.means.x_means[0]
    eta = s1.metric.signs[0]
    # with eta = -1 (p = -i d/dx_1) this is the familiar -i dp (x + x') / 2
    return complex(np.exp(-dp**2 / (8 * B) - dx**2 / (8 * A) + 0.5j * eta * dp * sx))
