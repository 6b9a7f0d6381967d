"""
Linear canonical transformations over a pseudo-Euclidean phase space.

An LCT acting on D momenta and D coordinates is stored as four D x D blocks
assembled into the 2D x 2D matrix ``M = [[a, c], [b, d]]``.  Mean values and
operators transform as row vectors multiplied on the right,
``(p', x') = (p, x) @ M``, and second moments transform as ``M.T @ C @ M``.
The group condition is ``M.T @ Omega @ M == Omega`` with
``Omega = [[0, eta], [-eta, 0]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .exceptions import DimensionError, NotSymplecticError

__all__ = [
    "Metric",
    "LctMatrix",
    "MeanVector",
    "CovarianceBlocks",
    "omega_form",
    "symplectic_residual",
    "is_symplectic",
    "compose",
    "inverse",
    "identity_lct",
    "random_lct",
    "special_rotation_lct",
    "transform_means",
    "transform_covariance",
    "covariance_invariant",
    "unitary_factor",
]


@dataclass(frozen=True)
class Metric:
    """Diagonal metric with ``d_plus`` entries +1 followed by ``d_minus`` entries -1."""

    d_plus: int
    d_minus: int

    def __post_init__(self):
        for name in ("d_plus", "d_minus"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise DimensionError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.d_plus + self.d_minus == 0:
            raise DimensionError("metric dimension must be at least 1")

    @property
    def dim(self) -> int:
        return int(self.d_plus + self.d_minus)

    @property
    def signs(self) -> np.ndarray:
        return np.array([1.0] * self.d_plus + [-1.0] * self.d_minus)

    @property
    def eta(self) -> np.ndarray:
        return np.diag(self.signs)

    @classmethod
    def default_1d(cls) -> "Metric":
        """The one-dimensional metric with eta_11 = -1 used for [p, x] = -i."""
        return cls(0, 1)


def omega_form(metric: Metric) -> np.ndarray:
    """Return ``Omega_eta = [[0, eta], [-eta, 0]]``."""
    eta = metric.eta
    z = np.zeros_like(eta)
    return np.block([[z, eta], [-eta, z]])


@dataclass(frozen=True, eq=False)
class LctMatrix:
    """A 2D x 2D block matrix ``[[a, c], [b, d]]`` attached to a metric.

    Construction only checks shapes; use :func:`is_symplectic` to test the
    group condition.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    metric: Metric

    def __post_init__(self):
        n = self.metric.dim
        for name in "abcd":
            blk = np.array(getattr(self, name), dtype=float)
            if blk.ndim == 0:
                blk = blk.reshape(1, 1)
            if blk.shape != (n, n):
                raise DimensionError(
                    f"block {name} has shape {blk.shape}, metric needs ({n}, {n})"
                )
            if not np.all(np.isfinite(blk)):
                raise DimensionError(f"block {name} has non-finite entries")
            blk.setflags(write=False)
            object.__setattr__(self, name, blk)

    @property
    def dim(self) -> int:
        return self.metric.dim

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.a, self.c], [self.b, self.d]])

    @classmethod
    def from_matrix(cls, m, metric: Metric) -> "LctMatrix":
        m = np.asarray(m, dtype=float)
        n = metric.dim
        if m.shape != (2 * n, 2 * n):
            raise DimensionError(f"matrix shape {m.shape} does not match metric dim {n}")
        return cls(a=m[:n, :n], c=m[:n, n:], b=m[n:, :n], d=m[n:, n:], metric=metric)

    def __eq__(self, other):
        if not isinstance(other, LctMatrix):
            return NotImplemented
        return self.metric == other.metric and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.metric, self.matrix.tobytes()))


@dataclass(frozen=True, eq=False)
class MeanVector:
    """Lower-index mean values ``<p_mu>`` and ``<x_mu>``."""

    p_means: np.ndarray
    x_means: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.array(self.p_means, dtype=float))
        x = np.atleast_1d(np.array(self.x_means, dtype=float))
        if p.ndim != 1 or p.shape != x.shape:
            raise DimensionError(f"mean vectors have shapes {p.shape} and {x.shape}")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(x))):
            raise DimensionError("mean vectors must be finite")
        p.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "p_means", p)
        object.__setattr__(self, "x_means", x)

    @property
    def dim(self) -> int:
        return self.p_means.shape[0]

    @property
    def row(self) -> np.ndarray:
        return np.concatenate([self.p_means, self.x_means])

    @classmethod
    def zeros(cls, dim: int) -> "MeanVector":
        return cls(np.zeros(dim), np.zeros(dim))


@dataclass(frozen=True, eq=False)
class CovarianceBlocks:
    """Variance-covariance blocks ``P``, ``X`` and symmetrized cross term ``rho``.

    ``rho[mu, nu]`` is the symmetrized covariance of ``p_mu`` with ``x_nu``;
    it is not symmetric in general.  The non-symmetrized orderings are
    available through :meth:`rho_px` and :meth:`rho_xp`.
    """

    P: np.ndarray
    X: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        blocks = {}
        for name in ("P", "X", "rho"):
            m = np.array(getattr(self, name), dtype=float)
            if m.ndim == 0:
                m = m.reshape(1, 1)
            blocks[name] = m
        n = blocks["X"].shape[0]
        for name, m in blocks.items():
            if m.shape != (n, n):
                raise DimensionError(f"block {name} has shape {m.shape}, expected ({n}, {n})")
            if not np.all(np.isfinite(m)):
                raise DimensionError(f"block {name} has non-finite entries")
        for name in ("P", "X"):
            m = blocks[name]
            if not np.allclose(m, m.T, rtol=0, atol=1e-12 * max(1.0, np.abs(m).max())):
                raise DimensionError(f"block {name} must be symmetric")
        for name, m in blocks.items():
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @property
    def dim(self) -> int:
        return self.X.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.P, self.rho], [self.rho.T, self.X]])

    @classmethod
    def from_matrix(cls, m) -> "CovarianceBlocks":
        m = np.asarray(m, dtype=float)
        n = m.shape[0] // 2
        if m.shape != (2 * n, 2 * n):
            raise DimensionError(f"covariance matrix shape {m.shape} is not 2D x 2D")
        P = 0.5 * (m[:n, :n] + m[:n, :n].T)
        X = 0.5 * (m[n:, n:] + m[n:, n:].T)
        return cls(P=P, X=X, rho=m[:n, n:])

    def rho_px(self, metric: Metric) -> np.ndarray:
        """``<(p_mu - <p_mu>)(x_nu - <x_nu>)> = rho + (i/2) eta``."""
        return self.rho + 0.5j * metric.eta

    def rho_xp(self, metric: Metric) -> np.ndarray:
        """``<(x_nu - <x_nu>)(p_mu - <p_mu>)> = rho - (i/2) eta``."""
        return self.rho - 0.5j * metric.eta


def _check_dim(n: int, metric: Metric, what: str):
    if n != metric.dim:
        raise DimensionError(f"{what} has dimension {n}, LCT metric has dimension {metric.dim}")


def symplectic_residual(M: LctMatrix) -> float:
    """Max-abs entry of ``M.T Omega M - Omega``."""
    om = omega_form(M.metric)
    m = M.matrix
    return float(np.max(np.abs(m.T @ om @ m - om)))


def is_symplectic(M: LctMatrix, tol: float = 1e-10) -> bool:
    return symplectic_residual(M) < tol


def compose(M1: LctMatrix, M2: LctMatrix) -> LctMatrix:
    """Matrix product ``M1 @ M2``: apply ``M1`` first under the row-vector convention."""
    if M1.metric != M2.metric:
        raise DimensionError(f"cannot compose LCTs over {M1.metric} and {M2.metric}")
    return LctMatrix.from_matrix(M1.matrix @ M2.matrix, M1.metric)


def inverse(M: LctMatrix, tol: float = 1e-9) -> LctMatrix:
    """Inverse through ``M^-1 = Omega^-1 M^T Omega`` (no general inversion)."""
    r = symplectic_residual(M)
    if not r < tol:
        raise NotSymplecticError(f"symplectic residual {r:.3e} exceeds {tol:.1e}")
    om = omega_form(M.metric)
    # Omega^-1 = -Omega
    return LctMatrix.from_matrix(-om @ M.matrix.T @ om, M.metric)


def identity_lct(metric: Metric) -> LctMatrix:
    return LctMatrix.from_matrix(np.eye(2 * metric.dim), metric)


def random_lct(metric: Metric, seed: int, scale: float = 0.5) -> LctMatrix:
    """Sample ``expm(Omega S)`` with ``S`` symmetric, entries ``scale * U[-1, 1]``.

    ``Omega S`` lies in the Lie algebra of the group for every symmetric
    ``S``, so the result is symplectic up to exponential roundoff.
    """
    rng = np.random.default_rng(seed)
    n2 = 2 * metric.dim
    s = rng.uniform(-1.0, 1.0, size=(n2, n2))
    s = scale * np.triu(s) + scale * np.triu(s, 1).T
    return LctMatrix.from_matrix(expm(omega_form(metric) @ s), metric)


def special_rotation_lct(theta: float, m_omega: float) -> LctMatrix:
    """The 1D harmonic-oscillator evolution by phase ``theta``.

    ``p' = cos(theta) p + m_omega sin(theta) x``,
    ``x' = -sin(theta)/m_omega p + cos(theta) x``.
    """
    if not m_omega > 0:
        raise ValueError(f"m_omega must be positive, got {m_omega!r}")
    ct, st = np.cos(theta), np.sin(theta)
    return LctMatrix(
        a=[[ct]], b=[[m_omega * st]], c=[[-st / m_omega]], d=[[ct]], metric=Metric.default_1d()
    )


def transform_means(v: MeanVector, M: LctMatrix) -> MeanVector:
    _check_dim(v.dim, M.metric, "mean vector")
    row = v.row @ M.matrix
    n = v.dim
    return MeanVector(row[:n], row[n:])


def transform_covariance(C: CovarianceBlocks, M: LctMatrix) -> CovarianceBlocks:
    """``M.T @ C @ M``; only the diagonal blocks are re-symmetrized."""
    _check_dim(C.dim, M.metric, "covariance")
    m = M.matrix
    out = m.T @ C.matrix @ m
    n = C.dim
    P = out[:n, :n]
    X = out[n:, n:]
    return CovarianceBlocks(P=0.5 * (P + P.T), X=0.5 * (X + X.T), rho=out[:n, n:])


def covariance_invariant(C: CovarianceBlocks) -> float:
    """Determinant of the assembled covariance matrix (``P X - rho^2`` in 1D)."""
    if C.dim == 1:
        return float(C.P[0, 0] * C.X[0, 0] - C.rho[0, 0] ** 2)
    return float(np.linalg.det(C.matrix))


def unitary_factor(M: LctMatrix, factors, factors_out) -> np.ndarray:
    """Complex D x D matrix ``Pi - i Theta`` acting on the lowering operators.

    ``factors`` and ``factors_out`` are the covariance factorizations (see
    :func:`lctinv.gaussian_state.factorize_covariance`) of the state before and
    after the transformation.  The reduced operators then transform by
    ``G = 2 L M R'`` with ``L = [[b, 0], [2 a c b, a]]`` and
    ``R' = [[a', 0], [-c', b']]``; ``G`` has the block form
    ``[[Pi, -Theta], [Theta, Pi]]``.

    For definite metrics ``G`` is real and the result satisfies
    ``Omega^H eta Omega = eta``.  With mixed signature the factor ``a`` mixes
    real and imaginary entries, ``G`` is complex, and only the bilinear
    identity ``Omega^T eta (Pi + i Theta) = eta`` survives.
    """
    n = M.dim
    for f in (factors, factors_out):
        if f.a.shape != (n, n):
            raise DimensionError(f"factor shape {f.a.shape} does not match LCT dimension {n}")
        if np.linalg.cond(f.a) > 1e12 or np.linalg.cond(f.b_factor) > 1e12:
            raise NotSymplecticError("factor matrices are singular")
    G = 2.0 * factors.lower_block() @ M.matrix @ factors_out.reduction_block()
    Pi = G[:n, :n]
    Theta = G[n:, :n]
    return Pi - 1j * Theta
