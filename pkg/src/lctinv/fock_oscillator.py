"""
Truncated Fock-space ladder operators and the bosonic invariant operators.

A D-mode space keeps occupations ``0 <= n_mu <= n_max`` in every mode, with
basis states ordered lexicographically by ``(n_0, ..., n_{D-1})`` (mode 0 is
the slowest index).  Truncation breaks the canonical commutators only on the
top layer, so identities are asserted on the interior subspace.

The module also carries a position-grid realization of the 1D invariant
operator, normalized Gauss-Hermite eigenfunctions and a phase-space
quadrature of the coherent-state resolution of identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np
import scipy.sparse as sp
from scipy.integrate import trapezoid

from .exceptions import DimensionError, NormalizabilityError, TruncationError
from .lct_group import MeanVector

__all__ = [
    "FockSpace",
    "FockOperator",
    "GridSpec",
    "GridOperator",
    "QuadratureSpec",
    "DEFAULT_NMAX",
    "annihilation",
    "creation",
    "invariant_zplus",
    "bosonic_number",
    "dispersion_operator",
    "covariant_hamiltonian",
    "level_degeneracy",
    "zplus_spectrum",
    "hermite_wavefunction",
    "grid_zplus",
    "coherent_wavefunction",
    "resolution_of_identity_check",
]

DEFAULT_NMAX = {1: 12, 2: 8, 3: 6}


@dataclass(frozen=True)
class FockSpace:
    """Tensor product of ``n_modes`` single-mode spaces truncated at ``n_max``."""

    n_modes: int
    n_max: int

    def __post_init__(self):
        if int(self.n_modes) < 1:
            raise DimensionError(f"n_modes must be >= 1, got {self.n_modes}")
        if int(self.n_max) < 0:
            raise DimensionError(f"n_max must be >= 0, got {self.n_max}")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** self.n_modes

    @cached_property
    def occupations(self) -> np.ndarray:
        """Integer array of shape ``(dim, n_modes)``; row ``k`` labels basis state ``k``."""
        grids = np.indices((self.n_max + 1,) * self.n_modes).reshape(self.n_modes, -1)
        return grids.T.copy()

    @property
    def total(self) -> np.ndarray:
        """``|n| = sum_mu n_mu`` for every basis state."""
        return self.occupations.sum(axis=1)

    def interior_mask(self, margin: int = 1) -> np.ndarray:
        """States with every ``n_mu <= n_max - margin``."""
        return np.all(self.occupations <= self.n_max - margin, axis=1)

    def index(self, occ) -> int:
        occ = np.asarray(occ, dtype=int)
        if occ.shape != (self.n_modes,) or np.any(occ < 0) or np.any(occ > self.n_max):
            raise DimensionError(f"occupation {occ.tolist()} outside the space")
        k = 0
        for n in occ:
            k = k * (self.n_max + 1) + int(n)
        return k

    def basis_vector(self, occ) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(occ)] = 1.0
        return v


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Operator on a :class:`FockSpace`.

    ``matrix`` is a dense complex array, or a scipy sparse matrix for
    operators such as thermal density matrices whose dense form would not fit.
    """

    space: FockSpace
    matrix: object

    def __post_init__(self):
        m = self.matrix
        if not sp.issparse(m):
            m = np.array(m, dtype=complex)
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
        if m.shape != (self.space.dim, self.space.dim):
            raise DimensionError(f"matrix shape {m.shape} does not match space dim {self.space.dim}")

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else np.asarray(self.matrix)

    def dagger(self) -> "FockOperator":
        return FockOperator(self.space, self.matrix.conj().T)

    def _other(self, other):
        if isinstance(other, FockOperator):
            if other.space != self.space:
                raise DimensionError("operators act on different spaces")
            return other.matrix
        return other

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator(self.space, self.matrix @ self._other(other))
        return self.matrix @ other

    def __add__(self, other):
        return FockOperator(self.space, self.matrix + self._other(other))

    def __sub__(self, other):
        return FockOperator(self.space, self.matrix - self._other(other))

    def __mul__(self, scalar):
        return FockOperator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def commutator(self, other: "FockOperator") -> "FockOperator":
        b = self._other(other)
        return FockOperator(self.space, self.matrix @ b - b @ self.matrix)

    def restrict(self, mask) -> np.ndarray:
        """Dense block of the matrix on the basis states selected by ``mask``."""
        idx = np.flatnonzero(mask)
        return self.dense()[np.ix_(idx, idx)]

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        d = self.dense()
        return bool(np.max(np.abs(d - d.conj().T), initial=0.0) <= tol)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.dense())


def _identity(space: FockSpace) -> np.ndarray:
    return np.eye(space.dim, dtype=complex)


def annihilation(space: FockSpace, mode: int) -> FockOperator:
    """Lowering operator ``z_mu`` with ``<n - e_mu| z_mu |n> = sqrt(n_mu)``."""
    if not 0 <= int(mode) < space.n_modes:
        raise DimensionError(f"mode {mode} out of range for {space.n_modes} modes")
    single = np.diag(np.sqrt(np.arange(1, space.n_max + 1, dtype=float)), k=1)
    eye = np.eye(space.n_max + 1)
    m = np.ones((1, 1))
    for mu in range(space.n_modes):
        m = np.kron(m, single if mu == mode else eye)
    return FockOperator(space, m)


def creation(space: FockSpace, mode: int) -> FockOperator:
    return annihilation(space, mode).dagger()


def invariant_zplus(space: FockSpace) -> FockOperator:
    """``z+ = (1/4) sum_mu (z_mu z_mu^dag + z_mu^dag z_mu)``, i.e. ``|n|/2 + D/4``.

    Built directly from the occupation labels.  Summing truncated ladder
    matrices gives the same result except on the top layer, where the
    truncated ``z z^dag`` loses its ``+1``.
    """
    diag = 0.5 * space.total + 0.25 * space.n_modes
    return FockOperator(space, np.diag(diag.astype(complex)))


def bosonic_number(space: FockSpace) -> FockOperator:
    """``K = sum_mu z_mu^dag z_mu = 2 z+ - D/2``."""
    zp = invariant_zplus(space)
    return zp * 2.0 - _identity(space) * (space.n_modes / 2.0)


def dispersion_operator(space: FockSpace, P11: float) -> FockOperator:
    """Momentum dispersion ``N11 = 4 P11 z+`` with eigenvalues ``(2n + 1) P11``."""
    if space.n_modes != 1:
        raise DimensionError("dispersion_operator is defined for a single mode")
    if not P11 > 0:
        raise ValueError(f"P11 must be positive, got {P11}")
    return invariant_zplus(space) * (4.0 * P11)


def covariant_hamiltonian(space: FockSpace, p_mean, mass: float, P11: float) -> FockOperator:
    """``H = <p>^2 / 2m + 4 P11 z+ / m``.

    For one mode the spectrum is ``<p>^2/2m + (2n+1) P11/m``; for three
    isotropic modes with ``<p> = 0`` it is ``(2|n| + 3) B/m`` (``P11 = B`` when
    ``rho = 0``).  ``p_mean`` may be a scalar or a vector of lower-index means.
    """
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass}")
    if not P11 > 0:
        raise ValueError(f"P11 must be positive, got {P11}")
    p2 = float(np.sum(np.square(np.atleast_1d(np.asarray(p_mean, dtype=float)))))
    return invariant_zplus(space) * (4.0 * P11 / mass) + _identity(space) * (p2 / (2.0 * mass))


def level_degeneracy(k: int, n_modes: int) -> int:
    """Number of occupations with ``|n| = k``: ``(k + D - 1)! / (k! (D - 1)!)``."""
    return comb(k + n_modes - 1, k)


def zplus_spectrum(n_modes: int, n_max: int):
    """Eigenvalues of ``z+`` level by level for the complete levels ``|n| <= n_max``.

    Returns a list of ``(k, eigenvalue, degeneracy)`` tuples.  The eigenvalues
    come from a Hermitian eigensolve of the truncated matrix and are grouped
    by the ``|n|`` label of the corresponding eigenvectors.
    """
    space = FockSpace(n_modes, n_max)
    w, v = np.linalg.eigh(invariant_zplus(space).dense())
    labels = space.total[np.argmax(np.abs(v), axis=0)]
    rows = []
    for k in range(n_max + 1):
        sel = w[labels == k]
        rows.append((k, float(np.mean(sel)), int(sel.size)))
    return rows


def hermite_wavefunction(n: int, B: float, p_mean: float, x_mean: float, x):
    """Normalized Gauss-Hermite eigenfunction ``psi_n`` of the 1D oscillator.

    ``(2B/pi)^(1/4) H_n(u) / sqrt(2^n n!) exp(-u^2/2 + i <p> x)`` with
    ``u = sqrt(2B) (x - <x>)``.  The normalized recurrence carries the
    Gaussian factor along, so nothing overflows for large ``n``.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    if not B > 0:
        raise NormalizabilityError(f"B must be positive, got {B}")
    x = np.asarray(x, dtype=float)
    u = np.sqrt(2.0 * B) * (x - x_mean)
    prev = np.zeros_like(u)
    cur = np.pi**-0.25 * np.exp(-0.5 * u * u)
    for k in range(int(n)):
        prev, cur = cur, np.sqrt(2.0 / (k + 1)) * u * cur - np.sqrt(k / (k + 1)) * prev
    return (2.0 * B) ** 0.25 * cur * np.exp(1j * p_mean * x)


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid of ``n_points`` nodes on ``[x_min, x_max)``."""

    x_min: float
    x_max: float
    n_points: int = 1024

    def __post_init__(self):
        if self.n_points < 64:
            raise DimensionError(f"grid needs at least 64 points, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise DimensionError("grid requires x_max > x_min")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def points(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(self.n_points)

    @classmethod
    def centered(cls, center: float, half_width: float, n_points: int = 1024) -> "GridSpec":
        return cls(center - half_width, center + half_width, n_points)

    def momentum_matrix(self) -> np.ndarray:
        """Spectral ``-i d/dx`` as a dense matrix."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)
        if self.n_points % 2 == 0:
            k[self.n_points // 2] = 0.0  # drop the unpaired Nyquist mode
        eye = np.eye(self.n_points)
        return np.fft.ifft(k[:, None] * np.fft.fft(eye, axis=0), axis=0)


@dataclass(frozen=True, eq=False)
class GridOperator:
    grid: GridSpec
    matrix: np.ndarray

    def apply(self, psi) -> np.ndarray:
        return self.matrix @ np.asarray(psi, dtype=complex)


def _boundary_check(grid: GridSpec, center: float, sigma: float, threshold: float = 1e-12):
    # Gaussian envelope exp(-(dx)^2 / (4 sigma^2)) at the farther edge
    reach = min(center - grid.x_min, grid.x_max - center)
    if reach <= 0 or np.exp(-(reach**2) / (4.0 * sigma**2)) > threshold:
        raise TruncationError(
            f"grid [{grid.x_min}, {grid.x_max}] too narrow for sigma={sigma:.4g} around {center:.4g}"
        )


def grid_zplus(X: float, rho: float, means: MeanVector, grid: GridSpec) -> GridOperator:
    """Position-grid matrix of the 1D invariant operator.

    ``(1/2) [X dp^2 - rho (dp dx + dx dp) + P dx^2]`` with ``dp = p - <p>``,
    ``dx = x - <x>``, ``p = -i d/dx`` by spectral differentiation and
    ``P = (1/4 + rho^2) / X``.  Grid coordinate and means are the lower-index
    ``x_1`` and ``p_1`` of the ``eta = -1`` metric.
    """
    if not X > 0:
        raise NormalizabilityError(f"X must be positive, got {X}")
    if means.dim != 1:
        raise DimensionError("grid_zplus is one-dimensional")
    p0, x0 = float(means.p_means[0]), float(means.x_means[0])
    _boundary_check(grid, x0, np.sqrt(X))
    P = (0.25 + rho**2) / X
    n = grid.n_points
    dp = grid.momentum_matrix() - p0 * np.eye(n)
    dx = np.diag(grid.points - x0).astype(complex)
    op = 0.5 * (X * dp @ dp - rho * (dp @ dx + dx @ dp) + P * dx @ dx)
    return GridOperator(grid, op)


def coherent_wavefunction(X: float, rho: float, means: MeanVector, s) -> np.ndarray:
    """Minimal Gaussian ``N exp(-B (s - <x>)^2 + i <p> s)`` on lower-index coordinates.

    ``B = 1/(4X) - i rho/(2X)`` and ``N = (2 pi X)^(-1/4)``.
    """
    if not X > 0:
        raise NormalizabilityError(f"X must be positive, got {X}")
    s = np.asarray(s, dtype=float)
    B = 0.25 / X - 0.5j * rho / X
    p0, x0 = float(means.p_means[0]), float(means.x_means[0])
    return (2.0 * np.pi * X) ** -0.25 * np.exp(-B * (s - x0) ** 2 + 1j * p0 * s)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor trapezoid rule on a window of ``n_sigma`` Husimi widths."""

    n_nodes: int = 201
    n_sigma: float = 6.0
    h: float = 2.0 * np.pi


def resolution_of_identity_check(psi, grid: GridSpec, B: float, quad: QuadratureSpec = None) -> float:
    """Phase-space integral ``int |<<z|psi>|^2 d<p> d<x> / h`` over coherent states.

    The coherent states have real ``B``.  The window is centered on the
    Husimi function of ``psi``, whose variances are ``Var x + 1/(4B)`` and
    ``Var p + B``.  Raises :class:`TruncationError` when the integrand on the
    window edge exceeds ``1e-5`` of its peak.
    """
    quad = quad or QuadratureSpec()
    if not B > 0:
        raise NormalizabilityError(f"B must be positive, got {B}")
    psi = np.asarray(psi, dtype=complex)
    s, ds = grid.points, grid.spacing
    if psi.shape != s.shape:
        raise DimensionError(f"psi has shape {psi.shape}, grid has {s.shape}")
    rho_s = np.abs(psi) ** 2
    norm = rho_s.sum() * ds
    xm = (s * rho_s).sum() * ds / norm
    vx = ((s - xm) ** 2 * rho_s).sum() * ds / norm
    ppsi = grid.momentum_matrix() @ psi
    pm = float(np.real(np.vdot(psi, ppsi)) * ds / norm)
    vp = float(np.real(np.vdot(ppsi, ppsi)) * ds / norm) - pm**2

    hx = quad.n_sigma * np.sqrt(vx + 0.25 / B)
    hp = quad.n_sigma * np.sqrt(vp + B)
    x0 = np.linspace(xm - hx, xm + hx, quad.n_nodes)
    p0 = np.linspace(pm - hp, pm + hp, quad.n_nodes)
    # <z|psi> = int (2B/pi)^(1/4) exp(-B (s - x0)^2 - i p0 s) psi(s) ds
    env = (2.0 * B / np.pi) ** 0.25 * np.exp(-B * (s[None, :] - x0[:, None]) ** 2) * psi[None, :]
    phase = np.exp(-1j * p0[:, None] * s[None, :])
    amp = (env @ phase.T) * ds
    dens = np.abs(amp) ** 2
    edge = max(dens[0].max(), dens[-1].max(), dens[:, 0].max(), dens[:, -1].max())
    if edge > 1e-5 * dens.max():
        raise TruncationError(f"phase-space window cuts off {edge / dens.max():.2e} of the peak")
    return float(trapezoid(trapezoid(dens, p0, axis=1), x0) / quad.h)
