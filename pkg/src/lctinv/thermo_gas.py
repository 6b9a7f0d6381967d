"""
Thermodynamics of a gas whose particles carry the minimal momentum dispersion.

Each particle is described by the LCT-covariant Hamiltonian with spectrum
``(2|n| + 3) B/m``.  Everything reduces to the dimensionless variable

    x = beta B / m = lambda_th / (2 V^(1/3)),   lambda_th = h sqrt(beta / (2 pi m)),

with ``k = 1`` (temperatures are energies) and ``hbar = h / (2 pi)``.  The
default ``h = 2 pi`` gives ``hbar = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np
import scipy.sparse as sp
from scipy.integrate import trapezoid
from scipy.linalg import expm
from scipy.special import gammaln

from .exceptions import TruncationError
from .fock_oscillator import FockOperator, FockSpace, QuadratureSpec, covariant_hamiltonian

__all__ = [
    "ThermoParams",
    "TWO_PI",
    "thermal_wavelength",
    "reduced_x",
    "variance_from_thermo",
    "variance_from_thermo_hbar",
    "effective_frequency",
    "variance_from_frequency",
    "log_partition_single_3d",
    "partition_single_3d",
    "partition_single_1d",
    "log_partition_N",
    "partition_N",
    "x_coth_x",
    "pressure",
    "free_energy",
    "gas_energy",
    "gas_entropy",
    "oscillator_energy",
    "adaptive_nmax",
    "canonical_density_and_entropy",
    "coherent_trace_partition",
]

TWO_PI = 2.0 * np.pi


def _positive(**kw):
    for name, v in kw.items():
        if not (np.all(np.isfinite(v)) and np.all(np.asarray(v) > 0)):
            raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class ThermoParams:
    """Temperature ``T`` (as ``kT``), volume, mass, particle count and Planck constant."""

    T: float
    V: float
    m: float = 1.0
    N: int = 1
    h: float = TWO_PI

    def __post_init__(self):
        _positive(T=self.T, V=self.V, m=self.m, h=self.h)
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")

    @property
    def beta(self) -> float:
        return 1.0 / self.T

    @property
    def hbar(self) -> float:
        return self.h / TWO_PI

    @property
    def wavelength(self) -> float:
        return thermal_wavelength(self.T, self.m, self.h)

    @property
    def x(self) -> float:
        return reduced_x(self.T, self.V, self.m, self.h)

    @property
    def B(self) -> float:
        return variance_from_thermo(self.T, self.V, self.m, self.h)


def thermal_wavelength(T, m, h=TWO_PI):
    """``lambda_th = h sqrt(beta / (2 pi m))``."""
    _positive(T=T, m=m, h=h)
    return h * np.sqrt(1.0 / (TWO_PI * m * T))


def reduced_x(T, V, m, h=TWO_PI):
    """``x = lambda_th / (2 V^(1/3))``, which equals ``beta B / m``."""
    _positive(V=V)
    return thermal_wavelength(T, m, h) / (2.0 * np.cbrt(V))


def variance_from_thermo(T, V, m, h=TWO_PI):
    """Momentum variance ``B = m lambda_th / (2 beta V^(1/3))`` of a gas particle."""
    _positive(T=T, V=V, m=m, h=h)
    return m * thermal_wavelength(T, m, h) * T / (2.0 * np.cbrt(V))


def variance_from_thermo_hbar(T, V, m, h=TWO_PI):
    """Same quantity written with ``hbar``: ``B = hbar sqrt(2 pi m kT) / (2 V^(1/3))``."""
    _positive(T=T, V=V, m=m, h=h)
    hbar = h / TWO_PI
    return hbar * np.sqrt(TWO_PI * m * T) / (2.0 * np.cbrt(V))


def effective_frequency(T, V, m, h=TWO_PI):
    """Angular frequency of the equivalent oscillator, ``omega = 2B / (m hbar)``.

    In closed form ``omega = sqrt(2 pi kT / m) / V^(1/3)``, independent of ``h``.
    """
    B = variance_from_thermo(T, V, m, h)
    return 2.0 * B * TWO_PI / (m * h)


def variance_from_frequency(omega, m, h=TWO_PI):
    """Oscillator ground-state variance ``B = m hbar omega / 2``."""
    _positive(omega=omega, m=m, h=h)
    return m * (h / TWO_PI) * omega / 2.0


def _log_one_minus_exp(y):
    """``log(1 - exp(-y))`` for ``y > 0`` without cancellation."""
    y = np.asarray(y, dtype=float)
    return np.where(y < np.log(2.0), np.log(-np.expm1(-y)), np.log1p(-np.exp(-y)))


def _x_from(beta, B, m):
    _positive(beta=beta, B=B, m=m)
    return beta * B / m


def log_partition_single_3d(beta, B, m):
    """``log Z = -log 8 - 3 log sinh x``, evaluated as ``-3x - 3 log(1 - e^(-2x))``."""
    x = _x_from(beta, B, m)
    return -3.0 * x - 3.0 * _log_one_minus_exp(2.0 * x)


def partition_single_3d(beta, B, m):
    """``Z = 1 / (8 sinh^3(beta B / m))``."""
    return np.exp(log_partition_single_3d(beta, B, m))


def partition_single_1d(beta, B, m):
    """``Z_1D = 1 / (2 sinh(beta B / m))``."""
    x = _x_from(beta, B, m)
    return np.exp(-x - _log_one_minus_exp(2.0 * x))


def log_partition_N(N, beta, B, m):
    """``log Z_N = N log Z - log N!`` for indistinguishable particles."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    return N * log_partition_single_3d(beta, B, m) - gammaln(N + 1.0)


def partition_N(N, beta, B, m):
    return np.exp(log_partition_N(N, beta, B, m))


def x_coth_x(x):
    """``x coth x``, with its series ``1 + x^2/3 - x^4/45`` for small ``x``."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    return np.where(small, 1.0 + x * x / 3.0 - x**4 / 45.0, xs / np.tanh(xs))


def _gas_log_z(p: ThermoParams):
    return log_partition_N(p.N, p.beta, p.B, p.m)


def free_energy(N, T, V, m, h=TWO_PI):
    """``F = -kT log Z_N`` with ``x = lambda_th / (2 V^(1/3))``."""
    return -T * _gas_log_z(ThermoParams(T, V, m, N, h))


def pressure(N, T, V, m, h=TWO_PI):
    """Equation of state ``P = (N kT / V) x coth x``."""
    p = ThermoParams(T, V, m, N, h)
    return N * T / V * x_coth_x(p.x)


def gas_energy(N, T, V, m, h=TWO_PI):
    """``U = -d log Z_N / d beta`` at fixed ``V`` (``x`` scales as sqrt(beta)): ``(3/2) N kT x coth x``."""
    p = ThermoParams(T, V, m, N, h)
    return 1.5 * N * T * x_coth_x(p.x)


def gas_entropy(N, T, V, m, h=TWO_PI):
    """``S/k = beta U + log Z_N``."""
    p = ThermoParams(T, V, m, N, h)
    return gas_energy(N, T, V, m, h) / T + _gas_log_z(p)


def oscillator_energy(beta, B, m):
    """Mean energy ``3 (B/m) coth(beta B / m)`` at fixed ``B``."""
    x = _x_from(beta, B, m)
    return 3.0 * B / m / np.tanh(x)


def adaptive_nmax(x: float, tol: float = 1e-14) -> int:
    """Smallest ``n_max`` with ``exp(-2 x n_max) < tol``."""
    _positive(x=x)
    return max(1, int(np.floor(-np.log(tol) / (2.0 * x))) + 1)


def canonical_density_and_entropy(beta, B, m, n_max: int = None):
    """Thermal state ``exp(-beta H) / Z`` of one 3D particle and its entropy ``S/k``.

    The occupation basis diagonalizes ``H``, so the density matrix is returned
    as a sparse diagonal :class:`FockOperator`.  ``n_max`` defaults to
    :func:`adaptive_nmax`.  Raises :class:`TruncationError` when the
    discarded Boltzmann weight exceeds ``1e-12``.
    """
    x = _x_from(beta, B, m)
    if n_max is None:
        n_max = adaptive_nmax(x)
    # single-mode weight carried by n > n_max, summed over the three modes
    tail = 3.0 * np.exp(-2.0 * x * (n_max + 1))
    if tail > 1e-12:
        raise TruncationError(f"n_max={n_max} leaves Boltzmann tail {tail:.2e} > 1e-12")
    space = FockSpace(3, n_max)
    n = np.arange(n_max + 1)
    # per-mode probabilities, exact geometric normalization
    q1 = np.exp(-2.0 * x * n + _log_one_minus_exp(2.0 * x))
    q = np.einsum("i,j,k->ijk", q1, q1, q1).ravel()
    q = q / q.sum()
    rho = FockOperator(space, sp.diags(q.astype(complex), format="csr"))
    nz = q[q > 0]
    S = float(-np.sum(nz * np.log(nz)))
    return rho, S


def coherent_trace_partition(beta, B, m, quad: QuadratureSpec = None) -> float:
    """``Tr exp(-beta H)`` for one mode through the coherent-state frame.

    Integrates ``<<z| exp(-beta H) |z>>`` over ``d<p> d<x> / h`` with ``h = 2 pi``.
    ``H = 4 (B/m) z+`` is exponentiated in a truncated Fock space and the
    coherent states, which share the real ``B`` of the reference oscillator,
    are expanded as ``c_n = exp(-|a|^2/2) a^n / sqrt(n!)`` with
    ``a = i (<p> - 2 i B <x>) / (2 sqrt(B))``.
    """
    quad = quad or QuadratureSpec()
    x = _x_from(beta, B, m)
    shrink = -np.expm1(-2.0 * x)  # 1 - exp(-2x)
    # integrand ~ exp(-|a|^2 shrink): Gaussian widths in <p> and <x>
    sp_ = np.sqrt(2.0 * B / shrink)
    sx_ = np.sqrt(1.0 / (2.0 * B * shrink))
    p0 = np.linspace(-quad.n_sigma * sp_, quad.n_sigma * sp_, quad.n_nodes)
    x0 = np.linspace(-quad.n_sigma * sx_, quad.n_sigma * sx_, quad.n_nodes)
    P0, X0 = np.meshgrid(p0, x0, indexing="ij")
    alpha = 1j * (P0 - 2j * B * X0) / (2.0 * np.sqrt(B))
    a2max = float(np.max(np.abs(alpha) ** 2))
    n_max = int(np.ceil(a2max + 12.0 * np.sqrt(a2max) + 30.0))

    space = FockSpace(1, n_max)
    H = covariant_hamiltonian(space, 0.0, m, B).dense()
    E = expm(-beta * H)

    n = np.arange(n_max + 1)
    logfact = np.array([lgamma(k + 1.0) for k in n])
    a = alpha.ravel()
    zero = a == 0
    loga = np.log(np.where(zero, 1.0, a))  # complex log; a = 0 rows fixed below
    logc = -0.5 * np.abs(a)[:, None] ** 2 + n[None, :] * loga[:, None] - 0.5 * logfact[None, :]
    C = np.exp(logc)
    C[zero] = 0.0
    C[zero, 0] = 1.0
    vals = np.real(np.einsum("kn,kn->k", C.conj() @ E, C)).reshape(P0.shape)
    edge = max(vals[0].max(), vals[-1].max(), vals[:, 0].max(), vals[:, -1].max())
    if edge > 1e-5 * vals.max():
        raise TruncationError(f"quadrature window cuts off {edge / vals.max():.2e} of the peak")
    return float(trapezoid(trapezoid(vals, x0, axis=1), p0) / quad.h)
