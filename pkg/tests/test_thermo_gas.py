import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.optimize import brentq

from lctinv import fock_oscillator as fo
from lctinv import thermo_gas as tg
from lctinv.exceptions import TruncationError

temps = st.floats(0.05, 20.0)
vols = st.floats(0.05, 200.0)
masses = st.floats(0.2, 5.0)
xs = st.floats(1e-3, 10.0)


def volume_for(x, T=1.0, m=1.0):
    """Volume at which the reduced variable equals ``x``."""
    return (tg.thermal_wavelength(T, m) / (2 * x)) ** 3


# ---------------------------------------------------------------- partition functions


def test_partition_single_3d_triple_sum():
    n = np.arange(201)
    w = np.exp(-0.5 * (2 * n + 1))
    direct = np.einsum("i,j,k->", w, w, w)
    assert tg.partition_single_3d(0.5, 1.0, 1.0) == pytest.approx(direct, rel=1e-12)
    assert tg.partition_single_3d(0.5, 1.0, 1.0) == pytest.approx(0.8834023109606, rel=1e-12)


def test_partition_ground_state_dominates():
    x = 40.0
    assert tg.partition_single_3d(x, 1.0, 1.0) == pytest.approx(np.exp(-3 * x), rel=1e-12)


@pytest.mark.parametrize("x", [0.3, 0.5, 1.5])
def test_partition_1d_matches_fock_trace(x):
    space = fo.FockSpace(1, 100)
    H = fo.covariant_hamiltonian(space, 0.0, 1.0, 1.0).dense()
    assert abs(np.trace(expm(-x * H)).real - tg.partition_single_1d(x, 1.0, 1.0)) < 1e-10
    assert tg.partition_single_1d(x, 1.0, 1.0) == pytest.approx(1 / (2 * np.sinh(x)), rel=1e-14)


@given(xs, masses)
def test_isotropy_factorization(x, m):
    beta, B = x * m / 0.7, 0.7
    assert tg.partition_single_3d(beta, B, m) == pytest.approx(tg.partition_single_1d(beta, B, m) ** 3, rel=1e-12)


@given(st.floats(1e-5, 1e-2))
def test_semiclassical_partition(x):
    assert tg.partition_single_3d(x, 1.0, 1.0) == pytest.approx((1 / (2 * x)) ** 3, rel=1e-4)


def test_partition_N_examples():
    assert tg.log_partition_N(1, 0.5, 1.0, 1.0) == pytest.approx(tg.log_partition_single_3d(0.5, 1.0, 1.0), abs=1e-15)
    x2 = brentq(lambda x: tg.log_partition_single_3d(x, 1.0, 1.0) - np.log(2.0), 0.05, 2.0, xtol=1e-15)
    assert tg.log_partition_N(2, x2, 1.0, 1.0) == pytest.approx(np.log(2.0), abs=1e-12)
    expected = 100 * tg.log_partition_single_3d(0.5, 1.0, 1.0) - math.lgamma(101)
    assert tg.log_partition_N(100, 0.5, 1.0, 1.0) == pytest.approx(expected, rel=1e-14)
    assert tg.partition_N(1, 0.5, 1.0, 1.0) == pytest.approx(tg.partition_single_3d(0.5, 1.0, 1.0))
    with pytest.raises(ValueError):
        tg.log_partition_N(0, 0.5, 1.0, 1.0)


def test_log_partition_no_overflow():
    assert np.isfinite(tg.log_partition_N(10**6, 1e-6, 1.0, 1.0))
    assert np.isfinite(tg.log_partition_single_3d(1e3, 1.0, 1.0))


# ---------------------------------------------------------------- variance bridge


def test_natural_units_variance():
    # lambda = sqrt(2 pi) at kT = m = V = 1 with h = 2 pi
    assert tg.thermal_wavelength(1.0, 1.0) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-15)
    assert tg.variance_from_thermo(1.0, 1.0, 1.0) == pytest.approx(np.sqrt(2 * np.pi) / 2, rel=1e-15)
    assert tg.variance_from_thermo_hbar(1.0, 1.0, 1.0) == pytest.approx(np.sqrt(2 * np.pi) / 2, rel=1e-15)


@given(temps, vols, masses, st.floats(0.5, 10.0))
def test_variance_forms_agree(T, V, m, h):
    B = tg.variance_from_thermo(T, V, m, h)
    assert tg.variance_from_thermo_hbar(T, V, m, h) == pytest.approx(B, rel=1e-12)
    # x = beta B / m
    assert tg.reduced_x(T, V, m, h) == pytest.approx(B / (m * T), rel=1e-12)
    p = tg.ThermoParams(T, V, m, 1, h)
    assert (p.B, p.x, p.wavelength) == (B, tg.reduced_x(T, V, m, h), tg.thermal_wavelength(T, m, h))


def test_variance_scalings():
    assert tg.variance_from_thermo(1.0, 1e12, 1.0) < 1e-3
    assert tg.variance_from_thermo(2.0, 3.0, 1.5) == pytest.approx(np.sqrt(2) * tg.variance_from_thermo(1.0, 3.0, 1.5), rel=1e-14)


def test_effective_frequency():
    # omega = 2 B / (m hbar) is sqrt(2 pi kT / m) / V^(1/3)
    assert tg.effective_frequency(1.0, 1.0, 1.0) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-15)
    assert tg.effective_frequency(1.0, 8.0, 1.0) == pytest.approx(0.5 * tg.effective_frequency(1.0, 1.0, 1.0), rel=1e-14)


@given(temps, vols, masses, st.floats(0.5, 10.0))
def test_frequency_round_trip(T, V, m, h):
    w = tg.effective_frequency(T, V, m, h)
    assert tg.variance_from_frequency(w, m, h) == pytest.approx(tg.variance_from_thermo(T, V, m, h), rel=1e-12)
    assert w == pytest.approx(np.sqrt(2 * np.pi * T / m) / np.cbrt(V), rel=1e-12)


def test_domain_errors():
    with pytest.raises(ValueError):
        tg.ThermoParams(-1.0, 1.0)
    with pytest.raises(ValueError):
        tg.ThermoParams(1.0, 1.0, N=1.5)
    with pytest.raises(ValueError):
        tg.variance_from_thermo(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        tg.partition_single_3d(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        tg.reduced_x(1.0, np.inf, 1.0)


# ---------------------------------------------------------------- equation of state


def test_pressure_examples():
    for x, factor in ((1e-3, 1 + 1e-6 / 3), (1.0, 1.3130352854993312)):
        V = volume_for(x)
        assert tg.pressure(1, 1.0, V, 1.0) * V == pytest.approx(factor, abs=1e-9)
    V = volume_for(1e-6)
    assert tg.pressure(5, 1.0, V, 1.0) * V / 5 == pytest.approx(1.0, abs=1e-11)


@given(st.floats(1e-8, 50.0))
def test_x_coth_x_at_least_one(x):
    v = tg.x_coth_x(x)
    assert v >= 1.0
    assert v == pytest.approx(x / np.tanh(x), rel=1e-13)


def test_x_coth_x_series_branch():
    for x in (1e-5, 9.9e-5, 1.01e-4):
        assert tg.x_coth_x(x) == pytest.approx(1 + x * x / 3, rel=1e-15)


def _F_oracle(N, T, V, m):
    x = 2 * np.pi * np.sqrt(1 / (2 * np.pi * m * T)) / (2 * V ** (1 / 3))
    return -T * (N * (-3 * x - 3 * np.log1p(-np.exp(-2 * x))) - math.lgamma(N + 1))


@given(st.integers(1, 50), temps, vols, masses)
def test_free_energy_and_pressure(N, T, V, m):
    assert tg.free_energy(N, T, V, m) == pytest.approx(_F_oracle(N, T, V, m), rel=1e-11, abs=1e-11 * N * T)
    dv = 1e-4 * V
    fd = -(_F_oracle(N, T, V + dv, m) - _F_oracle(N, T, V - dv, m)) / (2 * dv)
    assert fd == pytest.approx(tg.pressure(N, T, V, m), rel=1e-6)


@given(st.integers(1, 20), temps, vols, masses)
def test_energy_is_beta_derivative(N, T, V, m):
    def logZ(beta):
        return -_F_oracle(N, 1 / beta, V, m) * beta

    b = 1 / T
    db = 1e-5 * b
    U = -(logZ(b + db) - logZ(b - db)) / (2 * db)
    assert U == pytest.approx(tg.gas_energy(N, T, V, m), rel=1e-6)
    S = tg.gas_entropy(N, T, V, m)
    assert S == pytest.approx(b * U + logZ(b), rel=1e-6, abs=1e-6 * N)


# ---------------------------------------------------------------- thermal state


def test_density_matrix_properties():
    rho, S = tg.canonical_density_and_entropy(0.5, 1.0, 1.0)
    assert rho.is_sparse
    q = rho.matrix.diagonal()
    assert abs(q.sum() - 1) < 1e-12
    assert rho.matrix.nnz == rho.space.dim
    x = 0.5
    U = tg.oscillator_energy(0.5, 1.0, 1.0)
    assert U == pytest.approx(3 / np.tanh(x), rel=1e-15)
    assert abs(S - (x * U + tg.log_partition_single_3d(0.5, 1.0, 1.0))) < 1e-9


def test_density_matrix_ground_state_limit():
    rho, S = tg.canonical_density_and_entropy(25.0, 1.0, 1.0)
    assert S < 1e-18
    assert rho.matrix.diagonal()[0].real == pytest.approx(1.0, abs=1e-15)


def test_density_matrix_truncation_error():
    with pytest.raises(TruncationError):
        tg.canonical_density_and_entropy(0.5, 1.0, 1.0, n_max=10)


@given(st.floats(0.2, 5.0), st.floats(0.3, 3.0), masses)
def test_entropy_identity(x, B, m):
    beta = x * m / B
    _, S = tg.canonical_density_and_entropy(beta, B, m)
    ident = beta * tg.oscillator_energy(beta, B, m) + tg.log_partition_single_3d(beta, B, m)
    assert abs(S - ident) < 1e-9


@given(st.floats(0.05, 10.0))
def test_adaptive_nmax_tail(x):
    n = tg.adaptive_nmax(x)
    assert np.exp(-2 * x * n) < 1e-14
    assert n == 1 or np.exp(-2 * x * (n - 1)) >= 1e-14


# ---------------------------------------------------------------- coherent-frame trace


@pytest.mark.parametrize("x,closed", [(0.5, 0.9595173756674719), (2.0, 0.13786028238589162)])
def test_coherent_trace_values(x, closed):
    assert tg.coherent_trace_partition(x, 1.0, 1.0) == pytest.approx(closed, rel=1e-4)


def test_coherent_trace_converges_from_below():
    x = 0.5
    closed = 1 / (2 * np.sinh(x))
    vals = [
        tg.coherent_trace_partition(x, 1.0, 1.0, fo.QuadratureSpec(n_nodes=int(40 * ns) + 1, n_sigma=ns))
        for ns in (5.0, 6.0, 7.0)
    ]
    assert vals[0] < vals[1] < vals[2] <= closed * (1 + 1e-14)
    assert closed - vals[2] < closed - vals[0]


def test_coherent_trace_window_too_small():
    with pytest.raises(TruncationError):
        tg.coherent_trace_partition(0.5, 1.0, 1.0, fo.QuadratureSpec(n_sigma=3.0))
