from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid
from scipy.linalg import expm

from lctinv import fock_oscillator as fo
from lctinv import lct_group as lg
from lctinv.exceptions import DimensionError, NormalizabilityError, TruncationError

spaces = st.builds(fo.FockSpace, st.integers(1, 3), st.integers(2, 5))


def eig_on(op, space, occ):
    v = space.basis_vector(occ)
    w = op @ v
    lam = np.vdot(v, w)
    assert np.abs(w - lam * v).max() < 1e-12
    return lam.real


# ---------------------------------------------------------------- ladder operators


def test_annihilation_examples():
    space = fo.FockSpace(1, 2)
    z = fo.annihilation(space, 0)
    assert np.allclose(z @ space.basis_vector([1]), space.basis_vector([0]))
    assert np.array_equal(z @ space.basis_vector([0]), np.zeros(3))
    with pytest.raises(DimensionError):
        fo.annihilation(space, 1)


def test_annihilation_mode_ordering():
    space = fo.FockSpace(2, 3)
    z1 = fo.annihilation(space, 1)
    out = z1 @ space.basis_vector([2, 3])
    assert np.allclose(out, np.sqrt(3) * space.basis_vector([2, 2]))
    assert space.index([1, 0]) == 4


@given(spaces)
def test_ccr_on_interior(space):
    mask = space.interior_mask()
    eye = np.eye(mask.sum())
    for mu in range(space.n_modes):
        z = fo.annihilation(space, mu)
        for nu in range(space.n_modes):
            zd = fo.creation(space, nu)
            assert np.abs(z.commutator(zd).restrict(mask) - (mu == nu) * eye).max() < 1e-12
            assert np.abs(z.commutator(fo.annihilation(space, nu)).dense()).max() < 1e-12


def test_ccr_fails_on_top_layer():
    space = fo.FockSpace(1, 4)
    z = fo.annihilation(space, 0)
    c = z.commutator(z.dagger()).dense()
    assert c[-1, -1] == pytest.approx(-4.0)


@given(spaces)
def test_ladder_relations_coefficient_half(space):
    zp = fo.invariant_zplus(space)
    mask = space.interior_mask()
    for mu in range(space.n_modes):
        z = fo.annihilation(space, mu)
        zd = z.dagger()
        assert np.abs(zp.commutator(z).restrict(mask) + 0.5 * z.restrict(mask)).max() < 1e-12
        assert np.abs(zp.commutator(zd).restrict(mask) - 0.5 * zd.restrict(mask)).max() < 1e-12
        # a quarter coefficient is inconsistent with the level spacing
        assert np.abs(zp.commutator(z).restrict(mask) + 0.25 * z.restrict(mask)).max() > 0.1


@given(spaces)
def test_zplus_matches_symmetrized_ladders(space):
    # (1/4) sum (z z^dag + z^dag z), exact away from the top layer
    acc = np.zeros((space.dim, space.dim), dtype=complex)
    for mu in range(space.n_modes):
        z = fo.annihilation(space, mu).dense()
        acc += 0.25 * (z @ z.conj().T + z.conj().T @ z)
    mask = space.interior_mask()
    idx = np.flatnonzero(mask)
    assert np.abs(acc[np.ix_(idx, idx)] - fo.invariant_zplus(space).restrict(mask)).max() < 1e-12


# ---------------------------------------------------------------- invariants and spectra


def test_zplus_examples():
    assert eig_on(fo.invariant_zplus(fo.FockSpace(1, 3)), fo.FockSpace(1, 3), [0]) == 0.25
    s2 = fo.FockSpace(2, 3)
    assert eig_on(fo.invariant_zplus(s2), s2, [1, 0]) == 1.0
    rows = {k: (lam, g) for k, lam, g in fo.zplus_spectrum(3, 6)}
    assert rows[2] == (pytest.approx(1.75), 6)


@given(st.integers(1, 3), st.integers(0, 6))
def test_zplus_spectrum_levels(D, n_max):
    for k, lam, g in fo.zplus_spectrum(D, n_max):
        assert abs(lam - (0.5 * k + 0.25 * D)) < 1e-10
        assert g == comb(k + D - 1, k) == fo.level_degeneracy(k, D)


def test_bosonic_number_examples():
    s1 = fo.FockSpace(1, 3)
    assert eig_on(fo.bosonic_number(s1), s1, [0]) == 0.0
    s2 = fo.FockSpace(2, 3)
    assert eig_on(fo.bosonic_number(s2), s2, [2, 1]) == 3.0


@given(spaces)
def test_number_identity(space):
    K = fo.bosonic_number(space).dense()
    zp = fo.invariant_zplus(space).dense()
    assert np.abs(K - 2 * zp + 0.5 * space.n_modes * np.eye(space.dim)).max() == 0.0
    direct = sum(fo.creation(space, mu).dense() @ fo.annihilation(space, mu).dense() for mu in range(space.n_modes))
    assert np.abs(K - direct).max() < 1e-12


def test_dispersion_examples():
    space = fo.FockSpace(1, 4)
    N = fo.dispersion_operator(space, 0.5)
    assert eig_on(N, space, [0]) == pytest.approx(0.5)
    assert eig_on(N, space, [3]) == pytest.approx(3.5)
    assert np.array_equal(fo.dispersion_operator(space, 1.0).dense(), 2 * N.dense())
    with pytest.raises(ValueError):
        fo.dispersion_operator(space, 0.0)
    with pytest.raises(DimensionError):
        fo.dispersion_operator(fo.FockSpace(2, 2), 0.5)


def test_hamiltonian_examples():
    s1 = fo.FockSpace(1, 4)
    assert eig_on(fo.covariant_hamiltonian(s1, 0.0, 1.0, 0.5), s1, [0]) == pytest.approx(0.5)
    assert eig_on(fo.covariant_hamiltonian(s1, 2.0, 1.0, 0.5), s1, [1]) == pytest.approx(3.5)
    s3 = fo.FockSpace(3, 2)
    assert eig_on(fo.covariant_hamiltonian(s3, [0.0, 0.0, 0.0], 1.0, 0.2), s3, [0, 0, 0]) == pytest.approx(0.6)
    with pytest.raises(ValueError):
        fo.covariant_hamiltonian(s1, 0.0, 0.0, 0.5)


def test_three_mode_levels_reproduce_sinh_cube():
    # levels (2|n| + 3) B/m give Z = 1/(8 sinh^3 x); doubling B/m does not
    x = 0.5
    n = np.arange(200)
    g = (n + 1) * (n + 2) // 2
    target = 1 / (8 * np.sinh(x) ** 3)
    assert abs(np.sum(g * np.exp(-x * (2 * n + 3))) / target - 1) < 1e-13
    assert abs(np.sum(g * np.exp(-2 * x * (2 * n + 3))) / target - 1) > 0.5


@given(spaces, st.floats(-2, 2), st.floats(0.1, 5), st.floats(0.1, 5))
def test_hamiltonian_commutes_with_invariant(space, p, m, P11):
    H = fo.covariant_hamiltonian(space, p, m, P11)
    assert np.abs(H.commutator(fo.invariant_zplus(space)).dense()).max() == 0.0
    assert H.is_hermitian()


@given(st.floats(-np.pi, np.pi))
def test_bogoliubov_phase(theta):
    space = fo.FockSpace(1, 12)
    K = fo.bosonic_number(space).dense()
    z = fo.annihilation(space, 0).dense()
    U = expm(-1j * theta * K)
    assert np.abs(U @ z @ U.conj().T - np.exp(1j * theta) * z).max() < 1e-10


def test_operator_arithmetic():
    space = fo.FockSpace(2, 2)
    z = fo.annihilation(space, 0)
    assert np.array_equal((z + z).dense(), (2 * z).dense())
    assert np.array_equal((z - z).dense(), np.zeros((9, 9)))
    assert np.array_equal((z @ z.dagger()).dense(), z.dense() @ z.dense().conj().T)
    with pytest.raises(DimensionError):
        z + fo.annihilation(fo.FockSpace(2, 3), 0)
    with pytest.raises(DimensionError):
        fo.FockOperator(space, np.eye(4))
    with pytest.raises(DimensionError):
        space.index([3, 0])


# ---------------------------------------------------------------- wavefunctions


def test_hermite_examples():
    B = 0.8
    assert fo.hermite_wavefunction(0, B, 0.0, 0.0, 0.0) == pytest.approx((2 * B / np.pi) ** 0.25)
    assert fo.hermite_wavefunction(1, B, 0.3, 0.7, 0.7) == 0
    with pytest.raises(NormalizabilityError):
        fo.hermite_wavefunction(0, 0.0, 0, 0, 0.0)
    with pytest.raises(ValueError):
        fo.hermite_wavefunction(-1, 1.0, 0, 0, 0.0)


@pytest.mark.parametrize("B,p,x0", [(0.8, 0.0, 0.0), (0.3, 1.2, -0.4)])
def test_hermite_orthonormal(B, p, x0):
    x = np.linspace(x0 - 30 / np.sqrt(B), x0 + 30 / np.sqrt(B), 20001)
    psi = np.array([fo.hermite_wavefunction(n, B, p, x0, x) for n in range(7)])
    gram = trapezoid(psi.conj()[:, None, :] * psi[None, :, :], x, axis=-1)
    assert np.abs(gram - np.eye(7)).max() < 1e-8


def test_hermite_large_n_finite_and_normalized():
    B = 1.0
    x = np.linspace(-20, 20, 40001)
    psi = fo.hermite_wavefunction(64, B, 0.0, 0.0, x)
    assert np.all(np.isfinite(psi))
    assert trapezoid(np.abs(psi) ** 2, x) == pytest.approx(1.0, abs=1e-8)


@given(st.integers(0, 10), st.floats(0.2, 3.0), st.floats(-1, 1))
def test_hermite_is_oscillator_eigenfunction(n, B, x0):
    # unit-mass oscillator with frequency 2B: -(1/2) psi'' + 2 B^2 (x - x0)^2 psi = B (2n + 1) psi
    L = 40 / np.sqrt(B)
    grid = fo.GridSpec.centered(x0, L, 2048)
    psi = fo.hermite_wavefunction(n, B, 0.0, x0, grid.points)
    k = 2 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.spacing)
    lap = np.fft.ifft(-(k**2) * np.fft.fft(psi))
    Hpsi = -0.5 * lap + 2 * B**2 * (grid.points - x0) ** 2 * psi
    assert np.abs(Hpsi - B * (2 * n + 1) * psi).max() < 1e-8


# ---------------------------------------------------------------- grid operator


def _ground(X, rho, means, grid):
    return fo.coherent_wavefunction(X, rho, means, grid.points)


def test_grid_ground_rho_zero():
    X = 0.5
    means = lg.MeanVector([0.0], [0.0])
    grid = fo.GridSpec.centered(0.0, 20 * np.sqrt(X), 1024)
    psi = _ground(X, 0.0, means, grid)
    assert np.abs(fo.grid_zplus(X, 0.0, means, grid).apply(psi) - 0.25 * psi).max() < 1e-10


@pytest.mark.parametrize("p0,x0", [(0.0, 0.0), (0.7, -1.1)])
def test_grid_ground_and_excited(p0, x0):
    X, rho = 0.7, 0.3
    means = lg.MeanVector([p0], [x0])
    grid = fo.GridSpec.centered(x0, 20 * np.sqrt(X), 1024)
    op = fo.grid_zplus(X, rho, means, grid)
    psi0 = _ground(X, rho, means, grid)
    assert np.abs(op.apply(psi0) - 0.25 * psi0).max() < 1e-6
    psi1 = (grid.points - x0) * psi0 / np.sqrt(X)
    assert trapezoid(np.abs(psi1) ** 2, grid.points) == pytest.approx(1.0, abs=1e-12)
    assert np.abs(op.apply(psi1) - 0.75 * psi1).max() < 1e-5


def test_grid_too_narrow():
    X = 0.7
    means = lg.MeanVector([0.0], [0.0])
    with pytest.raises(TruncationError):
        fo.grid_zplus(X, 0.3, means, fo.GridSpec.centered(0.0, 10 * np.sqrt(X), 1024))
    with pytest.raises(NormalizabilityError):
        fo.grid_zplus(-1.0, 0.3, means, fo.GridSpec.centered(0.0, 20.0, 1024))


def test_grid_spec_validation():
    with pytest.raises(DimensionError):
        fo.GridSpec(0.0, 1.0, 16)
    with pytest.raises(DimensionError):
        fo.GridSpec(1.0, 0.0)


def test_momentum_matrix_hermitian_and_exact_on_modes():
    grid = fo.GridSpec(0.0, 2 * np.pi, 64)
    Pm = grid.momentum_matrix()
    assert np.abs(Pm - Pm.conj().T).max() < 1e-12
    f = np.exp(3j * grid.points)
    assert np.abs(Pm @ f - 3 * f).max() < 1e-12


# ---------------------------------------------------------------- resolution of identity


@pytest.fixture(scope="module")
def roi_setup():
    B = 0.8
    grid = fo.GridSpec.centered(0.0, 20 / np.sqrt(B), 1024)
    p0 = fo.hermite_wavefunction(0, B, 0.0, 0.0, grid.points)
    p1 = fo.hermite_wavefunction(1, B, 0.0, 0.0, grid.points)
    return B, grid, p0, p1


def test_resolution_of_identity(roi_setup):
    B, grid, p0, p1 = roi_setup
    for psi in (p0, p1, (p0 + p1) / np.sqrt(2)):
        assert abs(fo.resolution_of_identity_check(psi, grid, B) - 1) < 1e-4


def test_resolution_of_identity_displaced_state(roi_setup):
    B, grid, _, _ = roi_setup
    psi = fo.hermite_wavefunction(0, B, 0.9, -1.3, grid.points)
    assert abs(fo.resolution_of_identity_check(psi, grid, B) - 1) < 1e-4


def test_resolution_of_identity_converges_with_nodes(roi_setup):
    B, grid, p0, p1 = roi_setup
    psi = (p0 + p1) / np.sqrt(2)
    coarse = fo.resolution_of_identity_check(psi, grid, B, fo.QuadratureSpec(n_nodes=101))
    fine = fo.resolution_of_identity_check(psi, grid, B, fo.QuadratureSpec(n_nodes=401))
    assert abs(fine - 1) <= abs(coarse - 1) + 1e-12
    assert abs(fine - 1) < 1e-4


def test_resolution_of_identity_window_too_small(roi_setup):
    B, grid, p0, _ = roi_setup
    with pytest.raises(TruncationError):
        fo.resolution_of_identity_check(p0, grid, B, fo.QuadratureSpec(n_sigma=3.0))
    with pytest.raises(DimensionError):
        fo.resolution_of_identity_check(p0[:-1], grid, B)
