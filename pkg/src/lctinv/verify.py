"""
Self-contained invariant suites, one per verifiable claim of the library.

Each suite returns a :class:`CheckResult` listing its measured errors with
the tolerance each is held to, plus wall time and the time budget.  ``run_all`` drives
them for ``lctinv verify-all``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import expm

from . import clifford_fermions as cf
from . import fock_oscillator as fo
from . import gaussian_state as gs
from . import lct_group as lg
from . import thermo_gas as tg

__all__ = ["CheckResult", "SUITES", "run_all"]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one suite; ``parts`` holds ``(label, error, tol)`` triples."""

    name: str
    parts: tuple
    seconds: float
    budget: float

    @property
    def passed(self) -> bool:
        return all(err < tol for _, err, tol in self.parts) and self.seconds < self.budget

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        body = "; ".join(f"{lab} {err:.2e} (tol {tol:.0e})" for lab, err, tol in self.parts)
        return f"{verdict} {self.name}: {body}; {self.seconds:.2f}s (budget {self.budget:g}s)"


def _timed(name, budget):
    def deco(fn):
        def run(seed: int = 0) -> CheckResult:
            t0 = time.perf_counter()
            parts = tuple((lab, float(err), float(tol)) for lab, err, tol in fn(seed))
            return CheckResult(name, parts, time.perf_counter() - t0, budget)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return deco


METRICS = (lg.Metric(0, 1), lg.Metric(1, 1), lg.Metric(2, 0), lg.Metric(1, 4))


@_timed("symplectic group laws", 5.0)
def symplectic_suite(seed=0):
    worst = 0.0
    for k in range(1000):
        M = lg.random_lct(METRICS[k % 4], seed * 100_000 + k)
        worst = max(worst, lg.symplectic_residual(M))
    group = 0.0
    for k in range(50):
        m = METRICS[k % 4]
        A, B, C = (lg.random_lct(m, seed * 100_000 + 5000 + 3 * k + j) for j in range(3))
        left = lg.compose(lg.compose(A, B), C).matrix
        right = lg.compose(A, lg.compose(B, C)).matrix
        eye = np.eye(2 * m.dim)
        Ai = lg.inverse(A).matrix
        group = max(group, np.abs(left - right).max(), np.abs(A.matrix @ Ai - eye).max(), np.abs(Ai @ A.matrix - eye).max())
    return [("symplectic residual", worst, 1e-9), ("group laws", group, 1e-10)]


@_timed("covariance determinant invariance", 5.0)
def covariance_suite(seed=0):
    worst = 0.0
    for k in range(1000):
        m = METRICS[k % 4]
        st = gs.random_minimal_state(m, seed * 100_000 + k)
        M = lg.random_lct(m, seed * 100_000 + 50_000 + k)
        d0 = np.linalg.det(st.cov.matrix)
        d1 = np.linalg.det(lg.transform_covariance(st.cov, M).matrix)
        worst = max(worst, abs(d1 / d0 - 1.0))
    return [("relative det drift", worst, 1e-9)]


@_timed("invariant spectrum and degeneracy", 10.0)
def spectrum_suite(seed=0):
    worst = 0.0
    for D, n_max in ((1, 12), (2, 8), (3, 6)):
        space = fo.FockSpace(D, n_max)
        w = np.sort(fo.invariant_zplus(space).eigvalsh())
        start = 0
        for k in range(n_max + 1):
            g = comb(k + D - 1, k)
            level = w[start:start + g]
            worst = max(worst, np.abs(level - (0.5 * k + 0.25 * D)).max())
            start += g
    return [("level error", worst, 1e-10)]


@_timed("grid eigenstate of the invariant", 2.0)
def grid_suite(seed=0):
    X, rho = 0.7, 0.3
    means = lg.MeanVector([0.0], [0.0])
    grid = fo.GridSpec.centered(0.0, 20.0 * np.sqrt(X), 1024)
    op = fo.grid_zplus(X, rho, means, grid)
    psi = fo.coherent_wavefunction(X, rho, means, grid.points)
    return [("eigen residual", np.abs(op.apply(psi) - 0.25 * psi).max(), 1e-6)]


@_timed("momentum variance from B", 5.0)
def variance_identity_suite(seed=0):
    rng = np.random.default_rng(seed)
    good, bad = 0.0, np.inf
    for k in range(100):
        X = rng.uniform(0.2, 3.0)
        r = rng.uniform(-1.5, 1.5)
        st = gs.make_minimal_state(lg.MeanVector([0.0], [0.0]), [[X]], [[r]], lg.Metric.default_1d())
        P, B = st.cov.P[0, 0], st.b_matrix[0, 0]
        good = max(good, abs(B * (1 + 2j * r) - P))
        if abs(r) > 0.05:
            bad = min(bad, abs(B * (1 + 0.5j * r) - P))
    # B(1 + i rho/2) must miss: report 1e-3 / margin, which is < 1 iff margin > 1e-3
    return [("B(1+2i rho)", good, 1e-12), ("B(1+i rho/2) inverse margin", 1e-3 / bad, 1.0)]


@_timed("thermodynamics", 10.0)
def thermo_suite(seed=0):
    errs = {}
    n = np.arange(400)
    x = 0.5
    w = np.exp(-x * (2 * n + 1))
    direct = np.einsum("i,j,k->", w, w, w)
    errs["Z3"] = (abs(direct / tg.partition_single_3d(x, 1.0, 1.0) - 1), 1e-12)
    space = fo.FockSpace(1, 80)
    H = fo.covariant_hamiltonian(space, 0.0, 1.0, 1.0).dense()
    tr = np.trace(expm(-x * H)).real
    errs["trace"] = (abs(tr - 1 / (2 * np.sinh(x))), 1e-10)
    worst = 0.0
    for T in np.geomspace(0.05, 20, 5):
        for V in np.geomspace(0.1, 100, 5):
            h = 1e-4 * V
            fd = -(tg.free_energy(3, T, V + h, 1.0) - tg.free_energy(3, T, V - h, 1.0)) / (2 * h)
            worst = max(worst, abs(fd / tg.pressure(3, T, V, 1.0) - 1))
    errs["pressure"] = (worst, 1e-6)
    errs["xcothx"] = (abs(tg.x_coth_x(1e-3) - 1), 1e-6)
    rho, S = tg.canonical_density_and_entropy(x, 1.0, 1.0)
    ident = x * tg.oscillator_energy(x, 1.0, 1.0) + tg.log_partition_single_3d(x, 1.0, 1.0)
    errs["entropy"] = (abs(S - ident), 1e-9)
    return [(k, e, t) for k, (e, t) in errs.items()]


@_timed("coherent-frame trace", 30.0)
def coherent_trace_suite(seed=0):
    worst = 0.0
    for x in (0.5, 1.0, 2.0):
        v = tg.coherent_trace_partition(x, 1.0, 1.0)
        worst = max(worst, abs(v * 2 * np.sinh(x) - 1))
    return [("relative error", worst, 1e-4)]


@_timed("Clifford identities", 5.0)
def clifford_suite(seed=0):
    rep = cf.build_clifford(cf.STANDARD_MODEL_METRIC)
    res = max(cf.clifford_residuals(rep).values())
    z, zd = cf.zeta_operators(rep)
    one = rep.identity
    for mu in range(5):
        for nu in range(5):
            res = max(res, np.abs(cf.anticommutator(z[mu], z[nu])).max())
            res = max(res, np.abs(cf.anticommutator(z[mu], zd[nu]) - (mu == nu) * one).max())
    S = cf.sigma_invariant(rep)
    Xi = cf.xi_generators(rep)
    comm = max(np.abs(S @ Xi[m, n] - Xi[m, n] @ S).max() for m in range(5) for n in range(5))
    group = 0.0
    for k in range(20):
        U = expm(cf.random_lie_element(rep, seed * 1000 + k))
        group = max(group, np.abs(S @ U - U @ S).max())
    return [("identities", res, 1e-12), ("[Sigma, Xi]", comm, 1e-12), ("[Sigma, e^s]", group, 1e-9)]


@_timed("mixed invariant", 20.0)
def mixed_suite(seed=0):
    worst = 0.0
    for metric, n_max in ((lg.Metric(1, 0), 6), (lg.Metric(0, 1), 6), (lg.Metric(2, 0), 4), (lg.Metric(1, 1), 4)):
        rep = cf.build_clifford(metric)
        worst = max(worst, cf.mixed_invariant_check(rep, fo.FockSpace(metric.dim, n_max)).residual)
    return [("interior residual", worst, 1e-10)]


@_timed("fermion table", 2.0)
def table_suite(seed=0):
    rows = cf.classify_fermions()
    hist = np.bincount([r.f_total for r in rows], minlength=6).tolist()
    bad = sum(r.Q != r.I3 + r.YW / 2 for r in rows)
    mine = sorted((r.f_bits, r.I3, r.YW, r.Q) for r in rows)
    agree = cf.classify_by_diagonalization(seed=seed) == mine
    return [
        ("row count mismatch", abs(len(rows) - 32), 0.5),
        ("histogram mismatch", float(hist != [1, 5, 10, 10, 5, 1]), 0.5),
        ("rows violating Q = I3 + YW/2", bad, 0.5),
        ("operator route mismatch", float(not agree), 0.5),
    ]


@_timed("overlap and completeness", 10.0)
def overlap_suite(seed=0):
    rng = np.random.default_rng(seed)
    metric = lg.Metric.default_1d()
    worst = 0.0
    for _ in range(20):
        X = rng.uniform(0.3, 2.0)
        s1 = gs.make_minimal_state(lg.MeanVector(rng.uniform(-1, 1, 1), rng.uniform(-1, 1, 1)), [[X]], [[0.0]], metric)
        s2 = gs.make_minimal_state(lg.MeanVector(rng.uniform(-1, 1, 1), rng.uniform(-1, 1, 1)), [[X]], [[0.0]], metric)
        u = np.linspace(-40 * np.sqrt(X), 40 * np.sqrt(X), 8001)
        quad = trapezoid(np.conj(gs.wavefunction_eval(s1, u)) * gs.wavefunction_eval(s2, u), u)
        worst = max(worst, abs(quad - gs.coherent_overlap(s1, s2)))
    B = 0.8
    grid = fo.GridSpec.centered(0.0, 20.0 / np.sqrt(B), 1024)
    p0 = fo.hermite_wavefunction(0, B, 0.0, 0.0, grid.points)
    p1 = fo.hermite_wavefunction(1, B, 0.0, 0.0, grid.points)
    roi = 0.0
    for psi in (p0, p1, (p0 + p1) / np.sqrt(2)):
        roi = max(roi, abs(fo.resolution_of_identity_check(psi, grid, B) - 1))
    return [("overlap", worst, 1e-8), ("completeness", roi, 1e-4)]


SUITES = (
    symplectic_suite,
    covariance_suite,
    spectrum_suite,
    grid_suite,
    variance_identity_suite,
    thermo_suite,
    coherent_trace_suite,
    clifford_suite,
    mixed_suite,
    table_suite,
    overlap_suite,
)


def run_all(seed: int = 0):
    return [suite(seed) for suite in SUITES]
