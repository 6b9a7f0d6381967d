"""
Clifford-algebra spin sector: generators, fermionic ladder operators and invariants.

For a metric of dimension D the generators ``alpha^mu`` and ``beta^mu`` act on
``2^D``-dimensional spinors.  They come from the Jordan-Wigner tensor ladder

    alpha~^mu = Z x ... x Z x X x 1 x ... x 1
    beta~^mu  = Z x ... x Z x Y x 1 x ... x 1

(``X``, ``Y`` in slot ``mu``), multiplied by ``i`` whenever ``eta^{mu mu} = -1``
so that ``(alpha^mu)^2 = eta^{mu mu}``.  With this pairing
``zeta^mu = (alpha^mu + i beta^mu) / 2`` lowers the occupation of slot ``mu``
and ``Sigma^{mu mu} = zeta^{mu dag} zeta^mu`` is diagonal in the binary basis,
slot 0 being the most significant bit.

Only ``zeta^mu`` and its matrix adjoint are stored; the starred operator
``zeta^{mu *} = (alpha^mu - i beta^mu) / 2 = eta^{mu mu} zeta^{mu dag}`` is
formed on demand.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import product

import numpy as np
from scipy.linalg import expm

from .exceptions import DimensionError, TruncationError
from .fock_oscillator import FockSpace, annihilation, bosonic_number
from .lct_group import Metric

__all__ = [
    "CliffordRep",
    "FermionRow",
    "MixedInvariantReport",
    "MAX_CLIFFORD_DIM",
    "STANDARD_MODEL_METRIC",
    "anticommutator",
    "build_clifford",
    "clifford_residuals",
    "zeta_operators",
    "zeta_star",
    "xi_generators",
    "xi_generators_from_gammas",
    "sigma_pair",
    "sigma_invariant",
    "random_lie_element",
    "mixed_operator",
    "mixed_invariant_check",
    "y_operators",
    "charge_operators",
    "quantum_numbers",
    "fermion_labels",
    "classify_fermions",
    "classify_by_diagonalization",
]

MAX_CLIFFORD_DIM = 6
STANDARD_MODEL_METRIC = Metric(1, 4)

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def anticommutator(a, b):
    return a @ b + b @ a


def _kron_all(mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """Matrices ``alpha^mu``, ``beta^mu`` generating the Clifford algebra of ``eta (+) eta``."""

    metric: Metric
    alpha: tuple
    beta: tuple

    @property
    def dim(self) -> int:
        return self.metric.dim

    @property
    def spinor_dim(self) -> int:
        return 2**self.dim

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.spinor_dim, dtype=complex)


def clifford_residuals(rep: CliffordRep) -> dict:
    """Max-abs violations of the anticommutation and Hermiticity relations."""
    D, eta, one = rep.dim, rep.metric.eta, rep.identity
    res = {"alpha_alpha": 0.0, "beta_beta": 0.0, "alpha_beta": 0.0, "hermiticity": 0.0}
    for mu in range(D):
        for nu in range(D):
            tgt = 2.0 * eta[mu, nu] * one
            res["alpha_alpha"] = max(res["alpha_alpha"], np.abs(anticommutator(rep.alpha[mu], rep.alpha[nu]) - tgt).max())
            res["beta_beta"] = max(res["beta_beta"], np.abs(anticommutator(rep.beta[mu], rep.beta[nu]) - tgt).max())
            res["alpha_beta"] = max(res["alpha_beta"], np.abs(anticommutator(rep.alpha[mu], rep.beta[nu])).max())
        s = eta[mu, mu]
        for g in (rep.alpha[mu], rep.beta[mu]):
            res["hermiticity"] = max(res["hermiticity"], np.abs(g.conj().T - s * g).max())
    return res


def build_clifford(metric: Metric, tol: float = 1e-12) -> CliffordRep:
    """Jordan-Wigner representation on ``2^D`` spinors, checked on construction."""
    D = metric.dim
    if D > MAX_CLIFFORD_DIM:
        raise DimensionError(f"Clifford representation limited to D <= {MAX_CLIFFORD_DIM}, got {D}")
    alpha, beta = [], []
    for mu, s in enumerate(metric.signs):
        phase = 1.0 if s > 0 else 1j
        head = [_Z] * mu
        tail = [_I2] * (D - mu - 1)
        for out, op in ((alpha, _X), (beta, _Y)):
            m = phase * _kron_all(head + [op] + tail)
            m.setflags(write=False)
            out.append(m)
    rep = CliffordRep(metric, tuple(alpha), tuple(beta))
    worst = max(clifford_residuals(rep).values())
    if worst > tol:
        raise RuntimeError(f"Clifford construction violates its identities by {worst:.3e}")
    return rep


def zeta_operators(rep: CliffordRep):
    """Return ``(zeta, zeta_dag)``, lists of ``zeta^mu = (alpha^mu + i beta^mu)/2`` and adjoints."""
    z = [0.5 * (a + 1j * b) for a, b in zip(rep.alpha, rep.beta)]
    return z, [m.conj().T for m in z]


def zeta_star(rep: CliffordRep):
    """``zeta^{mu *} = (alpha^mu - i beta^mu) / 2``, equal to ``eta^{mu mu} zeta^{mu dag}``."""
    return [0.5 * (a - 1j * b) for a, b in zip(rep.alpha, rep.beta)]


def xi_generators(rep: CliffordRep) -> np.ndarray:
    """Lie-algebra basis ``Xi^{mu nu} = (zeta^{mu *} zeta^nu - zeta^nu zeta^{mu *}) / 2``.

    Shape ``(D, D, 2^D, 2^D)``.
    """
    z, _ = zeta_operators(rep)
    zs = zeta_star(rep)
    D = rep.dim
    out = np.empty((D, D, rep.spinor_dim, rep.spinor_dim), dtype=complex)
    for mu in range(D):
        for nu in range(D):
            out[mu, nu] = 0.5 * (zs[mu] @ z[nu] - z[nu] @ zs[mu])
    return out


def xi_generators_from_gammas(rep: CliffordRep) -> np.ndarray:
    """The same basis written directly in ``alpha``, ``beta``.

    ``(1/4)[(a^mu a^nu + b^mu b^nu) + i (a^mu b^nu + a^nu b^mu)]`` off the
    diagonal and ``(i/2) a^mu b^mu`` on it.
    """
    a, b, D = rep.alpha, rep.beta, rep.dim
    out = np.empty((D, D, rep.spinor_dim, rep.spinor_dim), dtype=complex)
    for mu in range(D):
        for nu in range(D):
            if mu == nu:
                out[mu, nu] = 0.5j * a[mu] @ b[mu]
            else:
                out[mu, nu] = 0.25 * ((a[mu] @ a[nu] + b[mu] @ b[nu]) + 1j * (a[mu] @ b[nu] + a[nu] @ b[mu]))
    return out


def sigma_pair(rep: CliffordRep, mu: int, nu: int) -> np.ndarray:
    """``Sigma^{mu nu} = zeta^{mu dag} zeta^nu``."""
    z, zd = zeta_operators(rep)
    return zd[mu] @ z[nu]


def sigma_invariant(rep: CliffordRep) -> np.ndarray:
    """Fermionic number operator ``Sigma = sum_mu zeta^{mu dag} zeta^mu``."""
    z, zd = zeta_operators(rep)
    return sum(d @ m for d, m in zip(zd, z))


def random_lie_element(rep: CliffordRep, seed: int) -> np.ndarray:
    """``s = sum s_{mu nu} Xi^{mu nu}`` with coefficients uniform in ``[-1, 1]``."""
    rng = np.random.default_rng(seed)
    coeff = rng.uniform(-1.0, 1.0, size=(rep.dim, rep.dim))
    return np.einsum("mn,mnij->ij", coeff, xi_generators(rep))


@dataclass(frozen=True)
class MixedInvariantReport:
    residual: float
    interior_states: int
    total_dim: int

    def passed(self, tol: float = 1e-10) -> bool:
        return self.residual < tol


def mixed_operator(rep: CliffordRep, space: FockSpace) -> np.ndarray:
    """``z = (alpha^mu p_mu + beta^mu x_mu) / sqrt(2)`` on Fock (x) spinor space.

    Reduced operators use the metric-aware pattern
    ``p_mu = (z_mu + eta_mu z_mu^dag)/sqrt(2)`` and
    ``x_mu = -i (z_mu - eta_mu z_mu^dag)/sqrt(2)``, which is the Euclidean
    ``(z + z^dag)/sqrt(2)``, ``i (z^dag - z)/sqrt(2)`` when ``eta_mu = +1``.
    The upper-index Clifford generators are ``alpha^mu`` themselves.
    """
    if space.n_modes != rep.dim:
        raise DimensionError(f"Fock space has {space.n_modes} modes, Clifford rep has {rep.dim}")
    out = np.zeros((space.dim * rep.spinor_dim,) * 2, dtype=complex)
    for mu, s in enumerate(rep.metric.signs):
        z = annihilation(space, mu).dense()
        zd = z.conj().T
        p = (z + s * zd) / np.sqrt(2.0)
        x = -1j * (z - s * zd) / np.sqrt(2.0)
        out += np.kron(p, rep.alpha[mu]) + np.kron(x, rep.beta[mu])
    return out / np.sqrt(2.0)


def mixed_invariant_check(rep: CliffordRep, space: FockSpace) -> MixedInvariantReport:
    """Residual of ``z^2 = K (x) 1 + 1 (x) Sigma`` on interior Fock states.

    Columns are restricted to basis states with every ``n_mu <= n_max - 2``
    (tensored with all spinor states); all rows are kept, so leakage out of
    the interior counts toward the residual.
    """
    if space.n_max < 4:
        raise TruncationError(f"mixed invariant check needs n_max >= 4, got {space.n_max}")
    zz = mixed_operator(rep, space)
    target = np.kron(bosonic_number(space).dense(), rep.identity) + np.kron(
        np.eye(space.dim), sigma_invariant(rep)
    )
    cols = np.flatnonzero(np.repeat(space.interior_mask(margin=2), rep.spinor_dim))
    diff = (zz @ zz - target)[:, cols]
    return MixedInvariantReport(float(np.abs(diff).max()), int(cols.size), int(zz.shape[0]))


_Y_COEFF = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), Fraction(1, 2))


def _require_sm(metric: Metric):
    if metric != STANDARD_MODEL_METRIC:
        raise DimensionError(f"charge assignment is defined for signature (1, 4), got {metric}")


def y_operators(rep: CliffordRep):
    """``y^mu = c_mu i alpha^mu beta^mu`` with ``c = (1/2, 1/3, 1/3, 1/3, 1/2)``."""
    _require_sm(rep.metric)
    return [float(c) * 1j * a @ b for c, a, b in zip(_Y_COEFF, rep.alpha, rep.beta)]


def charge_operators(rep: CliffordRep, route: str = "sigma"):
    """Matrices ``(I3, YW, Q)``.

    ``route="sigma"`` builds them from the diagonal ``Sigma^{mu mu}`` with the
    affine shifts; ``route="y"`` from the ``y^mu``:
    ``I3 = (y0 - y4)/2``, ``YW = sum y``, ``Q = y0 + (y1 + y2 + y3)/2``.
    """
    _require_sm(rep.metric)
    one = rep.identity
    if route == "sigma":
        S = [sigma_pair(rep, mu, mu) for mu in range(5)]
        mid = S[1] + S[2] + S[3]
        I3 = 0.5 * (S[0] + S[4]) - 0.5 * one
        YW = S[0] - (2.0 / 3.0) * mid - S[4] + one
        Q = S[0] - mid / 3.0
    elif route == "y":
        y = y_operators(rep)
        I3 = 0.5 * (y[0] - y[4])
        YW = y[0] + y[1] + y[2] + y[3] + y[4]
        Q = y[0] + 0.5 * (y[1] + y[2] + y[3])
    else:
        raise ValueError(f"unknown route {route!r}")
    return I3, YW, Q


def quantum_numbers(f_bits):
    """Exact ``(I3, YW, Q)`` for a 5-bit occupation vector."""
    f = [int(b) for b in f_bits]
    if len(f) != 5 or any(b not in (0, 1) for b in f):
        raise DimensionError(f"expected five bits, got {f_bits!r}")
    mid = f[1] + f[2] + f[3]
    I3 = Fraction(f[0] + f[4], 2) - Fraction(1, 2)
    YW = f[0] - Fraction(2, 3) * mid - f[4] + 1
    Q = f[0] - Fraction(1, 3) * mid
    assert Q == I3 + YW / 2
    return I3, Fraction(YW), Fraction(Q)


@dataclass(frozen=True)
class FermionRow:
    f_bits: tuple
    I3: Fraction
    YW: Fraction
    Q: Fraction
    label: str
    n_label: tuple = None

    @property
    def f_total(self) -> int:
        return sum(self.f_bits)


def fermion_labels() -> dict:
    """Bitstring to particle-name map, read from the packaged table."""
    text = resources.files("lctinv").joinpath("data/fermion_labels.csv").read_text()
    return {row["bits"]: row["label"] for row in csv.DictReader(io.StringIO(text))}


def classify_fermions(n_label=None):
    """All 32 rows in binary order of ``(f0, ..., f4)`` with exact charges and labels."""
    labels = fermion_labels()
    n = tuple(int(k) for k in n_label) if n_label is not None else None
    rows = []
    for bits in product((0, 1), repeat=5):
        I3, YW, Q = quantum_numbers(bits)
        rows.append(FermionRow(bits, I3, YW, Q, labels["".join(map(str, bits))], n))
    return rows


def _as_fraction(v: float, tol: float = 1e-9) -> Fraction:
    fr = Fraction(v).limit_denominator(12)
    if abs(float(fr) - v) > tol:
        raise ArithmeticError(f"eigenvalue {v} is not a small rational")
    return fr


def classify_by_diagonalization(rep: CliffordRep = None, seed: int = 0, route: str = "sigma"):
    """Operator route: read the table off simultaneous eigenvectors.

    A generic real combination of the commuting ``Sigma^{mu mu}`` has a
    nondegenerate spectrum; its eigenvectors are the joint eigenstates.  Each
    one is then labelled by the expectation values of ``Sigma^{mu mu}`` and of
    the charge operators.  Returns sorted tuples ``(f_bits, I3, YW, Q)``.
    """
    rep = rep or build_clifford(STANDARD_MODEL_METRIC)
    _require_sm(rep.metric)
    S = [sigma_pair(rep, mu, mu) for mu in range(5)]
    w = np.random.default_rng(seed).uniform(0.5, 1.5, size=5) * (2.0 ** np.arange(5))
    H = sum(c * s for c, s in zip(w, S))
    _, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    ops = charge_operators(rep, route)
    out = []
    for k in range(V.shape[1]):
        v = V[:, k]
        f = tuple(int(round(np.real(np.vdot(v, s @ v)))) for s in S)
        q = tuple(_as_fraction(float(np.real(np.vdot(v, o @ v)))) for o in ops)
        out.append((f,) + q)
    return sorted(out)
