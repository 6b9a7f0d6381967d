"""
Command-line entry point ``lctinv``.

Exit codes: 0 success, 1 a numerical contract failed (the mathematics says
no), 2 the input was invalid.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .clifford_fermions import classify_fermions
from .exceptions import LCTError
from .fock_oscillator import FockSpace, invariant_zplus, level_degeneracy
from .gaussian_state import apply_lct
from .lct_group import Metric, covariance_invariant, random_lct, symplectic_residual
from .serialization import (
    dump_json,
    fermion_rows_to_csv,
    fmt,
    lct_from_dict,
    lct_to_dict,
    load_json,
    rows_to_csv,
    state_from_dict,
    state_to_dict,
)
from .thermo_gas import TWO_PI, free_energy, gas_entropy, pressure, reduced_x

EXIT_OK, EXIT_NUMERIC, EXIT_INVALID = 0, 1, 2
MAX_SPECTRUM_DIM = 5000


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _range(text: str):
    """``lo,hi,n``: ``n`` log-spaced values from ``lo`` to ``hi``."""
    try:
        lo, hi, n = text.split(",")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi,n, got {text!r}") from None
    if not (lo > 0 and hi > 0 and n >= 1):
        raise argparse.ArgumentTypeError(f"range needs positive bounds and n >= 1, got {text!r}")
    return np.geomspace(lo, hi, n) if n > 1 else np.array([lo])


def _occupations(text: str):
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if len(vals) != 5 or min(vals) < 0:
        raise argparse.ArgumentTypeError(f"expected five nonnegative occupations, got {text!r}")
    return vals


def _short_e(v: float) -> str:
    """``2.3e-16`` / ``0.0e0`` style: one decimal, unpadded exponent."""
    mant, exp = f"{v:.1e}".split("e")
    return f"{mant}e{int(exp)}"


def cmd_lct_check(args) -> int:
    M = lct_from_dict(load_json(args.input))
    r = symplectic_residual(M)
    ok = r < args.tol
    print(f"residual {_short_e(r)}, symplectic: {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_lct_random(args) -> int:
    M = random_lct(Metric(args.plus, args.minus), args.seed, args.scale)
    _emit(dump_json(lct_to_dict(M)), args.output)
    return EXIT_OK


def cmd_state_transform(args) -> int:
    state = state_from_dict(load_json(args.state))
    M = lct_from_dict(load_json(args.lct))
    if symplectic_residual(M) >= args.tol:
        print(f"LCT fails the symplectic test (residual {symplectic_residual(M):.3e})", file=sys.stderr)
        return EXIT_NUMERIC
    out = apply_lct(state, M)
    before, after = covariance_invariant(state.cov), covariance_invariant(out.cov)
    print(f"invariant before {fmt(before)}")
    print(f"invariant after  {fmt(after)}")
    drift = abs(after - before) / max(abs(before), 1e-300)
    _emit(dump_json(state_to_dict(out)), args.output)
    if drift > args.tol:
        print(f"invariant drift {drift:.3e} exceeds {args.tol:.1e}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.modes < 1 or args.nmax < 0:
        raise LCTError("--modes must be >= 1 and --nmax >= 0")
    if (args.nmax + 1) ** args.modes > MAX_SPECTRUM_DIM:
        raise LCTError(
            f"space dimension {(args.nmax + 1) ** args.modes} exceeds the budget {MAX_SPECTRUM_DIM}"
        )
    space = FockSpace(args.modes, args.nmax)
    w, v = np.linalg.eigh(invariant_zplus(space).dense())
    labels = space.total[np.argmax(np.abs(v), axis=0)]
    rows, index = [], 0
    for k in range(args.nmax + 1):
        sel = np.sort(w[labels == k])
        if sel.size != level_degeneracy(k, args.modes):
            print(f"level {k} holds {sel.size} states, expected {level_degeneracy(k, args.modes)}", file=sys.stderr)
            return EXIT_NUMERIC
        for val in sel:
            rows.append([index, float(val), k, int(sel.size)])
            index += 1
    _emit(rows_to_csv(["index", "eigenvalue", "n_total", "degeneracy"], rows), args.output)
    return EXIT_OK


def cmd_thermo_table(args) -> int:
    if not (args.mass > 0 and args.h > 0) or args.particles < 1:
        raise LCTError("--mass and --h must be positive, --particles >= 1")
    rows = []
    for beta in args.beta_range:
        T = 1.0 / beta
        for V in args.volume_range:
            N = args.particles
            x = reduced_x(T, V, args.mass, args.h)
            z = pressure(N, T, V, args.mass, args.h) * V / (N * T)
            F = free_energy(N, T, V, args.mass, args.h)
            S = gas_entropy(N, T, V, args.mass, args.h)
            rows.append([T, V, x, z, F, S])
    _emit(rows_to_csv(["T", "V", "x", "PV/NkT", "F", "S/k"], rows), args.output)
    return EXIT_OK


def cmd_fermion_table(args) -> int:
    _emit(fermion_rows_to_csv(classify_fermions(args.n)), args.output)
    return EXIT_OK


def cmd_verify_all(args) -> int:
    from .verify import run_all

    results = run_all(args.seed)
    for r in results:
        print(r.line())
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} suites passed")
    return EXIT_OK if n_ok == len(results) else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="lctinv", description="Linear canonical transformation invariants")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    s = sub.add_parser("lct-check", help="test a JSON LCT matrix for the symplectic condition")
    s.add_argument("input")
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_lct_check)

    s = sub.add_parser("lct-random", help="sample a random LCT as JSON")
    s.add_argument("--plus", type=int, default=0, help="number of +1 metric entries")
    s.add_argument("--minus", type=int, default=1, help="number of -1 metric entries")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scale", type=float, default=0.5)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_lct_random)

    s = sub.add_parser("state-transform", help="apply an LCT to a Gaussian state")
    s.add_argument("state")
    s.add_argument("lct")
    s.add_argument("-o", "--output")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_state_transform)

    s = sub.add_parser("spectrum", help="eigenvalues of the bosonic invariant on complete levels")
    s.add_argument("--modes", type=int, default=1)
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("thermo-table", help="equation-of-state table over (beta, V)")
    s.add_argument("--beta-range", type=_range, default=_range("0.1,10,5"), help="lo,hi,n (log-spaced)")
    s.add_argument("--volume-range", type=_range, default=_range("0.1,100,5"), help="lo,hi,n (log-spaced)")
    s.add_argument("--mass", type=float, default=1.0)
    s.add_argument("--particles", type=int, default=1)
    s.add_argument("--h", type=float, default=TWO_PI, help="Planck constant (default 2 pi, hbar = 1)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_thermo_table)

    s = sub.add_parser("fermion-table", help="quantum numbers of the 32 spinor states")
    s.add_argument("--n", type=_occupations, default=None, help="bosonic occupations n0,...,n4 to attach")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_fermion_table)

    s = sub.add_parser("verify-all", help="run every invariant suite")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify_all)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LCTError, ValueError, OSError, KeyError, TypeError) as e:
        print(f"lctinv: error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
