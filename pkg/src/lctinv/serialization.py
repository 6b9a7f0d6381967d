"""
JSON and CSV formats used by the command line.

JSON floats are written with Python's shortest round-trip repr, so every
file reads back bit-for-bit.  CSV numbers use 17 significant digits; exact
rationals are written as ``p/q``.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .exceptions import DimensionError, LCTError, MinimalUncertaintyError
from .gaussian_state import GaussianState, make_minimal_state, minimal_residual
from .lct_group import CovarianceBlocks, LctMatrix, MeanVector, Metric

__all__ = [
    "fmt",
    "metric_to_dict",
    "metric_from_dict",
    "lct_to_dict",
    "lct_from_dict",
    "state_to_dict",
    "state_from_dict",
    "dump_json",
    "load_json",
    "FERMION_HEADER",
    "fermion_rows_to_csv",
    "fermion_rows_from_csv",
    "rows_to_csv",
    "parse_csv",
]


def fmt(v) -> str:
    """17 significant digits for floats, ``p/q`` for rationals."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def metric_to_dict(m: Metric) -> dict:
    return {"plus": m.d_plus, "minus": m.d_minus}


def metric_from_dict(d) -> Metric:
    try:
        return Metric(int(d["plus"]), int(d["minus"]))
    except (KeyError, TypeError, ValueError) as e:
        raise LCTError(f"bad metric record {d!r}: {e}") from None


def _mat(d, key):
    try:
        return np.array(d[key], dtype=float)
    except KeyError:
        raise LCTError(f"missing field {key!r}") from None
    except (TypeError, ValueError) as e:
        raise LCTError(f"field {key!r} is not a numeric matrix: {e}") from None


def lct_to_dict(M: LctMatrix) -> dict:
    return {
        "metric": metric_to_dict(M.metric),
        **{k: getattr(M, k).tolist() for k in "abcd"},
    }


def lct_from_dict(d) -> LctMatrix:
    if not isinstance(d, dict):
        raise LCTError("LCT record must be a JSON object")
    metric = metric_from_dict(d.get("metric", {}))
    return LctMatrix(*(_mat(d, k) for k in "abcd"), metric=metric)


def state_to_dict(s: GaussianState) -> dict:
    return {
        "metric": metric_to_dict(s.metric),
        "p_means": s.means.p_means.tolist(),
        "x_means": s.means.x_means.tolist(),
        "X": s.cov.X.tolist(),
        "rho": s.cov.rho.tolist(),
        "P": s.cov.P.tolist(),
    }


def state_from_dict(d, derive_P: bool = False) -> GaussianState:
    """Read a state; ``P`` is taken from the file when present unless ``derive_P``."""
    if not isinstance(d, dict):
        raise LCTError("state record must be a JSON object")
    metric = metric_from_dict(d.get("metric", {}))
    means = MeanVector(_mat(d, "p_means"), _mat(d, "x_means"))
    X, rho = _mat(d, "X"), _mat(d, "rho")
    state = make_minimal_state(means, X, rho, metric)
    if "P" in d and not derive_P:
        P = _mat(d, "P")
        cov = CovarianceBlocks(P=P, X=state.cov.X, rho=state.cov.rho)
        state = GaussianState(means=means, cov=cov, metric=metric)
        r = minimal_residual(state)
        if r > 1e-9 * max(1.0, np.abs(P).max()):
            raise MinimalUncertaintyError(f"stored P departs from the minimal value by {r:.3e}")
    return state


def dump_json(obj: dict, path=None) -> str:
    text = json.dumps(obj, indent=2) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise LCTError(f"{path}: malformed JSON ({e})") from None


FERMION_HEADER = ["f0", "f1", "f2", "f3", "f4", "|f|", "I3", "YW", "Q", "label"]


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in r])
    return buf.getvalue()


def parse_csv(text: str):
    """Return ``(header, rows)`` with every cell as a string."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise LCTError("empty CSV")
    return rows[0], rows[1:]


def fermion_rows_to_csv(rows) -> str:
    with_n = any(r.n_label is not None for r in rows)
    header = FERMION_HEADER + (["n"] if with_n else [])
    out = []
    for r in rows:
        line = [*r.f_bits, r.f_total, r.I3, r.YW, r.Q, r.label]
        if with_n:
            line.append(" ".join(str(k) for k in r.n_label))
        out.append(line)
    return rows_to_csv(header, out)


def fermion_rows_from_csv(text: str):
    """Parse a fermion table into ``(f_bits, I3, YW, Q, label)`` tuples."""
    header, rows = parse_csv(text)
    if header[: len(FERMION_HEADER)] != FERMION_HEADER:
        raise DimensionError(f"unexpected fermion CSV header {header}")
    out = []
    for r in rows:
        bits = tuple(int(v) for v in r[:5])
        out.append((bits, Fraction(r[6]), Fraction(r[7]), Fraction(r[8]), r[9]))
    return out
