"""Growth-exponent fits, empirical domination checks and CSV output."""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .explorer import DivergenceSample, Status

CSV_COLUMNS = ("graph", "geodesic", "m", "t", "r", "status", "value", "cap_radius",
               "cap_nodes", "nodes_explored", "stabilized", "min_t")


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class FitReport:
    slope: float
    intercept: float
    r_squared: float
    r_range: tuple[int, int]
    sample_count: int
    excluded: int = 0

    def __str__(self):
        lo, hi = self.r_range
        return (f"slope={self.slope:.4f} intercept={self.intercept:.4f} "
                f"R^2={self.r_squared:.4f} r={lo}..{hi} n={self.sample_count} "
                f"excluded={self.excluded}")


@dataclass(frozen=True)
class DominationVerdict:
    holds: bool
    A: float
    B: float
    C: float
    counterexample: float | None = None
    checked: int = 0

    def __str__(self):
        if self.holds:
            return (f"f <= g(A x) + B x on {self.checked} sampled x > C "
                    f"(A={self.A}, B={self.B}, C={self.C}; finite-range evidence only)")
        return f"fails at x={self.counterexample} (A={self.A}, B={self.B}, C={self.C})"


@dataclass(frozen=True)
class ExponentVerdict:
    passed: bool
    slope: float
    expected: float
    tol: float

    def __str__(self):
        word = "PASS" if self.passed else "FAIL"
        return f"{word}: slope {self.slope:.4f} vs expected {self.expected:.4f} (tol {self.tol})"


def _points(samples) -> list[tuple[int, float, bool]]:
    """(r, value, usable) triples from samples, dicts or (r, value) pairs."""
    out = []
    if isinstance(samples, Mapping):
        samples = samples.items()
    for s in samples:
        if isinstance(s, DivergenceSample):
            usable = s.status is Status.FOUND and s.stabilized and s.value is not None
            out.append((s.r, s.value, usable))
        else:
            r, v = s
            out.append((r, v, v is not None))
    return out


def loglog_fit(samples, r_range: tuple[int, int] | None = None) -> FitReport:
    """Least-squares line through (ln r, ln value).

    Only Found, stabilized samples with r, value > 0 inside ``r_range``
    (inclusive) are used; others in range are excluded with a warning.
    """
    pts = _points(samples)
    if r_range is None:
        rs = [r for r, _, _ in pts]
        if not rs:
            raise InsufficientData("no samples")
        r_range = (min(rs), max(rs))
    lo, hi = r_range
    xs, ys, excluded = [], [], 0
    for r, v, usable in pts:
        if not lo <= r <= hi:
            continue
        if not usable or r <= 0 or v is None or v <= 0:
            excluded += 1
            continue
        xs.append(math.log(r))
        ys.append(math.log(v))
    if excluded:
        warnings.warn(f"{excluded} sample(s) in r={lo}..{hi} excluded from fit "
                      "(not Found, not stabilized, or non-positive)")
    if len(xs) < 3:
        raise InsufficientData(f"need >= 3 usable samples in r={lo}..{hi}, have {len(xs)}")
    x, y = np.asarray(xs), np.asarray(ys)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid ** 2)) / ss_tot)
    return FitReport(float(slope), float(intercept), r2, (lo, hi), len(xs), excluded)


def _table(samples) -> dict[float, float]:
    return {r: v for r, v, usable in _points(samples) if usable}


def dominates_check(f_samples, g_samples, A: float, B: float, C: float) -> DominationVerdict:
    """Check ``f(x) <= g(A x) + B x`` at every sampled x > C.

    g is read at the smallest sampled radius >= A x (g is a divergence
    function, hence non-decreasing).
    """
    f, g = _table(f_samples), _table(g_samples)
    xs = sorted(x for x in f if x > C)
    if not xs or not g:
        raise InsufficientData("no sampled x > C")
    g_rs = sorted(g)
    checked = 0
    for x in xs:
        need = A * x
        at = next((r for r in g_rs if r >= need), None)
        if at is None:
            raise InsufficientData(f"g not sampled at or beyond {need}")
        checked += 1
        if f[x] > g[at] + B * x:
            return DominationVerdict(False, A, B, C, x, checked)
    return DominationVerdict(True, A, B, C, None, checked)


def compare_exponent(report: FitReport, expected, tol: float) -> ExponentVerdict:
    exp = float(Fraction(expected)) if isinstance(expected, str) else float(expected)
    return ExponentVerdict(abs(report.slope - exp) <= tol, report.slope, exp, tol)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def csv_text(samples: Iterable[DivergenceSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in samples:
        w.writerow([_cell(getattr(s, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def emit_csv(samples: Iterable[DivergenceSample], destination) -> None:
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text(samples))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def _opt_int(x):
    return None if x == "" else int(x)


def parse_csv(text: str) -> list[DivergenceSample]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    out = []
    for row in rows:
        out.append(DivergenceSample(
            r=int(row["r"]), status=Status(row["status"]), value=_opt_int(row["value"]),
            cap_radius=int(row["cap_radius"]), cap_nodes=int(row["cap_nodes"]),
            nodes_explored=int(row["nodes_explored"]),
            stabilized=row["stabilized"] == "true", min_t=_opt_int(row["min_t"]),
            graph=row["graph"], geodesic=row["geodesic"], m=_opt_int(row["m"]),
            t=row["t"] or None))
    return out


def read_csv(path) -> list[DivergenceSample]:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def format_samples(samples: Sequence[DivergenceSample]) -> str:
    lines = [f"{'r':>4} {'status':<22} {'value':>8} {'stab':>5} {'nodes':>10}"]
    for s in samples:
        v = "" if s.value is None else s.value
        lines.append(f"{s.r:>4} {str(s.status):<22} {v:>8} {str(s.stabilized):>5} "
                     f"{s.nodes_explored:>10}")
    return "\n".join(lines)
