"""Coverage and width summaries for sets of prediction intervals."""

from dataclasses import asdict, dataclass

import numpy as np

from ._random import make_rng
from .errors import LengthMismatch

# Quartiles use numpy's default "linear" method (Hyndman-Fan type 7).
QUARTILE_METHOD = "linear"

REPORT_FIELDS = ("dataset", "method", "alpha", "coverage", "q1", "median", "q3", "n_test")
RECORD_FIELDS = ("index", "lower", "upper", "truth", "covered")


@dataclass(frozen=True)
class EvaluationReport:
    method: str
    alpha: float
    coverage: float
    q1: float
    median: float
    q3: float
    n_test: int
    n_truncated: int = 0
    dataset: str = "data"

    def as_record(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_FIELDS}


@dataclass(frozen=True)
class IntervalRecord:
    index: int
    lower: float
    upper: float
    truth: float
    covered: bool

    def as_record(self) -> dict:
        return asdict(self)


def _bounds(intervals):
    lo = np.array([iv.lower for iv in intervals], dtype=np.float64)
    hi = np.array([iv.upper for iv in intervals], dtype=np.float64)
    return lo, hi


def evaluate(intervals, y_test, method: str = "stacked-cp", alpha: float = float("nan"), dataset: str = "data") -> EvaluationReport:
    """Empirical coverage (closed intervals) and width quartiles."""
    y = np.asarray(y_test, dtype=np.float64).ravel()
    if len(intervals) != y.size:
        raise LengthMismatch(f"{len(intervals)} intervals but {y.size} responses")
    if y.size == 0:
        raise ValueError("nothing to evaluate")
    lo, hi = _bounds(intervals)
    covered = int(np.count_nonzero((lo <= y) & (y <= hi)))
    q1, med, q3 = np.percentile(hi - lo, [25, 50, 75], method=QUARTILE_METHOD)
    n_trunc = sum(bool(getattr(iv, "truncated", False)) for iv in intervals)
    return EvaluationReport(method, alpha, covered / y.size, float(q1), float(med), float(q3), int(y.size), n_trunc, dataset)


def _fmt_width(w):
    return f"{w:,.0f}" if abs(w) >= 100 else f"{w:.4f}"


def render_report(reports) -> tuple[str, list[dict]]:
    """Text table in the layout of a coverage/width comparison plus records.

    Rows are grouped by dataset and ordered by decreasing ``alpha``, with the
    methods for one ``alpha`` level next to each other.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to render")
    order = {}
    for r in reports:
        order.setdefault(r.dataset, len(order))
    rows = sorted(
        enumerate(reports),
        key=lambda ir: (order[ir[1].dataset], -ir[1].alpha, ir[0]),
    )
    header = ("Dataset", "Method", "1-alpha", "Empirical coverage", "1st quartile", "Median", "3rd quartile")
    body = [
        (
            r.dataset,
            r.method,
            f"{100 * (1 - r.alpha):.0f}%",
            f"{100 * r.coverage:.1f}%",
            _fmt_width(r.q1),
            _fmt_width(r.median),
            _fmt_width(r.q3),
        )
        for _, r in rows
    ]
    widths = [max(len(str(c)) for c in col) for col in zip(header, *body)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in body]
    return "\n".join(lines), [r.as_record() for _, r in rows]


def interval_records(intervals, y_test) -> list[IntervalRecord]:
    y = np.asarray(y_test, dtype=np.float64).ravel()
    if len(intervals) != y.size:
        raise LengthMismatch(f"{len(intervals)} intervals but {y.size} responses")
    return [
        IntervalRecord(i, float(iv.lower), float(iv.upper), float(t), bool(iv.lower <= t <= iv.upper))
        for i, (iv, t) in enumerate(zip(intervals, y))
    ]


def sample_records(records, size: int = 50, seed: int = 0) -> list[IntervalRecord]:
    """Seeded subsample (sorted by index) for plotting a handful of units."""
    if size >= len(records):
        return list(records)
    idx = np.sort(make_rng(seed, "figure-sample").choice(len(records), size=size, replace=False))
    return [records[i] for i in idx]


def coverage_from_records(records) -> float:
    return sum(r.covered for r in records) / len(records)
