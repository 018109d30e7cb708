import numpy as np
import pytest

from stackcp.conformal import PredictionInterval
from stackcp.errors import LengthMismatch
from stackcp.evaluation import (
    EvaluationReport,
    coverage_from_records,
    evaluate,
    interval_records,
    render_report,
    sample_records,
)


def _intervals(lo, hi):
    return [PredictionInterval(float(a), float(b), float((a + b) / 2)) for a, b in zip(lo, hi)]


def test_perfect_coverage():
    y = np.array([1.0, 5.0, -2.0])
    rep = evaluate(_intervals(y - 1, y + 1), y)
    assert rep.coverage == 1.0
    assert (rep.q1, rep.median, rep.q3) == (2.0, 2.0, 2.0)


def test_zero_coverage():
    rep = evaluate(_intervals(np.zeros(4), np.zeros(4)), np.ones(4))
    assert rep.coverage == 0.0


def test_boundaries_count_as_covered():
    rep = evaluate(_intervals([0.0, 0.0], [1.0, 1.0]), [0.0, 1.0])
    assert rep.coverage == 1.0


def test_odd_count_quartiles():
    widths = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    rep = evaluate(_intervals(np.zeros(5), widths), np.zeros(5))
    assert (rep.q1, rep.median, rep.q3) == (2.0, 3.0, 4.0)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        evaluate(_intervals([0.0], [1.0]), [0.0, 1.0])
    with pytest.raises(LengthMismatch):
        interval_records(_intervals([0.0], [1.0]), [])


def test_permutation_invariance(rng):
    lo = rng.normal(size=50)
    hi = lo + rng.uniform(0, 2, size=50)
    y = rng.normal(size=50)
    p = rng.permutation(50)
    a = evaluate(_intervals(lo, hi), y)
    b = evaluate(_intervals(lo[p], hi[p]), y[p])
    assert a == b


def test_records_agree_with_report(rng):
    lo = rng.normal(size=40)
    ivs = _intervals(lo, lo + 1.5)
    y = rng.normal(size=40)
    recs = interval_records(ivs, y)
    assert all(r.covered == (r.lower <= r.truth <= r.upper) for r in recs)
    assert coverage_from_records(recs) == evaluate(ivs, y).coverage
    assert interval_records([], []) == []


def test_sample_records_deterministic(rng):
    recs = interval_records(_intervals(np.zeros(200), np.ones(200)), rng.uniform(size=200))
    a, b = sample_records(recs, 50, seed=3), sample_records(recs, 50, seed=3)
    assert a == b and len(a) == 50
    assert [r.index for r in a] == sorted(r.index for r in a)
    assert a != sample_records(recs, 50, seed=4)


def test_render_single_row():
    text, recs = render_report([EvaluationReport("Stacked CP", 0.1, 0.9, 1.0, 2.0, 3.0, 10)])
    lines = text.splitlines()
    assert len(lines) == 3 and lines[0].startswith("Dataset") and len(recs) == 1
    assert list(recs[0]) == ["dataset", "method", "alpha", "coverage", "q1", "median", "q3", "n_test"]


def test_render_dollar_format():
    rep = EvaluationReport("Stacked CP", 0.1, 0.899, 96927.0, 119003.0, 147988.0, 6192, dataset="California")
    row = render_report([rep])[0].splitlines()[2].split()
    assert row == ["California", "Stacked", "CP", "90%", "89.9%", "96,927", "119,003", "147,988"]


def test_render_groups_by_dataset():
    reports = [
        EvaluationReport(m, a, 0.9, 1.0, 2.0, 3.0, 10, dataset="D")
        for a in (0.1, 0.15, 0.2)
        for m in ("Stacked CP", "Split CP")
    ]
    text, recs = render_report(reports)
    assert len(recs) == 6
    assert [r["alpha"] for r in recs] == [0.2, 0.2, 0.15, 0.15, 0.1, 0.1]
    assert [r["method"] for r in recs[:2]] == ["Stacked CP", "Split CP"]
