import numpy as np
import pytest

from oracles import least_squares
from stackcp import learners
from stackcp.errors import DimensionMismatch, FoldTooSmall
from stackcp.folding import FoldScheme, sample_fold_scheme
from stackcp.learners import ForestSpec, KNNSpec, RidgeSpec
from stackcp.stack import Dataset, cross_fit, fit_full, predict_features

SPECS = (RidgeSpec(1.0), KNNSpec(3), ForestSpec(n_trees=8, min_leaf=2))


def _dataset(rng, n=40, d=2):
    X = rng.uniform(size=(n, d))
    y = 10 + X @ np.array([3.0, -1.0])[:d] + 0.3 * rng.normal(size=n)
    return Dataset(X, y)


@pytest.fixture
def counted_fits(monkeypatch):
    calls = []
    real_fit = learners.fit

    def fit(spec, X, y):
        calls.append((spec, np.array(y, copy=True)))
        return real_fit(spec, X, y)

    monkeypatch.setattr(learners, "fit", fit)
    return calls


def test_constant_response_gives_constant_features(rng):
    data = Dataset(rng.normal(size=(20, 2)), np.full(20, 7.5))
    second = cross_fit(data, [RidgeSpec(0.3)], sample_fold_scheme(20, 4, 0))
    np.testing.assert_allclose(second.Z, 7.5, atol=1e-12)


def test_two_fold_ridge_matches_manual_refit():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(4, 1))
    y = rng.normal(size=4)
    scheme = FoldScheme(4, 2, [0, 1, 1, 0])
    second = cross_fit(Dataset(X, y), [RidgeSpec(0.0)], scheme)
    for i in range(4):
        other = [j for j in range(4) if scheme.assignment[j] != scheme.assignment[i]]
        a, b = least_squares([[1.0, X[j, 0]] for j in other], [y[j] for j in other])
        assert second.Z[i, 0] == pytest.approx(a + b * X[i, 0], abs=1e-10)


def test_row_permutation_preserves_second_level_pairs(rng):
    data = _dataset(rng, n=30)
    scheme = sample_fold_scheme(30, 5, 3)
    base = cross_fit(data, SPECS, scheme)
    p = rng.permutation(30)
    moved = cross_fit(data.subset(p), SPECS, FoldScheme(30, 5, scheme.assignment[p]))
    pairs = lambda s: sorted(map(tuple, np.column_stack([s.Z, s.y]).tolist()))
    assert pairs(base) == pairs(moved)


def test_out_of_fold_discipline(rng, counted_fits):
    n = 25
    X = rng.uniform(size=(n, 2))
    y = np.arange(n, dtype=float) + 100.0  # unique responses identify the rows
    scheme = sample_fold_scheme(n, 5, 8)
    data = Dataset(X, y)
    cross_fit(data, [RidgeSpec(1.0)], scheme)
    assert len(counted_fits) == scheme.n_folds
    for _, y_train in counted_fits:
        seen = set((y_train - 100).astype(int))
        held_out = set(range(n)) - seen
        folds = {scheme.fold_of(i) for i in held_out}
        assert len(folds) == 1
        assert held_out == set(scheme.fold_indices(folds.pop()).tolist())


def test_fit_count(rng, counted_fits):
    data = _dataset(rng)
    scheme = sample_fold_scheme(data.n, 4, 1)
    cross_fit(data, SPECS, scheme)
    assert len(counted_fits) == 4 * len(SPECS)
    fit_full(data, SPECS)
    assert len(counted_fits) == 5 * len(SPECS)


def test_fold_too_small(rng):
    data = _dataset(rng, n=6)
    with pytest.raises(FoldTooSmall):
        cross_fit(data, [KNNSpec(5)], sample_fold_scheme(6, 3, 0))


def test_scheme_size_must_match(rng):
    with pytest.raises(DimensionMismatch):
        cross_fit(_dataset(rng, n=10), SPECS, sample_fold_scheme(11, 2, 0))


def test_fit_full_exact_line():
    x = np.linspace(0, 1, 12)
    model = fit_full(Dataset(x[:, None], 2 * x), [RidgeSpec(0.0)])
    np.testing.assert_allclose(predict_features(model, [[0.25], [3.0]])[:, 0], [0.5, 6.0], atol=1e-10)


def test_identical_specs_give_identical_columns(rng):
    data = _dataset(rng)
    Z0 = predict_features(fit_full(data, [SPECS[2], SPECS[2]]), rng.uniform(size=(9, 2)))
    np.testing.assert_array_equal(Z0[:, 0], Z0[:, 1])


def test_predictions_within_response_range(rng):
    data = _dataset(rng, n=100)
    Z0 = predict_features(fit_full(data, [RidgeSpec(1.0), KNNSpec(5)]), rng.uniform(size=(50, 2)))
    lo, hi = data.y.min() - 3 * data.y.std(), data.y.max() + 3 * data.y.std()
    assert np.all(np.isfinite(Z0)) and np.all((lo <= Z0) & (Z0 <= hi))


def test_predict_features_edge_cases(rng):
    data = _dataset(rng)
    model = fit_full(data, [KNNSpec(1), RidgeSpec(1.0)])
    assert predict_features(model, np.empty((0, 2))).shape == (0, 2)
    Z0 = predict_features(model, data.X[:5])
    np.testing.assert_array_equal(Z0[:, 0], data.y[:5])
    for i in range(5):
        expected = [m.predict(data.X[i]) for m in model.models]
        np.testing.assert_array_equal(Z0[i], expected)
    with pytest.raises(DimensionMismatch):
        predict_features(model, np.ones((2, 3)))


def test_dataset_rejects_non_finite():
    with pytest.raises(ValueError):
        Dataset(np.array([[1.0], [np.nan]]), np.array([1.0, 2.0]))
