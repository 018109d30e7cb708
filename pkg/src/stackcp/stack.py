"""First level of the stack: cross-fitted and full-sample base predictions."""

from dataclasses import dataclass, field

import numpy as np

from . import learners
from .errors import DimensionMismatch, FoldTooSmall
from .folding import FoldScheme
from .learners import FittedLearner, LearnerSpec, symmetric_hash


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    columns: tuple[str, ...] = ()
    name: str = "data"

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise DimensionMismatch(f"X {X.shape} and y {y.shape} do not conform")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("dataset needs at least one row and one feature")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("dataset contains non-finite values")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if not self.columns:
            object.__setattr__(self, "columns", tuple(f"x{j}" for j in range(X.shape[1])))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def subset(self, idx) -> "Dataset":
        return Dataset(self.X[idx], self.y[idx], self.columns, self.name)


@dataclass(frozen=True)
class SecondLevelData:
    Z: np.ndarray
    y: np.ndarray
    scheme: FoldScheme
    specs: tuple[LearnerSpec, ...]


@dataclass(frozen=True)
class StackModel:
    models: tuple[FittedLearner, ...]
    specs: tuple[LearnerSpec, ...]
    fingerprint: int = field(default=0)

    @property
    def n_learners(self) -> int:
        return len(self.models)


def cross_fit(data: Dataset, specs, scheme: FoldScheme) -> SecondLevelData:
    """Out-of-fold base predictions.

    ``Z[i, m]`` is the prediction for unit ``i`` of learner ``m`` trained on
    every unit outside the fold of ``i``. Each learner is fit once per fold.
    """
    specs = tuple(specs)
    if not specs:
        raise ValueError("need at least one learner spec")
    if scheme.n != data.n:
        raise DimensionMismatch(f"fold scheme covers {scheme.n} units, data has {data.n}")
    smallest = int(data.n - scheme.fold_sizes().max())
    for spec in specs:
        if smallest < spec.min_rows:
            raise FoldTooSmall(
                f"{spec.kind} needs {spec.min_rows} training rows, smallest fold exclusion has {smallest}"
            )
    Z = np.empty((data.n, len(specs)))
    for k in range(scheme.n_folds):
        held_out = scheme.fold_indices(k)
        if held_out.size == 0:
            continue
        train = scheme.exclusion_indices(k)
        X_tr, y_tr = data.X[train], data.y[train]
        X_ho = data.X[held_out]
        for m, spec in enumerate(specs):
            model = learners.fit(spec, X_tr, y_tr)
            Z[held_out, m] = model.predict(X_ho)
    return SecondLevelData(Z, data.y.copy(), scheme, specs)


def fit_full(data: Dataset, specs) -> StackModel:
    """Fit every base learner on the whole training sample."""
    specs = tuple(specs)
    if not specs:
        raise ValueError("need at least one learner spec")
    models = tuple(learners.fit(spec, data.X, data.y) for spec in specs)
    return StackModel(models, specs, symmetric_hash(np.column_stack([data.X, data.y])))


def predict_features(model: StackModel, X_test) -> np.ndarray:
    """Second-level features ``Z0`` (one column per base learner) for new rows."""
    X_test = np.asarray(X_test, dtype=np.float64)
    if X_test.ndim == 1:
        X_test = X_test[None, :] if X_test.size else X_test.reshape(0, model.models[0].n_features)
    d = model.models[0].n_features
    if X_test.ndim != 2 or X_test.shape[1] != d:
        raise DimensionMismatch(f"expected {d} features, got array of shape {X_test.shape}")
    Z0 = np.empty((X_test.shape[0], model.n_learners))
    for m, fitted in enumerate(model.models):
        Z0[:, m] = fitted.predict(X_test)
    return Z0
