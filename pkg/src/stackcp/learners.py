"""Base learners for the first level of the stack.

Every learner must treat its training rows as a multiset: permuting the rows
may not change a single bit of any prediction. This is enforced structurally.
Before fitting, rows ``(x_i, y_i)`` are put in lexicographic order, so the
fit only ever sees the canonical arrangement of the data. Learners that use
randomness (the forest) seed it from :func:`symmetric_hash` of the training
rows, which is itself order invariant.
"""

import hashlib
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from sklearn.tree import DecisionTreeRegressor

from .errors import BadHyperparameter, DimensionMismatch, EmptyTrainingSet

_MASK64 = (1 << 64) - 1
_HASH_KEY = b"stackcp/symmetric-hash/v1"


def _mix64(z: int) -> int:
    # splitmix64 finalizer
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def symmetric_hash(S) -> int:
    """Order-invariant, multiset-sensitive 64-bit hash of the rows of ``S``.

    Each row is encoded as little-endian float64 (with ``-0.0`` mapped to
    ``0.0``), hashed with keyed BLAKE2b, passed through a 64-bit finalizer,
    and the results are summed modulo ``2**64``. Summation makes the value
    independent of row order while a duplicated row still changes it.
    """
    S = np.asarray(S, dtype=np.float64)
    if S.ndim == 1:
        S = S[None, :]
    if S.ndim != 2 or S.shape[0] == 0:
        raise EmptyTrainingSet("cannot hash an empty training set")
    rows = np.ascontiguousarray(S + 0.0, dtype="<f8")
    total = 0
    for row in rows:
        h = hashlib.blake2b(row.tobytes(), digest_size=8, key=_HASH_KEY).digest()
        total = (total + _mix64(int.from_bytes(h, "little"))) & _MASK64
    return _mix64(total ^ rows.shape[1])


def _check_training(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X {X.shape} and y {y.shape} do not conform")
    if X.shape[0] == 0:
        raise EmptyTrainingSet("training set has no rows")
    if X.shape[1] == 0:
        raise DimensionMismatch("training set has no features")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("training data must be finite")
    return X, y


def canonical_rows(X, y):
    """Return ``(X, y)`` with rows sorted lexicographically on ``(x, y)``."""
    X, y = _check_training(X, y)
    S = np.column_stack([X, y]) + 0.0
    order = np.lexsort(S.T[::-1])
    S = S[order]
    return np.ascontiguousarray(S[:, :-1]), np.ascontiguousarray(S[:, -1])


class FittedLearner:
    kind: ClassVar[str]
    n_features: int
    training_hash: int

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got array of shape {X.shape}"
            )
        if X.shape[0] == 0:
            return np.empty(0)
        out = self._predict(X)
        return out[0] if single else out

    def _predict(self, X):
        raise NotImplementedError


# -- ridge -------------------------------------------------------------------


@dataclass(frozen=True)
class RidgeSpec:
    """Linear regression with an unpenalized intercept and L2 penalty."""

    penalty: float = 1.0
    kind: ClassVar[str] = "ridge"
    min_rows: ClassVar[int] = 1

    def __post_init__(self):
        if not (np.isfinite(self.penalty) and self.penalty >= 0):
            raise BadHyperparameter(f"ridge penalty must be >= 0, got {self.penalty}")

    def fit(self, X, y) -> "RidgeModel":
        X, y = canonical_rows(X, y)
        x_mean = X.mean(axis=0)
        y_mean = y.mean()
        Xc = X - x_mean
        yc = y - y_mean
        if self.penalty > 0:
            G = Xc.T @ Xc + self.penalty * np.eye(X.shape[1])
            coef = np.linalg.solve(G, Xc.T @ yc)
        else:
            coef = np.linalg.lstsq(Xc, yc, rcond=None)[0]
        intercept = y_mean - x_mean @ coef
        return RidgeModel(coef, float(intercept), symmetric_hash(np.column_stack([X, y])))


class RidgeModel(FittedLearner):
    kind = "ridge"

    def __init__(self, coef, intercept, training_hash):
        self.coef = coef
        self.intercept = intercept
        self.n_features = coef.size
        self.training_hash = training_hash

    def _predict(self, X):
        return X @ self.coef + self.intercept


# -- k nearest neighbours ----------------------------------------------------


@dataclass(frozen=True)
class KNNSpec:
    """Mean response of the ``n_neighbors`` closest training rows.

    Distances are Euclidean on features standardized with the training mean
    and standard deviation. Distance ties are broken by canonical row order.
    """

    n_neighbors: int = 10
    standardize: bool = True
    kind: ClassVar[str] = "knn"

    def __post_init__(self):
        if int(self.n_neighbors) != self.n_neighbors or self.n_neighbors < 1:
            raise BadHyperparameter(f"n_neighbors must be a positive integer, got {self.n_neighbors}")

    @property
    def min_rows(self) -> int:
        return int(self.n_neighbors)

    def fit(self, X, y) -> "KNNModel":
        X, y = canonical_rows(X, y)
        if self.n_neighbors > X.shape[0]:
            raise BadHyperparameter(
                f"n_neighbors={self.n_neighbors} exceeds training size {X.shape[0]}"
            )
        if self.standardize:
            center = X.mean(axis=0)
            scale = X.std(axis=0)
            scale[scale == 0] = 1.0
        else:
            center = np.zeros(X.shape[1])
            scale = np.ones(X.shape[1])
        h = symmetric_hash(np.column_stack([X, y]))
        return KNNModel((X - center) / scale, y, center, scale, int(self.n_neighbors), h)


class KNNModel(FittedLearner):
    kind = "knn"
    chunk_size = 256

    def __init__(self, X, y, center, scale, n_neighbors, training_hash):
        self.X = X
        self.y = y
        self.center = center
        self.scale = scale
        self.n_neighbors = n_neighbors
        self.n_features = X.shape[1]
        self.training_hash = training_hash

    def _predict(self, X):
        Q = (X - self.center) / self.scale
        k = self.n_neighbors
        out = np.empty(Q.shape[0])
        for start in range(0, Q.shape[0], self.chunk_size):
            q = Q[start : start + self.chunk_size]
            d2 = ((q[:, None, :] - self.X[None, :, :]) ** 2).sum(axis=2)
            if k == self.X.shape[0]:
                idx = np.broadcast_to(np.arange(k), d2.shape)
            else:
                idx = np.argsort(d2, axis=1, kind="stable")[:, :k]
            out[start : start + q.shape[0]] = self.y[idx].mean(axis=1)
        return out


# -- random forest -----------------------------------------------------------


@dataclass(frozen=True)
class ForestSpec:
    """Bagged regression trees with random feature subsets at each split.

    ``max_features`` is the number of candidate features per split (an int)
    or a fraction of them (a float in (0, 1]); ``None`` means ``d // 3``,
    at least one. ``max_depth=0`` gives stumps that predict the bootstrap
    mean, i.e. a (noisy) constant predictor.
    """

    n_trees: int = 100
    max_depth: int | None = None
    min_leaf: int = 5
    max_features: int | float | None = None
    kind: ClassVar[str] = "forest"
    min_rows: ClassVar[int] = 1

    def __post_init__(self):
        if int(self.n_trees) != self.n_trees or self.n_trees < 1:
            raise BadHyperparameter(f"n_trees must be >= 1, got {self.n_trees}")
        if self.max_depth is not None and (int(self.max_depth) != self.max_depth or self.max_depth < 0):
            raise BadHyperparameter(f"max_depth must be >= 0 or None, got {self.max_depth}")
        if int(self.min_leaf) != self.min_leaf or self.min_leaf < 1:
            raise BadHyperparameter(f"min_leaf must be >= 1, got {self.min_leaf}")
        mf = self.max_features
        if mf is not None:
            if isinstance(mf, float) and not 0 < mf <= 1:
                raise BadHyperparameter(f"fractional max_features must be in (0, 1], got {mf}")
            if isinstance(mf, int) and mf < 1:
                raise BadHyperparameter(f"max_features must be >= 1, got {mf}")

    def _n_split_features(self, d):
        mf = self.max_features
        if mf is None:
            return max(1, d // 3)
        if isinstance(mf, float):
            return max(1, int(mf * d))
        return min(int(mf), d)

    def fit(self, X, y) -> "ForestModel":
        X, y = canonical_rows(X, y)
        n, d = X.shape
        seed = symmetric_hash(np.column_stack([X, y]))
        mtry = self._n_split_features(d)
        trees = []
        for j in range(self.n_trees):
            # tree j's stream depends only on (seed, j)
            rng = np.random.Generator(
                np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(j,)))
            )
            idx = rng.integers(0, n, n)
            tree_seed = int(rng.integers(0, 2**31 - 1))
            if self.max_depth == 0:
                trees.append(float(y[idx].mean()))
                continue
            tree = DecisionTreeRegressor(
                max_depth=self.max_depth,
                min_samples_leaf=int(self.min_leaf),
                max_features=mtry,
                random_state=tree_seed,
            )
            tree.fit(X[idx], y[idx])
            trees.append(tree)
        return ForestModel(trees, d, seed)


class ForestModel(FittedLearner):
    kind = "forest"

    def __init__(self, trees, n_features, training_hash):
        self.trees = trees
        self.n_features = n_features
        self.training_hash = training_hash

    def _predict(self, X):
        preds = np.empty((len(self.trees), X.shape[0]))
        for j, tree in enumerate(self.trees):
            preds[j] = tree if isinstance(tree, float) else tree.predict(X)
        return preds.mean(axis=0)


LearnerSpec = RidgeSpec | KNNSpec | ForestSpec

_SPECS = {cls.kind: cls for cls in (RidgeSpec, KNNSpec, ForestSpec)}


def fit(spec: LearnerSpec, X, y) -> FittedLearner:
    """Fit ``spec`` on training rows ``(X, y)``."""
    return spec.fit(X, y)


def predict(model: FittedLearner, x) -> np.ndarray | float:
    return model.predict(x)


def _parse_value(text):
    low = text.strip().lower()
    if low in ("none", ""):
        return None
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_learner(text: str) -> LearnerSpec:
    """Parse ``"kind:key=value,key=value"``, e.g. ``"forest:n_trees=50,min_leaf=5"``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind not in _SPECS:
        raise BadHyperparameter(f"unknown learner kind {kind!r}; expected one of {sorted(_SPECS)}")
    kwargs = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise BadHyperparameter(f"malformed learner option {item!r}")
        kwargs[key.strip()] = _parse_value(value)
    try:
        return _SPECS[kind](**kwargs)
    except TypeError as exc:
        raise BadHyperparameter(f"bad options for {kind}: {exc}") from exc


def format_learner(spec: LearnerSpec) -> str:
    fields = {k: v for k, v in vars(spec).items()}
    return spec.kind + ":" + ",".join(f"{k}={v}" for k, v in fields.items())
