"""Split (inductive) conformal baseline around a stacked point predictor."""

import numpy as np

from ._random import make_rng
from .conformal import PredictionInterval, conformal_rank, fit_meta
from .errors import CalibrationTooSmall
from .folding import sample_fold_scheme
from .stack import Dataset, cross_fit, fit_full, predict_features


class SplitConformal:
    """Stacked point predictor fit on a proper training part, calibrated on the rest.

    The point predictor is the same stack as in full conformal mode (out of
    fold base predictions, least-squares meta-learner, full-sample base
    learners at prediction time), trained only on the proper training part.
    Intervals are ``yhat(x) -/+ q`` where ``q`` is the calibration absolute
    residual of rank ``ceil((1 - alpha)(n_cal + 1))``.
    """

    def __init__(self, specs, calib_fraction: float = 0.3, n_folds: int = 5, seed: int = 0):
        if not 0 < calib_fraction < 1:
            raise ValueError(f"calib_fraction must lie in (0, 1), got {calib_fraction}")
        self.specs = tuple(specs)
        self.calib_fraction = calib_fraction
        self.n_folds = n_folds
        self.seed = seed

    def fit(self, train: Dataset) -> "SplitConformal":
        n_cal = int(round(self.calib_fraction * train.n))
        if n_cal < 1 or n_cal >= train.n:
            raise CalibrationTooSmall(f"calibration split of {n_cal} from {train.n} rows")
        perm = make_rng(self.seed, "split-baseline").permutation(train.n)
        proper = train.subset(np.sort(perm[n_cal:]))
        calib = train.subset(np.sort(perm[:n_cal]))
        scheme = sample_fold_scheme(proper.n, self.n_folds, self.seed)
        second = cross_fit(proper, self.specs, scheme)
        self.beta_ = fit_meta(second.Z, second.y).beta
        self.stack_ = fit_full(proper, self.specs)
        self.residuals_ = np.sort(np.abs(calib.y - self.predict(calib.X)))
        return self

    def predict(self, X) -> np.ndarray:
        return predict_features(self.stack_, X) @ self.beta_

    def quantile(self, alpha: float) -> float:
        n_cal = self.residuals_.size
        k = conformal_rank(alpha, n_cal)
        if k > n_cal:
            raise CalibrationTooSmall(f"alpha={alpha} needs rank {k} among {n_cal} calibration residuals")
        return float(self.residuals_[k - 1])

    def intervals(self, X, alpha: float) -> list[PredictionInterval]:
        q = self.quantile(alpha)
        return [PredictionInterval(float(p - q), float(p + q), float(p)) for p in self.predict(X)]


def split_conformal_baseline(train: Dataset, calib_fraction, specs, alpha, seed, n_folds: int = 5):
    """Fit the baseline and return a function mapping test features to intervals."""
    model = SplitConformal(specs, calib_fraction, n_folds, seed).fit(train)
    model.quantile(alpha)  # fail early on a too-small calibration set
    return lambda X: model.intervals(X, alpha)
