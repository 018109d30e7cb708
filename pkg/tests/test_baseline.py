import numpy as np
import pytest

from stackcp.baseline import SplitConformal, split_conformal_baseline
from stackcp.errors import CalibrationTooSmall
from stackcp.evaluation import evaluate
from stackcp.learners import KNNSpec, RidgeSpec
from stackcp.stack import Dataset
from stackcp.synthetic import SyntheticSpec, generate


def test_noise_free_linear_gives_zero_width(rng):
    X = rng.uniform(size=(60, 2))
    y = 1.0 + X @ np.array([2.0, -1.0])
    model = SplitConformal([RidgeSpec(0.0)], calib_fraction=0.3, seed=1).fit(Dataset(X, y))
    assert model.quantile(0.1) < 1e-9
    iv = model.intervals(X[:3], 0.1)
    np.testing.assert_allclose([i.point for i in iv], y[:3], atol=1e-9)


def test_quantile_rank():
    # 19 calibration residuals at alpha=0.1 -> rank ceil(0.9 * 20) = 18
    data = generate(SyntheticSpec(n=63, d=1, seed=2))
    model = SplitConformal([RidgeSpec(1.0)], calib_fraction=19 / 63, seed=0).fit(data)
    assert model.residuals_.size == 19
    assert model.quantile(0.1) == model.residuals_[17]


def test_calibration_too_small():
    data = generate(SyntheticSpec(n=40, d=1, seed=2))
    model = SplitConformal([RidgeSpec(1.0)], calib_fraction=0.1, seed=0).fit(data)
    assert model.residuals_.size == 4
    with pytest.raises(CalibrationTooSmall):
        model.quantile(0.1)
    with pytest.raises(CalibrationTooSmall):
        split_conformal_baseline(data, 0.1, [RidgeSpec(1.0)], 0.1, seed=0)
    with pytest.raises(ValueError):
        SplitConformal([RidgeSpec(1.0)], calib_fraction=1.0)


def test_average_coverage():
    covs = []
    for s in range(20):
        data = generate(SyntheticSpec(n=700, d=2, function="sine", seed=100 + s))
        train, test = data.subset(np.arange(400)), data.subset(np.arange(400, 700))
        predict = split_conformal_baseline(train, 0.3, [RidgeSpec(1.0), KNNSpec(10)], 0.1, seed=s)
        covs.append(evaluate(predict(test.X), test.y).coverage)
    assert 0.88 <= np.mean(covs) <= 0.92
