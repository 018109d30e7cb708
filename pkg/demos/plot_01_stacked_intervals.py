"""
Stacked full conformal intervals on synthetic data
==================================================

Fit a three-learner stack on 400 noisy draws of a sine curve, then build a
full conformal interval for each of 200 held-out points and compare with a
split conformal baseline around the same stack.
"""

import numpy as np

from stackcp import ConformalConfig, cross_fit, fit_full, fit_meta, full_cp_intervals, predict_features
from stackcp.baseline import SplitConformal
from stackcp.evaluation import evaluate, render_report
from stackcp.folding import sample_fold_scheme
from stackcp.learners import ForestSpec, KNNSpec, RidgeSpec
from stackcp.synthetic import SyntheticSpec, generate

data = generate(SyntheticSpec(n=600, d=2, function="sine", seed=1))
train, test = data.subset(np.arange(400)), data.subset(np.arange(400, 600))
specs = [RidgeSpec(1.0), KNNSpec(15), ForestSpec(n_trees=30)]

# out-of-fold predictions give the second-level design Z (one column per learner)
second = cross_fit(train, specs, sample_fold_scheme(train.n, 5, seed=1))
state = fit_meta(second.Z, second.y)
print("meta-learner weights:", np.round(state.beta, 3))

# at prediction time each base learner is refit on all 400 training rows
Z0 = predict_features(fit_full(train, specs), test.X)

reports = []
for alpha in (0.2, 0.1):
    intervals = full_cp_intervals(state, Z0, ConformalConfig(alpha=alpha))
    reports.append(evaluate(intervals, test.y, "Stacked CP", alpha, "sine"))
    split = SplitConformal(specs, calib_fraction=0.3, seed=1).fit(train)
    reports.append(evaluate(split.intervals(test.X, alpha), test.y, "Split CP", alpha, "sine"))

print(render_report(reports)[0])

# a single interval, up close
iv = full_cp_intervals(state, Z0[:1], ConformalConfig(alpha=0.1))[0]
print(f"\nx = {test.X[0].round(3)}  y = {test.y[0]:.3f}")
print(f"point {iv.point:.3f}, interval [{iv.lower:.3f}, {iv.upper:.3f}], width {iv.width:.3f}")
