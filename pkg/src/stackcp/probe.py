"""Empirical stability of the feasible stack against the symmetric one.

Per trial, ``n + 1`` units are drawn and the last one plays the future pair.
The symmetric stack cross-fits all ``n + 1`` units (the future pair's own
response included, which is only possible in simulation). The feasible stack
cross-fits the first ``n`` units with the same fold labels and predicts the
future pair with learners trained on all ``n`` units. Both stacks are then
scored at the true response ``y = Y_{n+1}``.

For every tolerance ``eps`` the report gives

* ``delta_hat(eps)``: fraction of trials where either score moved by at
  least ``eps / 2`` between the two stacks;
* ``h_hat(eps)``: fraction of trials where the symmetric test score lies in
  ``(r_hat - eps, r_hat]``.

These are Monte-Carlo estimates, not certificates: they say how much slack
``delta + h(eps)`` the coverage of the feasible stack loses on this
generator, for these learners, at this sample size.
"""

from dataclasses import dataclass

import numpy as np

from ._random import child_seed
from .conformal import ConformalConfig, conformity_scores, fit_meta
from .folding import sample_fold_scheme
from .linalg import rank_one_inverse_update
from .stack import cross_fit, fit_full, predict_features
from .synthetic import SyntheticSpec, generate


@dataclass(frozen=True)
class TrialScores:
    r0_sym: float
    r_hat_sym: float
    r0_feas: float
    r_hat_feas: float

    @property
    def max_deviation(self) -> float:
        return max(abs(self.r0_feas - self.r0_sym), abs(self.r_hat_feas - self.r_hat_sym))


@dataclass(frozen=True)
class StabilityReport:
    eps_grid: np.ndarray
    delta_hat: np.ndarray
    h_hat: np.ndarray
    trials: int
    deviations: np.ndarray
    covered_sym: float
    covered_feas: float

    def rows(self):
        for e, d, h in zip(self.eps_grid, self.delta_hat, self.h_hat):
            yield float(e), float(d), float(h)

    def best_slack(self) -> tuple[float, float]:
        """``(eps, delta_hat + h_hat)`` minimizing the estimated slack."""
        total = self.delta_hat + self.h_hat
        i = int(np.argmin(total))
        return float(self.eps_grid[i]), float(total[i])


def probe_trial(data, specs, n_folds, alpha, seed, denom_floor=1e-6) -> TrialScores:
    """Symmetric and feasible score pairs for one draw of ``n + 1`` units."""
    n = data.n - 1
    scheme = sample_fold_scheme(n + 1, n_folds, seed)

    sym = cross_fit(data, specs, scheme)
    state = fit_meta(sym.Z[:n], sym.y[:n])
    z0 = sym.Z[n]
    B = rank_one_inverse_update(state.A, z0)
    s_sym = _scores(z0, data.y[n], state, alpha, B, denom_floor)

    train = data.subset(np.arange(n))
    feas = cross_fit(train, specs, scheme.restrict(n))
    state_f = fit_meta(feas.Z, feas.y)
    z0_f = predict_features(fit_full(train, specs), data.X[n : n + 1])[0]
    B_f = rank_one_inverse_update(state_f.A, z0_f)
    s_feas = _scores(z0_f, data.y[n], state_f, alpha, B_f, denom_floor)
    return TrialScores(s_sym.r0, s_sym.r_hat, s_feas.r0, s_feas.r_hat)


def _scores(z0, y0, state, alpha, B, floor):
    return conformity_scores(z0, y0, state, alpha, B, ConformalConfig(alpha=alpha, denom_floor=floor))


def summarize(trials: list[TrialScores], eps_grid) -> StabilityReport:
    eps = np.asarray(eps_grid, dtype=np.float64)
    dev = np.array([t.max_deviation for t in trials])
    r0 = np.array([t.r0_sym for t in trials])
    r_hat = np.array([t.r_hat_sym for t in trials])
    delta_hat = np.array([np.mean(dev >= e / 2) for e in eps])
    h_hat = np.array([np.mean((r0 > r_hat - e) & (r0 <= r_hat)) for e in eps])
    covered_feas = np.mean([t.r0_feas <= t.r_hat_feas for t in trials])
    return StabilityReport(eps, delta_hat, h_hat, len(trials), dev, float(np.mean(r0 <= r_hat)), float(covered_feas))


def stability_probe(
    generator: SyntheticSpec,
    specs,
    n_folds: int,
    alpha: float,
    eps_grid,
    trials: int,
    seed: int,
    denom_floor: float = 1e-6,
) -> StabilityReport:
    """Estimate ``delta(eps)`` and ``h(eps)`` over ``trials`` simulated draws.

    ``generator.n`` is the training size ``n``; each trial draws ``n + 1``
    units with a seed derived from ``seed`` and the trial number.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    specs = tuple(specs)
    results = []
    for t in range(trials):
        gen = SyntheticSpec(
            generator.n + 1,
            generator.d,
            generator.function,
            generator.noise,
            generator.sigma,
            child_seed(seed, "probe-data", t),
        )
        data = generate(gen)
        results.append(probe_trial(data, specs, n_folds, alpha, child_seed(seed, "probe-folds", t), denom_floor))
    return summarize(results, eps_grid)
