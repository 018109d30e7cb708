"""End-to-end runs: stacked full conformal vs. the split baseline."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from ._random import child_seed, make_rng
from .baseline import SplitConformal
from .config import ExperimentConfig
from .conformal import (
    ConformalConfig,
    brute_force_interval,
    conformal_rank,
    default_grid,
    fit_meta,
    full_cp_interval,
    full_cp_intervals,
)
from .errors import ConfigError
from .evaluation import RECORD_FIELDS, REPORT_FIELDS, EvaluationReport, evaluate, interval_records, render_report
from .folding import sample_fold_scheme
from .io import load_csv, write_csv
from .probe import StabilityReport, stability_probe
from .stack import Dataset, cross_fit, fit_full, predict_features
from .synthetic import generate, gaussian_second_level

log = logging.getLogger(__name__)

STACKED = "Stacked CP"
SPLIT = "Split CP"


def load_data(cfg: ExperimentConfig) -> tuple[Dataset, int]:
    if cfg.is_synthetic:
        spec = cfg.synthetic.with_seed(child_seed(cfg.seed, "synthetic"))
        return generate(spec), 0
    return load_csv(cfg.dataset, cfg.response)


def split_sizes(cfg: ExperimentConfig, n: int) -> tuple[int, int]:
    n_train = int(round(cfg.train_frac * n))
    if not 1 <= n_train < n:
        raise ConfigError(f"train_frac={cfg.train_frac} leaves no test or no training data (n={n})")
    return n_train, n - n_train


def check_preconditions(cfg: ExperimentConfig, n_train: int) -> None:
    """Reject configurations whose ranks or folds cannot work, before any fitting."""
    if cfg.folds > n_train:
        raise ConfigError(f"folds={cfg.folds} exceeds training size {n_train}")
    n_cal = int(round(cfg.calib_frac * n_train))
    for a in cfg.alphas:
        k = conformal_rank(a, n_train)
        if k > n_train:
            raise ConfigError(f"alpha={a} needs rank {k} among {n_train} training scores")
        k_cal = conformal_rank(a, n_cal)
        if n_cal < 1 or k_cal > n_cal:
            raise ConfigError(f"alpha={a} needs rank {k_cal} among {n_cal} calibration residuals")


@dataclass
class RunResult:
    reports: list[EvaluationReport]
    table: str
    files: list[Path]


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> RunResult:
    data, dropped = load_data(cfg)
    n_train, n_test = split_sizes(cfg, data.n)
    check_preconditions(cfg, n_train)
    if dropped:
        log.warning("dropped %d incomplete rows from %s", dropped, cfg.dataset)

    perm = make_rng(cfg.seed, "split").permutation(data.n)
    train = data.subset(np.sort(perm[:n_train]))
    test = data.subset(np.sort(perm[n_train:]))

    scheme = sample_fold_scheme(n_train, cfg.folds, child_seed(cfg.seed, "folding"))
    log.info("cross-fitting %d learners on %d folds", len(cfg.learners), cfg.folds)
    second = cross_fit(train, cfg.learners, scheme)
    state = fit_meta(second.Z, second.y)
    Z0 = predict_features(fit_full(train, cfg.learners), test.X)

    baseline = SplitConformal(cfg.learners, cfg.calib_frac, cfg.folds, child_seed(cfg.seed, "baseline"))
    baseline.fit(train)

    reports, per_alpha = [], {}
    for a in cfg.alphas:
        ccfg = ConformalConfig(a, cfg.epsilon, cfg.u, cfg.denom_floor, cfg.expand_bracket)
        intervals = full_cp_intervals(state, Z0, ccfg)
        reports.append(evaluate(intervals, test.y, STACKED, a, data.name))
        reports.append(evaluate(baseline.intervals(test.X, a), test.y, SPLIT, a, data.name))
        per_alpha[a] = interval_records(intervals, test.y)

    table, records = render_report(reports)
    files = []
    if write:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "reports.csv", REPORT_FIELDS, records)
        files.append(out / "reports.csv")
        for a, recs in per_alpha.items():
            path = out / f"intervals_{a!r}.csv"
            write_csv(path, RECORD_FIELDS, [r.as_record() for r in recs])
            files.append(path)
        (out / "report.txt").write_text(table + "\n")
        manifest = {
            "version": __version__,
            "seed": cfg.seed,
            "config": cfg.as_dict(),
            "n_train": n_train,
            "n_test": n_test,
            "dropped_rows": dropped,
            "quartiles": "linear interpolation (type 7)",
            "truncated": {f"{r.method}@{r.alpha!r}": r.n_truncated for r in reports},
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        files += [out / "report.txt", out / "manifest.json"]
    return RunResult(reports, table, files)


@dataclass(frozen=True)
class OracleCase:
    n: int
    n_learners: int
    seed: int
    alpha: float
    max_error: float
    tolerance: float
    truncated: bool

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def oracle_case(n: int, n_learners: int, seed: int, alpha: float = 0.1, grid_size: int = 2000, u: float = 10.0) -> OracleCase:
    """Compare bisection limits with the brute-force grid limits on one instance."""
    rng = make_rng(seed, "oracle", n, n_learners)
    Z, y = gaussian_second_level(n + 1, n_learners, rng)
    Z, y, z0 = Z[:n], y[:n], Z[n]
    state = fit_meta(Z, y)
    cfg = ConformalConfig(alpha=alpha, u=u)
    iv = full_cp_interval(state, z0, cfg)
    grid = default_grid(state, z0, u, grid_size)
    bf = brute_force_interval(Z, y, z0, alpha, grid, cfg.denom_floor)
    step = float(np.max(np.diff(grid)))
    tol = 2 * cfg.tolerance(state.sd) + step
    err = max(abs(iv.lower - bf.lower), abs(iv.upper - bf.upper))
    return OracleCase(n, n_learners, seed, alpha, err, tol, iv.truncated)


def run_oracle_check(sizes=(30, 50, 80), seeds=range(10), alpha: float = 0.1) -> list[OracleCase]:
    return [oracle_case(n, 1 + s % 4, s, alpha) for n in sizes for s in seeds]


def default_probe_eps(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.probe_eps is not None:
        return np.asarray(cfg.probe_eps)
    return np.geomspace(1e-3, 1.0, 16) * max(cfg.synthetic.sigma, 1e-12)


def run_stability_probe(cfg: ExperimentConfig, alpha: float | None = None) -> StabilityReport:
    a = cfg.alphas[-1] if alpha is None else alpha
    report = stability_probe(
        cfg.synthetic,
        cfg.learners,
        cfg.folds,
        a,
        default_probe_eps(cfg),
        cfg.probe_trials,
        child_seed(cfg.seed, "probe"),
        cfg.denom_floor,
    )
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "stability.csv",
        ("eps", "delta_hat", "h_hat", "trials"),
        [{"eps": e, "delta_hat": d, "h_hat": h, "trials": report.trials} for e, d, h in report.rows()],
    )
    return report
