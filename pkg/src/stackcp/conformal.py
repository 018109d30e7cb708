"""Full conformal prediction for a least-squares meta-learner.

The meta-learner regresses the response on the ``M`` base-learner
predictions (no intercept column is added). For a test point ``z0`` and a
candidate response ``y0`` the augmented fit on the ``n + 1`` pairs is obtained
from ``A = (Z^T Z)^{-1}`` with one Sherman-Morrison update, so scanning
candidate responses never refits from scratch.

Conformity scores are absolute residuals divided by ``1 + delta``, where
``delta`` is the fitted value of a second least-squares regression of the
absolute residuals on ``Z``. That regression is unconstrained, so
``1 + delta`` can be tiny or negative; denominators are floored at
``denom_floor`` and the number of floored denominators is reported.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, RankOutOfRange, SingularGram
from .linalg import gram_inverse, rank_one_inverse_update

MAX_BISECTION_STEPS = 200


def conformal_rank(alpha: float, n: int) -> int:
    """1-based rank ``ceil((1 - alpha)(n + 1))`` in exact arithmetic.

    ``alpha`` goes through its shortest decimal repr, so ``0.1`` is treated as
    exactly 1/10 and ``conformal_rank(0.1, 9) == 9`` rather than 10.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    try:
        frac = Fraction(repr(float(alpha)))
    except ValueError:
        return math.ceil((1 - alpha) * (n + 1) - 1e-12)
    return math.ceil((1 - frac) * (n + 1))


def check_rank(alpha: float, n: int) -> int:
    k = conformal_rank(alpha, n)
    if k > n:
        raise RankOutOfRange(
            f"alpha={alpha} needs rank {k} among n={n} scores; use a larger alpha or more data"
        )
    return k


@dataclass(frozen=True)
class ConformalConfig:
    """Search and scoring settings.

    ``epsilon`` is the bisection tolerance in response units; ``None`` means
    ``1e-3`` times the standard deviation of the training responses. The
    search bracket around the point prediction is ``u`` standard deviations
    wide on each side. With ``expand_bracket`` a side whose bracket end is
    still conformal is searched again with ``u`` doubled, up to
    ``max_expansions`` times.
    """

    alpha: float = 0.1
    epsilon: float | None = None
    u: float = 10.0
    denom_floor: float = 1e-6
    expand_bracket: bool = False
    max_expansions: int = 8

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.u > 0:
            raise ValueError(f"u must be positive, got {self.u}")
        if not self.denom_floor > 0:
            raise ValueError(f"denom_floor must be positive, got {self.denom_floor}")

    def tolerance(self, sd: float) -> float:
        return self.epsilon if self.epsilon is not None else 1e-3 * sd


@dataclass(frozen=True)
class MetaState:
    A: np.ndarray
    beta: np.ndarray
    sd: float
    Z: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def n_learners(self) -> int:
        return self.Z.shape[1]


@dataclass(frozen=True)
class ScorePair:
    r0: float
    r_hat: float
    n_floored: int = 0


@dataclass(frozen=True)
class PredictionInterval:
    lower: float
    upper: float
    point: float
    truncated_low: bool = False
    truncated_high: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def truncated(self) -> bool:
        return self.truncated_low or self.truncated_high

    def contains(self, y: float) -> bool:
        return self.lower <= y <= self.upper


def fit_meta(Z, y) -> MetaState:
    """Least-squares meta-learner on the second-level data ``(Z, y)``."""
    Z = np.asarray(Z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if Z.ndim != 2 or y.ndim != 1 or Z.shape[0] != y.size:
        raise DimensionMismatch(f"Z {Z.shape} and y {y.shape} do not conform")
    if Z.shape[0] <= Z.shape[1]:
        raise SingularGram(f"need more rows than learners, got Z of shape {Z.shape}")
    A = gram_inverse(Z)
    beta = A @ (Z.T @ y)
    sd = float(np.std(y, ddof=1))
    return MetaState(A, beta, sd, Z, y)


def _rowdot(U, v):
    return (U * v).sum(axis=1)


def _combine(coef, Z):
    """``coef @ Z.T`` built column by column so each row's value is
    independent of how many rows are processed together."""
    out = coef[:, :1] * Z[:, 0]
    for j in range(1, Z.shape[1]):
        out += coef[:, j : j + 1] * Z[:, j]
    return out


def _scores(state, Z0, y0, Bz0, k, floor):
    """Batched score computation for test rows ``Z0`` at candidates ``y0``.

    Returns ``(r0, r_hat, n_floored)`` arrays of length ``len(y0)``. Only
    elementwise operations and row reductions are used, so results do not
    depend on batch composition.
    """
    Z, y, A = state.Z, state.y, state.A
    beta0 = state.beta + (y0 - _rowdot(Z0, state.beta))[:, None] * Bz0
    yhat0 = _rowdot(Z0, beta0)
    yres = np.abs(y - _combine(beta0, Z))
    yres0 = np.abs(y0 - yhat0)
    zty = np.column_stack([(yres * Z[:, j]).sum(axis=1) for j in range(Z.shape[1])])
    beta_res = _combine(zty, A)
    beta_res0 = beta_res + (yres0 - _rowdot(Z0, beta_res))[:, None] * Bz0
    denom = 1.0 + _combine(beta_res0, Z)
    denom0 = 1.0 + _rowdot(Z0, beta_res0)
    n_floored = (denom < floor).sum(axis=1) + (denom0 < floor)
    r = yres / np.maximum(denom, floor)
    r_hat = np.partition(r, k - 1, axis=1)[:, k - 1]
    r0 = yres0 / np.maximum(denom0, floor)
    return r0, r_hat, n_floored


def conformity_scores(z0, y0, state: MetaState, alpha, B, cfg: ConformalConfig | None = None) -> ScorePair:
    """Scores of the candidate pair ``(z0, y0)`` and the rank-k training score.

    ``B`` must be ``rank_one_inverse_update(state.A, z0)``.
    """
    floor = (cfg or ConformalConfig(alpha=alpha)).denom_floor
    k = check_rank(alpha, state.n)
    z0 = np.asarray(z0, dtype=np.float64)
    if z0.shape != (state.n_learners,):
        raise DimensionMismatch(f"z0 must have length {state.n_learners}")
    Bz0 = np.asarray(B) @ z0
    r0, r_hat, nf = _scores(state, z0[None, :], np.array([float(y0)]), Bz0[None, :], k, floor)
    return ScorePair(float(r0[0]), float(r_hat[0]), int(nf[0]))


def _search(state, Z0, Bz0, start, bracket_end, eps, k, floor):
    """Bisection from ``start`` (conformal) towards ``bracket_end``.

    Returns the last conformal midpoint for every row. Works for either side:
    ``bracket_end`` below ``start`` searches the lower limit.
    """
    inside = start.copy()
    outside = bracket_end.copy()
    for _ in range(MAX_BISECTION_STEPS):
        active = np.abs(inside - outside) > eps
        if not active.any():
            break
        idx = np.flatnonzero(active)
        mid = (outside[idx] + inside[idx]) / 2.0
        r0, r_hat, _ = _scores(state, Z0[idx], mid, Bz0[idx], k, floor)
        ok = r0 <= r_hat
        inside[idx[ok]] = mid[ok]
        outside[idx[~ok]] = mid[~ok]
    return inside


def _is_conformal(state, Z0, Bz0, y0, k, floor):
    r0, r_hat, _ = _scores(state, Z0, y0, Bz0, k, floor)
    return r0 <= r_hat


def full_cp_intervals(state: MetaState, Z0, cfg: ConformalConfig, chunk_size: int = 512) -> list[PredictionInterval]:
    """Full conformal intervals for every row of ``Z0``.

    Each limit is found by bisection between the point prediction and the
    point prediction -/+ ``u * sd``, stopping once the bracket is narrower
    than the tolerance. A side is flagged as truncated when the far end of
    its bracket is itself conformal, i.e. the conformal set may extend past
    the searched range.
    """
    Z0 = np.asarray(Z0, dtype=np.float64)
    if Z0.ndim == 1:
        Z0 = Z0[None, :]
    if Z0.ndim != 2 or Z0.shape[1] != state.n_learners:
        raise DimensionMismatch(f"Z0 must have {state.n_learners} columns, got shape {Z0.shape}")
    k = check_rank(cfg.alpha, state.n)
    out = []
    for start in range(0, Z0.shape[0], chunk_size):
        out.extend(_intervals_chunk(state, Z0[start : start + chunk_size], cfg, k))
    return out


def _intervals_chunk(state, Z0, cfg, k):
    m = Z0.shape[0]
    floor = cfg.denom_floor
    eps = cfg.tolerance(state.sd)
    # rows of B z0 for every test point, B = rank-one update of A by z0
    Bz0 = np.empty_like(Z0)
    for i in range(m):
        Bz0[i] = rank_one_inverse_update(state.A, Z0[i]) @ Z0[i]
    point = _rowdot(Z0, state.beta)
    u = np.full(m, float(cfg.u))
    lower = _search(state, Z0, Bz0, point, point - u * state.sd, eps, k, floor)
    upper = _search(state, Z0, Bz0, point, point + u * state.sd, eps, k, floor)
    spread = state.sd > 0
    trunc_lo = spread & _is_conformal(state, Z0, Bz0, point - u * state.sd, k, floor)
    trunc_hi = spread & _is_conformal(state, Z0, Bz0, point + u * state.sd, k, floor)
    if cfg.expand_bracket:
        for side, trunc, limit in ((-1.0, trunc_lo, lower), (1.0, trunc_hi, upper)):
            u_side = u.copy()
            for _ in range(cfg.max_expansions):
                idx = np.flatnonzero(trunc)
                if idx.size == 0:
                    break
                u_side[idx] *= 2.0
                end = point[idx] + side * u_side[idx] * state.sd
                limit[idx] = _search(state, Z0[idx], Bz0[idx], point[idx], end, eps, k, floor)
                trunc[idx] = _is_conformal(state, Z0[idx], Bz0[idx], end, k, floor)
    return [
        PredictionInterval(float(lo), float(hi), float(p), bool(tl), bool(th))
        for lo, hi, p, tl, th in zip(lower, upper, point, trunc_lo, trunc_hi)
    ]


def full_cp_interval(state: MetaState, z0, cfg: ConformalConfig) -> PredictionInterval:
    """Full conformal interval for a single test point (see :func:`full_cp_intervals`)."""
    return full_cp_intervals(state, np.asarray(z0, dtype=np.float64)[None, :], cfg)[0]


def augmented_refit_scores(Z, y, z0, y_candidates, alpha, denom_floor=1e-6):
    """Scores from explicit refits on the ``n + 1`` augmented rows.

    No rank-one updates: the augmented Gram matrix is inverted directly and
    both the response and the absolute-residual regressions are recomputed
    for every candidate. Returns ``(r0, r_hat)`` arrays.
    """
    Z = np.asarray(Z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    z0 = np.asarray(z0, dtype=np.float64)
    cand = np.atleast_1d(np.asarray(y_candidates, dtype=np.float64))
    n = Z.shape[0]
    k = check_rank(alpha, n)
    Za = np.vstack([Z, z0])
    G_inv = np.linalg.inv(Za.T @ Za)
    H = Za @ G_inv @ Za.T
    Y = np.vstack([np.repeat(y[:, None], cand.size, axis=1), cand[None, :]])
    res = np.abs(Y - H @ Y)
    delta = H @ res
    scores = res / np.maximum(1.0 + delta, denom_floor)
    r_hat = np.sort(scores[:n], axis=0)[k - 1]
    return scores[n], r_hat


def brute_force_interval(Z, y, z0, alpha, grid, denom_floor=1e-6) -> PredictionInterval:
    """Smallest and largest grid value accepted by the conformal test.

    Reference implementation used to check :func:`full_cp_intervals`.
    """
    Z = np.asarray(Z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    grid = np.sort(np.atleast_1d(np.asarray(grid, dtype=np.float64)))
    beta = np.linalg.solve(Z.T @ Z, Z.T @ y)
    point = float(np.asarray(z0) @ beta)
    r0, r_hat = augmented_refit_scores(Z, y, z0, grid, alpha, denom_floor)
    ok = r0 <= r_hat
    if not ok.any():
        raise ValueError("no grid value is conformal; widen or refine the grid")
    idx = np.flatnonzero(ok)
    return PredictionInterval(
        float(grid[idx[0]]),
        float(grid[idx[-1]]),
        point,
        bool(ok[0] and grid.size > 1),
        bool(ok[-1] and grid.size > 1),
    )


def default_grid(state: MetaState, z0, u: float = 10.0, size: int = 2000) -> np.ndarray:
    """Evenly spaced candidates over ``point -/+ u * sd``, point included."""
    point = float(np.asarray(z0) @ state.beta)
    half = size // 2
    left = np.linspace(point - u * state.sd, point, half + 1)
    right = np.linspace(point, point + u * state.sd, size - half)
    return np.concatenate([left, right[1:]])
