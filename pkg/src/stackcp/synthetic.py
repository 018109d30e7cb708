"""Synthetic regression data for tests, demos and the stability probe."""

from dataclasses import dataclass, replace

import numpy as np

from ._random import make_rng
from .stack import Dataset

FUNCTIONS = ("linear", "sine", "friedman")
NOISES = ("gaussian", "hetero")


@dataclass(frozen=True)
class SyntheticSpec:
    """``y = f(x) + noise`` with ``x`` uniform on the unit cube.

    Ground truths (all offset so responses sit well away from zero):

    * ``linear``: ``10 + sum_j 4 * 2**-j * x_j``
    * ``sine``: ``10 + 3 sin(2 pi x_0) + 2 x_1``
    * ``friedman``: Friedman #1, needs ``d >= 5``

    ``noise="hetero"`` scales the Gaussian noise by ``0.5 + x_0``.
    """

    n: int = 500
    d: int = 3
    function: str = "linear"
    noise: str = "gaussian"
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.function not in FUNCTIONS:
            raise ValueError(f"function must be one of {FUNCTIONS}")
        if self.noise not in NOISES:
            raise ValueError(f"noise must be one of {NOISES}")
        if self.function == "friedman" and self.d < 5:
            raise ValueError("friedman needs d >= 5")

    def with_seed(self, seed: int) -> "SyntheticSpec":
        return replace(self, seed=seed)


def ground_truth(function: str, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if function == "linear":
        w = 4.0 * 0.5 ** np.arange(X.shape[1])
        return 10.0 + X @ w
    if function == "sine":
        f = 10.0 + 3.0 * np.sin(2 * np.pi * X[:, 0])
        if X.shape[1] > 1:
            f = f + 2.0 * X[:, 1]
        return f
    if function == "friedman":
        return (
            10 * np.sin(np.pi * X[:, 0] * X[:, 1])
            + 20 * (X[:, 2] - 0.5) ** 2
            + 10 * X[:, 3]
            + 5 * X[:, 4]
        )
    raise ValueError(f"unknown function {function!r}")


def generate(spec: SyntheticSpec) -> Dataset:
    rng = make_rng(spec.seed, "synthetic")
    X = rng.uniform(size=(spec.n, spec.d))
    scale = spec.sigma * (0.5 + X[:, 0]) if spec.noise == "hetero" else spec.sigma
    y = ground_truth(spec.function, X) + scale * rng.standard_normal(spec.n)
    return Dataset(X, y, name=f"synthetic-{spec.function}")


def gaussian_second_level(n: int, n_learners: int, rng: np.random.Generator, level: float = 10.0):
    """Exchangeable ``(Z, y)`` rows that look like stacked predictions.

    A latent signal ``f ~ N(level, 2^2)`` is observed by every column of ``Z``
    with its own Gaussian error, and ``y = f + N(0, 1)``. Returns ``(Z, y)``.
    """
    f = rng.normal(level, 2.0, size=n)
    spread = rng.uniform(0.3, 1.5, size=n_learners)
    Z = f[:, None] + rng.standard_normal((n, n_learners)) * spread
    y = f + rng.standard_normal(n)
    return Z, y
