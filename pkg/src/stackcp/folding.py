"""Random K-fold partitions of the training units.

A fold scheme is stored as a vector of fold labels rather than as the
permutation matrix it stands for: units and folds are both 0-based, so
``scheme.assignment[i]`` is the fold of unit ``i``.
"""

from dataclasses import dataclass

import numpy as np

from ._random import make_rng
from .errors import BadFoldCount, IndexOutOfRange


@dataclass(frozen=True)
class FoldScheme:
    n: int
    n_folds: int
    assignment: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.intp).copy()
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)
        if a.shape != (self.n,):
            raise ValueError(f"assignment must have length n={self.n}")
        if self.n_folds < 1 or (self.n and (a.min() < 0 or a.max() >= self.n_folds)):
            raise ValueError("fold labels must lie in 0..n_folds-1")

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.n_folds)

    def fold_of(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"unit {i} not in 0..{self.n - 1}")
        return int(self.assignment[i])

    def fold_indices(self, k: int) -> np.ndarray:
        self._check_fold(k)
        return np.flatnonzero(self.assignment == k)

    def exclusion_indices(self, k: int) -> np.ndarray:
        """Sorted indices of the units outside fold ``k``."""
        self._check_fold(k)
        return np.flatnonzero(self.assignment != k)

    def restrict(self, n: int) -> "FoldScheme":
        """Scheme for the first ``n`` units, keeping their fold labels."""
        if not 0 < n <= self.n:
            raise IndexOutOfRange(f"cannot restrict {self.n} units to {n}")
        return FoldScheme(n, self.n_folds, self.assignment[:n], self.seed)

    def _check_fold(self, k):
        if not 0 <= k < self.n_folds:
            raise IndexOutOfRange(f"fold {k} not in 0..{self.n_folds - 1}")


def sample_fold_scheme(n: int, n_folds: int, seed: int) -> FoldScheme:
    """Uniformly random near-even partition of ``n`` units into ``n_folds`` folds.

    A random permutation of the units is dealt round-robin into the folds, so
    fold sizes differ by at most one (the first ``n % n_folds`` folds get the
    extra unit) and each unit is equally likely to land in any fold.
    """
    if n_folds < 2 or n_folds > n:
        raise BadFoldCount(f"need 2 <= K <= n, got K={n_folds}, n={n}")
    perm = make_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=np.intp)
    assignment[perm] = np.arange(n) % n_folds
    return FoldScheme(n, n_folds, assignment, seed)


def fold_of(scheme: FoldScheme, i: int) -> int:
    return scheme.fold_of(i)


def exclusion_indices(scheme: FoldScheme, k: int) -> np.ndarray:
    return scheme.exclusion_indices(k)
