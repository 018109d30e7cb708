"""Small dense linear algebra used by the conformal meta-learner.

Matrices here are tiny (M x M with M the number of base learners), so
everything is plain float64 numpy arrays.
"""

import numpy as np
from scipy import linalg as sla

from .errors import DenominatorNearZero, DimensionMismatch, SingularGram

MAX_CONDITION = 1e12
DENOMINATOR_TOL = 1e-12


def _as_matrix(a, name):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    return a


def _as_vector(x, name):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {x.shape}")
    return x


def symmetrize(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def gram_inverse(Z: np.ndarray) -> np.ndarray:
    """Return ``(Z^T Z)^{-1}`` computed through a Cholesky factorization.

    Raises
    ------
    SingularGram
        If the factorization fails or the condition number estimated from the
        Cholesky diagonal, ``(max L_ii / min L_ii)^2``, exceeds ``1e12``.
    """
    Z = _as_matrix(Z, "Z")
    n, M = Z.shape
    if M < 1 or n < M:
        raise SingularGram(f"need n >= M >= 1, got n={n}, M={M}")
    if not np.all(np.isfinite(Z)):
        raise SingularGram("Z has non-finite entries")
    G = Z.T @ Z
    try:
        L = sla.cholesky(G, lower=True)
    except sla.LinAlgError as exc:
        raise SingularGram("Gram matrix is not positive definite") from exc
    diag = np.abs(np.diag(L))
    if diag.min() == 0.0:
        raise SingularGram("Gram matrix is singular")
    cond = (diag.max() / diag.min()) ** 2
    if not cond <= MAX_CONDITION:
        raise SingularGram(f"Gram condition estimate {cond:.3g} exceeds {MAX_CONDITION:.0e}")
    A = sla.cho_solve((L, True), np.eye(M))
    return symmetrize(A)


def rank_one_inverse_update(A: np.ndarray, z0: np.ndarray) -> np.ndarray:
    """Sherman-Morrison: given ``A = G^{-1}`` return ``(G + z0 z0^T)^{-1}``.

    ``A`` is assumed symmetric, so ``z0^T A = (A z0)^T``. The result is
    symmetrized to keep round-off from breaking symmetry.
    """
    A = _as_matrix(A, "A")
    z0 = _as_vector(z0, "z0")
    if A.shape != (z0.size, z0.size):
        raise DimensionMismatch(f"A has shape {A.shape} but z0 has length {z0.size}")
    Az = A @ z0
    denom = 1.0 + z0 @ Az
    if abs(denom) < DENOMINATOR_TOL:
        raise DenominatorNearZero(f"1 + z0'Az0 = {denom!r}")
    return symmetrize(A - np.outer(Az, Az) / denom)


def matvec(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    A = _as_matrix(A, "A")
    x = _as_vector(x, "x")
    if A.shape[1] != x.size:
        raise DimensionMismatch(f"cannot multiply {A.shape} by vector of length {x.size}")
    return A @ x


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B
