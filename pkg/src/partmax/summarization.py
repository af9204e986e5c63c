"""Frame-subset summarization with the objective ``det(I + X_S)``.

``X`` is a Gaussian-kernel Gram matrix over precomputed frame features.
The objective is monotone and supermodular, so its curvature is zero and
only the diminishing-return ratio needs bounding.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from ._backend import get_kernels
from .errors import (
    BudgetExceedsSegment,
    FactorizationFailure,
    NonFiniteFeature,
    NotSymmetric,
)
from .matroid import PartitionMatroid
from .oracle import BaseOracle
from .quantify import NonSubmodParams, clamp01

JACOBI_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100


def load_features_csv(path) -> np.ndarray:
    """One row per frame; a non-numeric first row is taken as a header."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                if lineno == 0 and not rows:
                    continue
                raise NonFiniteFeature(f"{path}:{lineno + 1}: non-numeric value")
    X = np.array(rows, dtype=float)
    if X.ndim != 2 or X.size == 0:
        raise NonFiniteFeature(f"{path}: no feature rows")
    return X


def save_matrix_csv(M, path):
    np.savetxt(path, np.asarray(M), delimiter=",", fmt="%.17g")


def load_matrix_csv(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=","))


def pairwise_sq_dists(F: np.ndarray) -> np.ndarray:
    sq = np.sum(F * F, axis=1)
    D = sq[:, None] + sq[None, :] - 2.0 * F @ F.T
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, 0.0)
    return (D + D.T) / 2.0


def median_bandwidth(F: np.ndarray) -> float:
    """Median pairwise Euclidean distance between distinct frames; 1.0 when
    every pair coincides."""
    n = F.shape[0]
    if n < 2:
        return 1.0
    d = np.sqrt(pairwise_sq_dists(F)[np.triu_indices(n, 1)])
    h = float(np.median(d))
    return h if h > 0 else 1.0


def gaussian_gram(features, bandwidth: float | str = "median") -> np.ndarray:
    """``X_ij = exp(-|x_i - x_j|^2 / (2 h^2))``."""
    F = np.atleast_2d(np.asarray(features, dtype=float))
    if not np.all(np.isfinite(F)):
        raise NonFiniteFeature("features contain NaN or inf")
    if bandwidth == "median" or bandwidth is None:
        h = median_bandwidth(F)
    else:
        h = float(bandwidth)
        if not h > 0:
            raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    X = np.exp(-pairwise_sq_dists(F) / (2.0 * h * h))
    np.fill_diagonal(X, 1.0)
    return X


def logdet_spd(M: np.ndarray) -> float:
    """``log det`` of a symmetric positive-definite matrix via Cholesky."""
    if M.shape[0] == 0:
        return 0.0
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        raise FactorizationFailure("matrix is not numerically positive definite")
    return 2.0 * float(np.sum(np.log(np.diag(L))))


class DetOracle(BaseOracle):
    """``det(I + X_S)``; ``inf`` once the determinant overflows a float.

    With ``log_objective=True`` returns ``log det(I + X_S)`` instead.  That
    is a different set function with different non-submodularity
    parameters and is offered only for very large selections.
    """

    def __init__(self, X, log_objective: bool = False):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise NotSymmetric("Gram matrix must be square")
        if not np.allclose(X, X.T, atol=1e-12, rtol=0):
            raise NotSymmetric("Gram matrix must be symmetric")
        self.X = X
        self.n = X.shape[0]
        self.log_objective = log_objective

    def logdet(self, S) -> float:
        idx = sorted(S)
        A = self.X[np.ix_(idx, idx)] + np.eye(len(idx))
        return logdet_spd(A)

    def value(self, S) -> float:
        ld = self.logdet(S)
        if self.log_objective:
            return ld
        if ld > 709.0:
            return math.inf
        return math.exp(ld)


def det_objective(X, log_objective: bool = False) -> DetOracle:
    return DetOracle(X, log_objective)


def cofactor_det(M) -> float:
    """Determinant by Laplace expansion along the first row (small inputs)."""
    M = [list(map(float, r)) for r in np.asarray(M)]
    n = len(M)
    if n == 0:
        return 1.0
    if n == 1:
        return M[0][0]
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * cofactor_det(minor)
    return total


def symmetric_eigenvalues(A, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS,
                          backend: str | None = None) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi, descending.

    Iterates until every off-diagonal entry is below ``tol`` times
    ``max(1, max|A|)``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetric("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if not np.allclose(A, A.T, atol=1e-12 * scale, rtol=0):
        raise NotSymmetric("matrix is not symmetric")
    A = (A + A.T) / 2.0
    vals, sweeps = get_kernels(backend).jacobi_eigenvalues(A, tol * scale, max_sweeps)
    if sweeps < 0:
        raise ArithmeticError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(vals)[::-1]


def lemma4_gamma_bound(A, b: int, tol: float = 1e-9) -> NonSubmodParams:
    """Lower bound on gamma for ``det(I + X_S)`` from the spectrum of
    ``A = I + X``; alpha is zero.

    ``gamma' = (lam_min - 1)/(lam_max - 1) * prod_{i<=b} 1/lam_i`` with
    eigenvalues in descending order.  When ``lam_max <= 1 + tol`` the
    kernel part is numerically zero, the objective is flat, and
    ``gamma' = 1`` is returned with ``degenerate=True``.
    """
    lam = symmetric_eigenvalues(A)
    if lam[0] <= 1.0 + tol:
        return NonSubmodParams(1.0, 0.0, "bound", degenerate=True)
    b = min(int(b), len(lam))
    log_prod = -float(np.sum(np.log(lam[:b])))
    ratio = max(lam[-1] - 1.0, 0.0) / (lam[0] - 1.0)
    gamma = ratio * math.exp(log_prod)
    return NonSubmodParams(clamp01(gamma), 0.0, "bound")


def segment_partition(n: int, k: int, per_segment_budget: int) -> PartitionMatroid:
    """``k`` contiguous segments, earlier segments taking the remainder."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    q, r = divmod(n, k)
    if per_segment_budget > q:
        raise BudgetExceedsSegment(
            f"budget {per_segment_budget} exceeds the smallest segment ({q} frames)")
    groups, start = [], 0
    for i in range(k):
        size = q + 1 if i < r else q
        groups.append(list(range(start, start + size)))
        start += size
    return PartitionMatroid(groups, [per_segment_budget] * k)
