"""Least-squares weight fitting for linear-in-weight networks."""

from collections import namedtuple
import numpy as np
import scipy.linalg

from pmsmadp.common.errors import DimensionMismatch, RankDeficient

__all__ = ['FitResult', 'fit_least_squares', 'CONDITION_LIMIT']

CONDITION_LIMIT = 1e12

FitResult = namedtuple('FitResult', ['weights', 'residual', 'max_residual', 'condition'])
FitResult.__doc__ = """Result of `fit_least_squares()`: the weights, the
Frobenius norm and the largest absolute entry of `F·W − T`, and the
condition number of the column-scaled feature matrix."""

def fit_least_squares(features, targets, condition_limit=CONDITION_LIMIT):
    """Solves min ‖F·W − T‖ for W.

    `features` is an `(n, terms)` matrix and `targets` an `(n,)` vector or
    `(n, m)` matrix; the weights have shape `(terms,)` or `(terms, m)`
    accordingly. The columns of F are scaled to unit norm and the problem
    is solved through an economic QR decomposition. Raises `RankDeficient`
    if the scaled matrix has a condition number above `condition_limit`."""
    F = np.asarray(features, dtype=float)
    T = np.asarray(targets, dtype=float)
    if F.ndim != 2:
        raise DimensionMismatch(2, F.ndim, 'feature matrix rank')
    vector = T.ndim == 1
    if vector:
        T = T[:, None]
    if T.ndim != 2 or T.shape[0] != F.shape[0]:
        raise DimensionMismatch(F.shape[0], T.shape[0], 'target rows')
    if not np.all(np.isfinite(F)):
        raise ValueError("feature matrix contains non-finite entries")
    if F.shape[0] < F.shape[1]:
        raise RankDeficient(float('inf'), condition_limit)

    norms = np.linalg.norm(F, axis=0)
    if np.any(norms == 0.0):
        raise RankDeficient(float('inf'), condition_limit)
    Fs = F / norms
    Q, R = scipy.linalg.qr(Fs, mode='economic')
    condition = np.linalg.cond(R)
    if not condition <= condition_limit:
        raise RankDeficient(condition, condition_limit)
    W = scipy.linalg.solve_triangular(R, Q.T @ T) / norms[:, None]

    E = F @ W - T
    residual = float(np.linalg.norm(E))
    max_residual = float(np.max(np.abs(E))) if E.size else 0.0
    if vector:
        W = W[:, 0]
    return FitResult(W, residual, max_residual, float(condition))
