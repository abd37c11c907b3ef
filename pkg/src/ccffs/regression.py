"""Ordinary least squares with an intercept, and the RMSE-driven wrapper search."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DegenerateInputError
from .kernels import RANK_TOL, as_matrix


@dataclass(frozen=True)
class OlsFit:
    coefficients: np.ndarray  # intercept first
    rmse: float
    r_squared: float


def ols_fit(X, y):
    """Least-squares fit of ``y`` on ``[1, X]`` via a QR factorisation.

    ``X`` may have zero columns, giving the intercept-only model. RMSE uses
    the training residuals with divisor ``N``.
    """
    y = np.asarray(y, dtype=float).ravel()
    N = y.shape[0]
    X = np.empty((N, 0)) if X is None else as_matrix(X)
    if X.shape[0] != N:
        raise ValueError(f"X has {X.shape[0]} rows but y has {N}")
    design = np.column_stack([np.ones(N), X])
    Q, R = scipy.linalg.qr(design, mode="economic", check_finite=False)
    diag = np.abs(np.diag(R))
    if design.shape[1] > N or diag.min() <= RANK_TOL * diag.max():
        raise DegenerateInputError("design matrix with intercept is rank deficient", block="X")
    coef = scipy.linalg.solve_triangular(R, Q.T @ y, check_finite=False)
    resid = y - design @ coef
    rss = float(resid @ resid)
    yc = y - y.mean()
    tss = float(yc @ yc)
    if tss == 0:
        raise DegenerateInputError("response has zero variance", block="y")
    return OlsFit(coef, float(np.sqrt(rss / N)), 1.0 - rss / tss)


def wrapper_greedy(X, y, t):
    """Forward selection minimising the training RMSE of an OLS model.

    Ties go to the lowest column index.
    """
    X = as_matrix(X)
    n = X.shape[1]
    if not 1 <= t <= n:
        raise ValueError(f"t must be in [1, {n}], got {t}")
    selected = []
    remaining = list(range(n))
    for _ in range(t):
        best, best_rmse = None, np.inf
        for i in remaining:
            try:
                rmse = ols_fit(X[:, selected + [i]], y).rmse
            except DegenerateInputError:
                continue
            if rmse < best_rmse:
                best, best_rmse = i, rmse
        if best is None:
            raise DegenerateInputError("no candidate yields a full-rank design", block="X")
        selected.append(best)
        remaining.remove(best)
    return selected
