"""Definition-based correlation measures and principal angles.

The canonical correlation routines here are the slow reference engine: every
call centres and whitens both blocks from scratch.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DegenerateInputError, InternalConsistencyError
from .kernels import RANK_TOL, as_matrix

#: Round-off slack when clipping squared correlations to [0, 1].
CLIP_TOL = 1e-9


@dataclass(frozen=True)
class CcaResult:
    """Canonical correlation analysis of two blocks.

    ``r_squared`` is sorted in descending order. ``weights_x[:, k]`` and
    ``weights_y[:, k]`` project the centred blocks onto the k-th pair of
    canonical variates, each of unit Euclidean norm.
    """

    r_squared: np.ndarray
    weights_x: np.ndarray
    weights_y: np.ndarray
    angles: np.ndarray

    @property
    def ssc(self):
        return float(np.sum(self.r_squared))


def _centered(v):
    v = np.asarray(v, dtype=float).ravel()
    return v - v.mean()


def pearson(x, y):
    xc = _centered(x)
    yc = _centered(y)
    nx, ny = np.linalg.norm(xc), np.linalg.norm(yc)
    if nx == 0 or ny == 0:
        raise DegenerateInputError("Pearson correlation of a zero-variance vector",
                                   block="x" if nx == 0 else "y")
    return float(np.clip(xc @ yc / (nx * ny), -1.0, 1.0))


def _check_full_rank(s, block):
    if s.size == 0 or s[0] == 0 or s[-1] <= RANK_TOL * s[0]:
        raise DegenerateInputError(
            f"centred {block} is rank deficient (singular Gram matrix)", block=block
        )


def _whiten(A, block):
    U, s, Vt = scipy.linalg.svd(A, full_matrices=False, check_finite=False)
    _check_full_rank(s, block)
    return U, s, Vt


def _clip_unit(values):
    if np.any(values > 1 + CLIP_TOL) or np.any(values < -CLIP_TOL):
        raise InternalConsistencyError(
            f"squared correlation outside [0, 1] beyond round-off: {values}"
        )
    return np.clip(values, 0.0, 1.0)


def multiple_correlation_sq(X, y):
    """Squared multiple correlation via the normal equations."""
    Xc = as_matrix(X)
    Xc = Xc - Xc.mean(axis=0)
    yc = _centered(y)
    if np.linalg.norm(yc) == 0:
        raise DegenerateInputError("response has zero variance", block="y")
    s = np.linalg.svd(Xc, compute_uv=False)
    _check_full_rank(s, "X")
    gram = Xc.T @ Xc
    alpha = np.linalg.solve(gram, Xc.T @ yc)
    fitted = Xc @ alpha
    value = (yc @ fitted) / (yc @ yc)
    return float(_clip_unit(np.array([value]))[0])


def _squared_canonical(Xc, Yc):
    Ux, _, _ = _whiten(Xc, "X")
    Uy, _, _ = _whiten(Yc, "Y")
    s = scipy.linalg.svd(Ux.T @ Uy, compute_uv=False, check_finite=False)
    return _clip_unit(s[: min(Xc.shape[1], Yc.shape[1])] ** 2)


def _centered_blocks(X, Y):
    Xc = as_matrix(X)
    Yc = as_matrix(Y)
    if Xc.shape[0] != Yc.shape[0]:
        raise ValueError(f"row mismatch: X has {Xc.shape[0]} rows, Y has {Yc.shape[0]}")
    return Xc - Xc.mean(axis=0), Yc - Yc.mean(axis=0)


def cca(X, Y):
    """Canonical correlations between the columns of ``X`` and ``Y``.

    The generalised eigenproblem is solved in its symmetric form: both
    centred blocks are whitened by a thin SVD and the singular values of
    the cross product of the whitened bases are the canonical correlations.
    """
    Xc, Yc = _centered_blocks(X, Y)
    N, n = Xc.shape
    m = Yc.shape[1]
    if N <= n + m:
        warnings.warn(f"N={N} <= n+m={n + m}: canonical correlations may be trivially 1",
                      RuntimeWarning, stacklevel=2)
    Ux, sx, Vxt = _whiten(Xc, "X")
    Uy, sy, Vyt = _whiten(Yc, "Y")
    A, s, Bt = scipy.linalg.svd(Ux.T @ Uy, full_matrices=False, check_finite=False)
    k = min(n, m)
    r_squared = _clip_unit(s[:k] ** 2)
    weights_x = Vxt.T @ (A[:, :k] / sx[:, None])
    weights_y = Vyt.T @ (Bt.T[:, :k] / sy[:, None])
    angles = np.arccos(np.sqrt(r_squared))
    return CcaResult(r_squared, weights_x, weights_y, angles)


def ssc(X, Y):
    """Sum of squared canonical correlation coefficients."""
    Xc, Yc = _centered_blocks(X, Y)
    return float(np.sum(_squared_canonical(Xc, Yc)))


def ssc_trace(X, Y):
    """SSC as ``tr(Sxx^-1 Sxy Syy^-1 Syx)``, evaluated from raw Gram matrices."""
    Xc, Yc = _centered_blocks(X, Y)
    sxx, syy, sxy = Xc.T @ Xc, Yc.T @ Yc, Xc.T @ Yc
    return float(np.trace(np.linalg.solve(sxx, sxy) @ np.linalg.solve(syy, sxy.T)))


def principal_angles(A, B):
    """Principal angles (radians, ascending) between range(A) and range(B).

    No centring is applied.
    """
    Qa, _, _ = _whiten(as_matrix(A), "A")
    Qb, _, _ = _whiten(as_matrix(B), "B")
    s = scipy.linalg.svd(Qa.T @ Qb, compute_uv=False, check_finite=False)
    s = np.clip(s[: min(Qa.shape[1], Qb.shape[1])], 0.0, 1.0)
    return np.arccos(s)
