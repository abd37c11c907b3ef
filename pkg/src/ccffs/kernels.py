"""Linear-algebra substrate: centring, orthogonalisation and coordinate matrices."""

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, NotInRangeError

#: Relative norm below which an orthogonalised column counts as degenerate.
RANK_TOL = 1e-10
#: Re-orthogonalise when a residual keeps less than this fraction of its norm.
REORTH_RATIO = 0.1
#: Relative Frobenius tolerance for the coordinate-matrix reconstruction.
RANGE_TOL = 1e-9


@dataclass(frozen=True)
class DataMatrix:
    """Dense ``N x k`` numeric table with column names."""

    values: np.ndarray
    col_names: Sequence[str] = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DimensionError(f"expected a non-empty 2-d matrix, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix contains NaN or infinite entries")
        names = list(self.col_names) or [f"x{i}" for i in range(values.shape[1])]
        if len(names) != values.shape[1]:
            raise DimensionError(f"{len(names)} column names for {values.shape[1]} columns")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "col_names", tuple(names))

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class CenteredMatrix:
    values: np.ndarray
    source_means: np.ndarray

    def uncenter(self):
        return self.values + self.source_means


@dataclass(frozen=True)
class OrthonormalBasis:
    values: np.ndarray

    @property
    def z(self):
        return self.values.shape[1]


class Orthogonalized(NamedTuple):
    """Orthogonal (not normalised) columns plus a per-column degeneracy mask."""

    basis: np.ndarray
    degenerate: np.ndarray


def as_matrix(M):
    """Return a float 2-d view of a DataMatrix, CenteredMatrix, basis or array."""
    if isinstance(M, (DataMatrix, CenteredMatrix, OrthonormalBasis)):
        M = M.values
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    return M


def center(M):
    values = as_matrix(M)
    if not np.all(np.isfinite(values)):
        raise ValueError("cannot centre a matrix with non-finite entries")
    means = values.mean(axis=0)
    return CenteredMatrix(values - means, means)


def orthonormal_basis(M, z):
    """Orthonormal ``N x z`` basis whose range contains the columns of ``M``.

    Built from the left factor of an SVD. When ``z`` exceeds the rank the
    trailing columns are the next left singular vectors, so ``U`` is still
    orthonormal. Column signs are whatever LAPACK returns.
    """
    A = as_matrix(M)
    N, k = A.shape
    if z > N:
        raise DimensionError(f"basis size z={z} exceeds the number of rows N={N}")
    full = z > min(N, k)
    U, s, _ = scipy.linalg.svd(A, full_matrices=full, check_finite=False)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
    if z < rank:
        raise DimensionError(f"basis size z={z} is below the rank {rank} of the matrix")
    return OrthonormalBasis(np.ascontiguousarray(U[:, :z]))


def coordinates(M, U):
    """Coordinate matrix ``[M]_U = U^T M``; raises if ``M`` is not in range(U)."""
    A = as_matrix(M)
    B = as_matrix(U)
    C = B.T @ A
    scale = np.linalg.norm(A)
    residual = np.linalg.norm(B @ C - A)
    if residual > RANGE_TOL * max(scale, np.finfo(float).tiny):
        raise NotInRangeError(
            f"columns not in range of basis: residual {residual:.3e} vs norm {scale:.3e}"
        )
    return C


def _project_out(w, W, norms_sq):
    for j in range(W.shape[1]):
        if norms_sq[j] > 0:
            w = w - (W[:, j] @ w / norms_sq[j]) * W[:, j]
    return w


def orthogonalize_against(f, W=None):
    """Remove from ``f`` its components along the orthogonal columns of ``W``.

    Uses the modified Gram-Schmidt update order with one extra pass when
    cancellation is heavy. Returns ``(w, degenerate)`` where ``degenerate``
    is true when ``|w| <= RANK_TOL * |f|``.
    """
    f = np.asarray(f, dtype=float).ravel()
    f_norm = np.linalg.norm(f)
    if W is None or as_matrix(W).shape[1] == 0:
        return f.copy(), bool(f_norm == 0)
    W = as_matrix(W)
    if W.shape[0] != f.shape[0]:
        raise DimensionError(f"vector of length {f.shape[0]} vs basis with {W.shape[0]} rows")
    norms_sq = np.einsum("ij,ij->j", W, W)
    w = _project_out(f, W, norms_sq)
    if np.linalg.norm(w) < REORTH_RATIO * f_norm:
        w = _project_out(w, W, norms_sq)
    w_norm = np.linalg.norm(w)
    degenerate = bool(w_norm <= RANK_TOL * f_norm)
    if degenerate:
        w = np.zeros_like(w)
    return w, degenerate


def gram_schmidt(M):
    """Orthogonalise the columns of ``M`` left to right.

    Columns are orthogonal but keep their natural scale (the first column is
    returned unchanged). Near-dependent columns are zeroed and flagged.
    """
    A = as_matrix(M)
    W = np.zeros_like(A)
    degenerate = np.zeros(A.shape[1], dtype=bool)
    for i in range(A.shape[1]):
        keep = ~degenerate[:i]
        W[:, i], degenerate[i] = orthogonalize_against(A[:, i], W[:, :i][:, keep])
    return Orthogonalized(W, degenerate)
