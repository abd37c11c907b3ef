"""Greedy forward selection ranked by the sum of squared canonical correlations.

Three interchangeable engines share one driver:

* ``DEFINITION`` recomputes the full canonical correlation of
  ``(X_s, x_i)`` against ``Y`` for every candidate. Slow, used as a baseline.
* ``H_CORRELATION`` works on the centred data. Responses are orthogonalised
  once into ``V``; candidates are kept orthogonal to the selected basis
  ``W_s`` and scored by summed squared correlations with the columns of ``V``.
* ``THETA_ANGLE`` does the same in the coordinate space of an orthonormal
  basis of ``(X_C, Y_C)``, shrinking every vector from ``N`` to ``n + m``
  entries after a one-off SVD.
"""

import enum
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import correlation
from .dataset import from_arrays
from .exceptions import (
    DegenerateDatasetError,
    DegenerateInputError,
    DimensionError,
    NoInformativeCandidateError,
)
from .kernels import (
    RANK_TOL,
    REORTH_RATIO,
    center,
    coordinates,
    gram_schmidt,
    orthogonalize_against,
    orthonormal_basis,
)

#: Increments closer than this to the maximum count as tied.
TIE_TOL = 1e-12
#: Candidate columns per evaluation block; fixed so threading cannot change results.
CHUNK = 256
DEFINITION_CHUNK = 16
THREADS_ENV = "CCFFS_THREADS"


class Mode(str, enum.Enum):
    DEFINITION = "definition"
    H_CORRELATION = "h"
    THETA_ANGLE = "theta"


def resolve_mode(mode):
    if mode is None or mode == "auto":
        return None
    if isinstance(mode, Mode):
        return mode
    try:
        return Mode(mode)
    except ValueError:
        raise ValueError(
            f"unknown method {mode!r}; expected auto, definition, h or theta"
        ) from None


def auto_mode(N, n, m):
    """Theta when there are more instances than features plus responses."""
    return Mode.THETA_ANGLE if N > n + m else Mode.H_CORRELATION


def resolve_threads(threads=None):
    """Thread count: ``CCFFS_THREADS`` wins, then ``threads``, then the CPU count."""
    env = os.environ.get(THREADS_ENV)
    if env is not None and env.strip():
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return value
    if threads is not None:
        if int(threads) < 1:
            raise ValueError(f"thread count must be positive, got {threads}")
        return int(threads)
    return os.cpu_count() or 1


@dataclass
class SelectionState:
    """Working state of one greedy run.

    Column ``k`` of ``w_r`` belongs to feature ``remaining[k]``. ``f_x`` and
    ``f_y`` are the coordinate matrices in theta mode, the centred data in
    h mode and the raw data in definition mode (where ``v``, ``w_s`` and
    ``w_r`` stay ``None``).
    """

    mode: Mode
    selected: List[int]
    remaining: List[int]
    f_x: np.ndarray
    f_y: np.ndarray
    v: Optional[np.ndarray]
    w_s: Optional[np.ndarray]
    w_r: Optional[np.ndarray]
    criterion_total: float = 0.0
    f_norms: Optional[np.ndarray] = None
    threads: int = 1

    @property
    def p(self):
        return len(self.selected)

    @property
    def q(self):
        return len(self.remaining)


@dataclass(frozen=True)
class CriterionBreakdown:
    """Criterion increments for the remaining candidates.

    ``terms[k, j]`` is the squared correlation (h mode) or squared cosine
    (theta mode) between candidate ``k`` and response basis vector ``j``;
    it is ``None`` in definition mode.
    """

    candidates: np.ndarray
    increments: np.ndarray
    degenerate: np.ndarray
    terms: Optional[np.ndarray] = None

    def as_pairs(self):
        return list(zip(self.candidates.tolist(), self.increments.tolist()))


@dataclass(frozen=True)
class Selection:
    iteration: int
    index: int
    name: str
    increment: float
    cumulative_ssc: float


@dataclass
class SelectionReport:
    mode: Mode
    selections: List[Selection] = field(default_factory=list)
    iteration_seconds: List[float] = field(default_factory=list)
    N: int = 0
    n: int = 0
    m: int = 0
    threads: int = 1

    @property
    def indices(self):
        return [s.index for s in self.selections]

    @property
    def names(self):
        return [s.name for s in self.selections]

    @property
    def increments(self):
        return [s.increment for s in self.selections]

    @property
    def cumulative(self):
        return [s.cumulative_ssc for s in self.selections]

    def to_dict(self):
        return {
            "mode": self.mode.value,
            "selections": [
                {
                    "iteration": s.iteration,
                    "index": s.index,
                    "name": s.name,
                    "increment": s.increment,
                    "cumulative_ssc": s.cumulative_ssc,
                }
                for s in self.selections
            ],
            "n": self.n,
            "m": self.m,
            "N": self.N,
        }


def _colnorms_sq(A):
    return np.einsum("ij,ij->j", A, A)


def init(dataset, mode_override=None, threads=None):
    """Centre the data, choose the engine and build the response basis."""
    X = dataset.X.values
    Y = dataset.Y.values
    N, n = X.shape
    m = Y.shape[1]
    if N < 2:
        raise DegenerateDatasetError(f"need at least 2 instances, got {N}")
    mode = resolve_mode(mode_override)
    if mode is None:
        mode = auto_mode(N, n, m)
    threads = resolve_threads(threads)

    Xc = center(X).values
    Yc = center(Y).values
    if not np.any(Xc):
        raise DegenerateDatasetError("every feature column is constant")

    if mode is Mode.DEFINITION:
        # The reference engine only needs the raw blocks; reject unusable Y up front.
        if gram_schmidt(Yc).degenerate.any():
            raise DegenerateDatasetError("centred responses are rank deficient")
        return SelectionState(
            mode, [], list(range(n)), X, Y, None, None, None,
            f_norms=np.linalg.norm(Xc, axis=0), threads=threads,
        )

    if mode is Mode.THETA_ANGLE:
        # z = n + m is the smallest basis allowed; forced theta runs with N < n + m use z = N.
        z = min(n + m, N)
        U = orthonormal_basis(np.hstack([Xc, Yc]), z)
        f_x = coordinates(Xc, U)
        f_y = coordinates(Yc, U)
    else:
        f_x, f_y = Xc, Yc

    basis = gram_schmidt(f_y)
    if basis.degenerate.any():
        bad = [dataset.Y.col_names[j] for j in np.flatnonzero(basis.degenerate)]
        raise DegenerateDatasetError(f"centred responses are rank deficient at {bad}")
    return SelectionState(
        mode,
        [],
        list(range(n)),
        f_x,
        f_y,
        basis.basis,
        np.empty((f_x.shape[0], 0)),
        f_x.copy(),
        f_norms=np.linalg.norm(f_x, axis=0),
        threads=threads,
    )


def _fast_block(w_r, v, v_norms_sq, f_norms):
    gram = w_r.T @ v
    w_norms_sq = _colnorms_sq(w_r)
    degenerate = w_norms_sq <= (RANK_TOL * f_norms) ** 2
    denom = np.where(degenerate, 1.0, w_norms_sq)[:, None] * v_norms_sq[None, :]
    terms = gram**2 / denom
    terms[degenerate] = 0.0
    return terms, degenerate


def _definition_block(state, candidates):
    X, Y = state.f_x, state.f_y
    increments = np.zeros(len(candidates))
    degenerate = np.zeros(len(candidates), dtype=bool)
    base = X[:, state.selected]
    for k, i in enumerate(candidates):
        if state.f_norms[i] == 0:
            degenerate[k] = True
            continue
        try:
            total = correlation.ssc(np.column_stack([base, X[:, i]]), Y)
        except DegenerateInputError:
            degenerate[k] = True
            continue
        increments[k] = total - state.criterion_total
    return increments, degenerate


def _map_chunks(func, n_items, threads, size=CHUNK):
    bounds = [(a, min(a + size, n_items)) for a in range(0, n_items, size)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(bounds))) as pool:
            return list(pool.map(lambda b: func(*b), bounds))
    return [func(a, b) for a, b in bounds]


def evaluate_candidates(state):
    """Criterion increment of every remaining candidate.

    Degenerate candidates (numerically inside the span of the selected
    features) get an increment of exactly zero.
    """
    candidates = np.array(state.remaining, dtype=int)
    if state.mode is Mode.DEFINITION:
        parts = _map_chunks(
            lambda a, b: _definition_block(state, candidates[a:b]),
            len(candidates), state.threads, DEFINITION_CHUNK,
        )
        increments = np.concatenate([p[0] for p in parts])
        degenerate = np.concatenate([p[1] for p in parts])
        return CriterionBreakdown(candidates, increments, degenerate)

    v_norms_sq = _colnorms_sq(state.v)
    f_norms = state.f_norms[candidates]
    parts = _map_chunks(
        lambda a, b: _fast_block(state.w_r[:, a:b], state.v, v_norms_sq, f_norms[a:b]),
        len(candidates), state.threads,
    )
    terms = np.vstack([p[0] for p in parts])
    degenerate = np.concatenate([p[1] for p in parts])
    return CriterionBreakdown(candidates, terms.sum(axis=1), degenerate, terms)


def choose(breakdown):
    """Position of the best non-degenerate candidate; ties go to the lowest index."""
    ok = ~breakdown.degenerate
    if not ok.any():
        raise NoInformativeCandidateError(
            "all remaining candidates lie in the span of the selected features"
        )
    best = breakdown.increments[ok].max()
    tied = np.flatnonzero(ok & (breakdown.increments >= best - TIE_TOL))
    return int(tied[np.argmin(breakdown.candidates[tied])])


def _absorb(state, pos):
    w_new = state.w_r[:, pos]
    w_s = np.column_stack([state.w_s, w_new])
    w_r = np.delete(state.w_r, pos, axis=1)
    if w_r.shape[1]:
        before = _colnorms_sq(w_r)
        w_r -= np.outer(w_new, (w_new @ w_r) / (w_new @ w_new))
        after = _colnorms_sq(w_r)
        for k in np.flatnonzero(after < REORTH_RATIO**2 * before):
            w_r[:, k], _ = orthogonalize_against(w_r[:, k], w_s)
    state.w_s, state.w_r = w_s, w_r


def select_next(state):
    """Move the best candidate into the selected set.

    Returns ``(state, chosen_index, increment)``; ``state`` is updated in place.
    """
    if not state.remaining:
        raise DimensionError("no candidates remain")
    breakdown = evaluate_candidates(state)
    pos = choose(breakdown)
    chosen = state.remaining[pos]
    increment = float(breakdown.increments[pos])
    if state.mode is not Mode.DEFINITION:
        _absorb(state, pos)
    del state.remaining[pos]
    state.selected.append(chosen)
    state.criterion_total += increment
    return state, chosen, increment


def run(dataset, t, mode_override=None, threads=None):
    """Greedily select ``t`` features; returns a :class:`SelectionReport`.

    The set-up cost (centring, SVD, response basis) is charged to the
    first iteration's timing.
    """
    n = dataset.n_features
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    if t > n:
        raise ValueError(f"t exceeds feature count ({t} > {n})")
    start = time.perf_counter()
    state = init(dataset, mode_override, threads)
    report = SelectionReport(
        state.mode, N=dataset.n_instances, n=n, m=dataset.n_responses, threads=state.threads
    )
    names = dataset.feature_names
    for iteration in range(1, t + 1):
        state, chosen, increment = select_next(state)
        now = time.perf_counter()
        report.iteration_seconds.append(now - start)
        start = now
        report.selections.append(
            Selection(iteration, chosen, names[chosen], increment, state.criterion_total)
        )
    return report


def select(X, Y, t, mode=None, threads=None):
    """Convenience wrapper taking plain arrays."""
    return run(from_arrays(X, Y), t, mode, threads)
