"""Seven-sample iris fixture with the published walkthrough values."""

from dataclasses import dataclass

import numpy as np

from . import correlation
from .dataset import dummy_encode, from_arrays
from .selector import evaluate_candidates, init, select_next

FEATURE_NAMES = ("sepal length", "sepal width", "petal length", "petal width")
TARGET = "species"
ROWS = (
    (5.1, 3.5, 1.4, 0.2, "setosa"),
    (4.9, 3.0, 1.4, 0.2, "setosa"),
    (7.0, 3.2, 4.7, 1.4, "versicolor"),
    (6.4, 3.2, 4.5, 1.5, "versicolor"),
    (6.3, 3.3, 6.0, 2.5, "virginica"),
    (5.8, 2.7, 5.1, 1.9, "virginica"),
    (7.1, 3.0, 5.9, 2.1, "virginica"),
)

# Criterion value of each remaining candidate (in feature order) per iteration.
EXPECTED_INCREMENTS = (
    (0.7628, 0.2264, 0.9779, 0.9604),
    (0.4458, 0.0841, 0.4644),
    (0.0382, 0.1108),
)
EXPECTED_ORDER = ("petal length", "petal width", "sepal width")
EXPECTED_R_SQUARED = (0.9905, 0.5626)
EXPECTED_SSC = 1.5531
DEFAULT_TOL = 1e-3


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: expected {self.expected}, got {self.actual}"


def arrays():
    X = np.array([r[:4] for r in ROWS], dtype=float)
    labels = [r[4] for r in ROWS]
    return X, labels


def dataset():
    X, labels = arrays()
    Y = dummy_encode(labels, name=TARGET)
    return from_arrays(X, Y.values, list(FEATURE_NAMES), list(Y.col_names))


def csv_text():
    lines = [",".join(FEATURE_NAMES + (TARGET,))]
    lines += [",".join(str(v) for v in row) for row in ROWS]
    return "\n".join(lines) + "\n"


def _close(expected, actual, tol):
    return abs(expected - actual) <= tol


def verify(tolerance=DEFAULT_TOL, mode=None):
    """Replay the walkthrough and compare against the published values.

    Returns the list of :class:`Check` results; nothing is raised on mismatch.
    """
    data = dataset()
    state = init(data, mode)
    checks = []
    chosen = []
    for it, expected in enumerate(EXPECTED_INCREMENTS, start=1):
        breakdown = evaluate_candidates(state)
        for (idx, value), exp in zip(breakdown.as_pairs(), expected):
            checks.append(Check(
                f"iteration {it} criterion of {FEATURE_NAMES[idx]}",
                exp, round(value, 6), _close(exp, value, tolerance),
            ))
        if len(breakdown.candidates) != len(expected):
            checks.append(Check(f"iteration {it} candidate count", len(expected),
                                len(breakdown.candidates), False))
        state, index, _ = select_next(state)
        chosen.append(FEATURE_NAMES[index])
    checks.append(Check("selection order", list(EXPECTED_ORDER), chosen,
                        tuple(chosen) == EXPECTED_ORDER))

    X = data.X.values[:, list(state.selected)]
    r_squared = correlation.cca(X, data.Y.values).r_squared
    for k, exp in enumerate(EXPECTED_R_SQUARED):
        actual = float(r_squared[k]) if k < len(r_squared) else float("nan")
        checks.append(Check(f"R{k + 1}^2 of selected features", exp, round(actual, 6),
                            _close(exp, actual, tolerance)))
    checks.append(Check("cumulative SSC", EXPECTED_SSC, round(state.criterion_total, 6),
                        _close(EXPECTED_SSC, state.criterion_total, tolerance)))
    return checks
