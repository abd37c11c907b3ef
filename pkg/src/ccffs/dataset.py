"""CSV ingestion, categorical encoding, standardisation and synthetic data."""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .exceptions import DataError
from .kernels import DataMatrix

#: Generator used by :func:`synthetic_uniform`; recorded in benchmark output.
RNG_NAME = "numpy.random.Generator(PCG64)"

_MISSING = {"", "na", "nan", "null", "none", "?"}


@dataclass(frozen=True)
class EncodedDataset:
    """Feature block ``X`` and response block ``Y`` plus how they were encoded.

    ``feature_encodings`` holds one dict per feature column, either
    ``{"type": "numeric"}`` or ``{"type": "ordinal", "mapping": {...}}``.
    ``response_encoding`` is ``{"type": "numeric"}`` or
    ``{"type": "dummy", "classes": [...], "reference": <last class>}``.
    """

    X: DataMatrix
    Y: DataMatrix
    feature_encodings: Sequence[dict] = field(default=())
    response_encoding: dict = field(default_factory=lambda: {"type": "numeric"})

    def __post_init__(self):
        if self.X.shape[0] != self.Y.shape[0]:
            raise DataError(
                f"X has {self.X.shape[0]} rows but Y has {self.Y.shape[0]}"
            )
        if not self.feature_encodings:
            object.__setattr__(
                self, "feature_encodings", tuple({"type": "numeric"} for _ in self.X.col_names)
            )

    @property
    def n_instances(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]

    @property
    def n_responses(self):
        return self.Y.shape[1]

    @property
    def feature_names(self):
        return self.X.col_names

    def summary(self):
        return {
            "n_instances": self.n_instances,
            "n_features": self.n_features,
            "n_responses": self.n_responses,
            "encodings": {
                "features": {
                    name: enc for name, enc in zip(self.X.col_names, self.feature_encodings)
                },
                "response": self.response_encoding,
            },
        }


def from_arrays(X, Y, feature_names=None, response_names=None):
    """Wrap plain arrays as an all-numeric :class:`EncodedDataset`."""
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    names = response_names or [f"y{j}" for j in range(Y.shape[1])]
    return EncodedDataset(DataMatrix(X, feature_names or ()), DataMatrix(Y, names))


def _is_missing(raw):
    return raw.strip().lower() in _MISSING


def _try_float(raw):
    try:
        value = float(raw)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def class_order(labels):
    """Distinct labels in order of first appearance."""
    return list(dict.fromkeys(labels))


def ordinal_encode(values):
    """Map categories to ``0, 1, ...`` by first appearance."""
    mapping = {label: code for code, label in enumerate(class_order(values))}
    return np.array([mapping[v] for v in values], dtype=float), mapping


def dummy_encode(labels, name="y"):
    """``c`` classes -> ``c - 1`` indicator columns; the last class is all zeros."""
    labels = list(labels)
    classes = class_order(labels)
    if len(classes) < 2:
        raise DataError(f"dummy encoding needs at least 2 classes, got {classes}")
    index = {label: k for k, label in enumerate(classes)}
    Y = np.zeros((len(labels), len(classes) - 1))
    for row, label in enumerate(labels):
        k = index[label]
        if k < len(classes) - 1:
            Y[row, k] = 1.0
    return DataMatrix(Y, [f"{name}={c}" for c in classes[:-1]])


def zscore(M):
    """Standardise each column to mean 0 and sample standard deviation 1."""
    values = M.values if isinstance(M, DataMatrix) else np.asarray(M, dtype=float)
    names = M.col_names if isinstance(M, DataMatrix) else ()
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] < 2:
        raise DataError("z-scores need at least two rows")
    sd = values.std(axis=0, ddof=1)
    scale = np.maximum(np.abs(values).max(axis=0), np.finfo(float).tiny)
    for j in np.flatnonzero(sd <= 1e-12 * scale):
        label = names[j] if names else f"column {j}"
        raise DataError(f"cannot standardise zero-variance column {label!r}")
    return DataMatrix((values - values.mean(axis=0)) / sd, names)


def load_csv(path, target_columns, standardize=False, delimiter=","):
    """Read a headed CSV file into an :class:`EncodedDataset`.

    Non-target columns become features; non-numeric features are ordinal
    encoded. A single non-numeric target is dummy encoded, any number of
    numeric targets are kept as they are. With ``standardize`` the feature
    columns are converted to z-scores.
    """
    path = Path(path)
    if isinstance(target_columns, str):
        target_columns = [target_columns]
    target_columns = list(target_columns)
    if not target_columns:
        raise DataError("at least one target column is required")
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh, delimiter=delimiter))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise DataError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DataError(f"{path} has a header but no data rows")
    for name in target_columns:
        if name not in header:
            raise DataError(f"unknown target column {name!r}; columns are {header}")
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in header")

    columns = {name: [] for name in header}
    for line_no, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(f"row {line_no} has {len(row)} fields, expected {len(header)}")
        for name, raw in zip(header, row):
            if _is_missing(raw):
                raise DataError(f"missing value at row {line_no}, column {name!r}")
            columns[name].append(raw.strip())

    def parse(name):
        parsed = [_try_float(v) for v in columns[name]]
        return None if any(v is None for v in parsed) else np.array(parsed)

    feature_names = [h for h in header if h not in target_columns]
    if not feature_names:
        raise DataError("no feature columns left after removing targets")
    feats, encodings = [], []
    for name in feature_names:
        numeric = parse(name)
        if numeric is None:
            codes, mapping = ordinal_encode(columns[name])
            feats.append(codes)
            encodings.append({"type": "ordinal", "mapping": mapping})
        else:
            feats.append(numeric)
            encodings.append({"type": "numeric"})
    X = DataMatrix(np.column_stack(feats), feature_names)
    if standardize:
        X = zscore(X)

    numeric_targets = {name: parse(name) for name in target_columns}
    if all(v is not None for v in numeric_targets.values()):
        Y = DataMatrix(np.column_stack(list(numeric_targets.values())), target_columns)
        response = {"type": "numeric"}
    elif len(target_columns) == 1:
        labels = columns[target_columns[0]]
        Y = dummy_encode(labels, name=target_columns[0])
        classes = class_order(labels)
        response = {"type": "dummy", "classes": classes, "reference": classes[-1]}
    else:
        bad = [n for n, v in numeric_targets.items() if v is None]
        raise DataError(f"non-numeric targets {bad}: only a single categorical target is supported")
    return EncodedDataset(X, Y, tuple(encodings), response)


def synthetic_uniform(N, n, m, seed):
    """Features and responses drawn independently from U[0, 1)."""
    if min(N, n, m) < 1:
        raise DataError(f"N, n and m must be positive, got {(N, n, m)}")
    rng = np.random.Generator(np.random.PCG64(seed))
    X = rng.random((N, n))
    Y = rng.random((N, m))
    return from_arrays(X, Y)


def shuffle_split(dataset, test_fraction=0.25, seed=0):
    """Seeded row shuffle, returning ``(train, test)`` datasets."""
    if not 0 < test_fraction < 1:
        raise DataError("test_fraction must lie strictly between 0 and 1")
    N = dataset.n_instances
    n_test = int(round(N * test_fraction))
    if n_test < 1 or n_test >= N:
        raise DataError(f"cannot split {N} rows with test_fraction={test_fraction}")
    order = np.random.Generator(np.random.PCG64(seed)).permutation(N)

    def take(rows):
        return EncodedDataset(
            DataMatrix(dataset.X.values[rows], dataset.X.col_names),
            DataMatrix(dataset.Y.values[rows], dataset.Y.col_names),
            dataset.feature_encodings,
            dataset.response_encoding,
        )

    return take(order[n_test:]), take(order[:n_test])
