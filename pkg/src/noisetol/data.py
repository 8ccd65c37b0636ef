"""Datasets: container type, CSV loading, and the small worked-example sets."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

IRIS_LABEL_COLUMN = "species"
IRIS_CLASSES = ("Iris-setosa", "Iris-versicolor", "Iris-virginica")


class DataError(ValueError):
    """Raised for malformed datasets or unreadable CSV input."""


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature vectors with +/-1 labels and a probability mass per point.

    Arrays are stored read-only; ``with_labels`` returns a new dataset.
    """

    points: np.ndarray
    labels: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise DataError(f"points must be an (N, d) array with N, d >= 1, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise DataError("points must be finite")
        n = points.shape[0]

        labels = np.asarray(self.labels)
        if labels.shape != (n,):
            raise DataError(f"expected {n} labels, got shape {labels.shape}")
        if not np.all((labels == 1) | (labels == -1)):
            raise DataError("labels must be exactly -1 or +1")
        labels = labels.astype(np.int64)

        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.shape != (n,):
            raise DataError(f"expected {n} weights, got shape {weights.shape}")
        if not np.all(weights > 0):
            raise DataError("weights must be strictly positive")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise DataError(f"weights must sum to 1, got {math.fsum(weights)!r}")

        object.__setattr__(self, "points", _frozen(points))
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "weights", _frozen(weights))

    @classmethod
    def uniform(cls, points, labels) -> "Dataset":
        n = np.asarray(points).shape[0]
        return cls(points, labels, np.full(n, 1.0 / n))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def with_labels(self, labels) -> "Dataset":
        return Dataset(self.points, labels, self.weights)

    def __len__(self):
        return self.size


@dataclass(frozen=True)
class LabelMapping:
    positive_value: str
    negative_values: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        negs = frozenset(self.negative_values)
        object.__setattr__(self, "negative_values", negs)
        if self.positive_value in negs:
            raise DataError(f"label {self.positive_value!r} is both positive and negative")

    def encode(self, raw: str) -> int:
        if raw == self.positive_value:
            return 1
        if raw in self.negative_values:
            return -1
        raise DataError(f"label value {raw!r} is not covered by the label mapping")


def load_csv(path, label_column: str, mapping: LabelMapping | None = None, positive: str | None = None) -> Dataset:
    """Read a header-first, comma-separated file into a uniformly weighted Dataset.

    Pass either a full ``mapping`` or just the ``positive`` label; in the latter
    case the column must hold exactly two distinct values.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path}: empty file (no header row)")
    header = [h.strip() for h in rows[0]]
    if label_column not in header:
        raise DataError(f"{path}: label column {label_column!r} not in header {header}")
    li = header.index(label_column)
    body = rows[1:]
    if not body:
        raise DataError(f"{path}: no data rows")

    raw_labels = []
    feats = []
    for r_idx, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r_idx} has {len(row)} fields, expected {len(header)}")
        vec = []
        for c_idx, cell in enumerate(row):
            if c_idx == li:
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {r_idx}, column {header[c_idx]!r}: cannot parse {cell!r} as a number") from None
            if not math.isfinite(v):
                raise DataError(f"{path}: row {r_idx}, column {header[c_idx]!r}: non-finite value {cell!r}")
            vec.append(v)
        feats.append(vec)
        raw_labels.append(row[li].strip())

    if mapping is None:
        if positive is None:
            raise DataError("either mapping or positive must be given")
        seen = list(dict.fromkeys(raw_labels))
        if positive not in seen:
            raise DataError(f"positive label {positive!r} does not occur in column {label_column!r}")
        others = [v for v in seen if v != positive]
        if len(others) > 1:
            raise DataError(
                f"label column {label_column!r} is not binary: extra value {others[1]!r} "
                f"besides {positive!r} and {others[0]!r}"
            )
        mapping = LabelMapping(positive, frozenset(others))

    labels = []
    for r_idx, v in enumerate(raw_labels, start=2):
        try:
            labels.append(mapping.encode(v))
        except DataError as exc:
            raise DataError(f"{path}: row {r_idx}, column {label_column!r}: {exc}") from None
    if not feats[0]:
        raise DataError(f"{path}: no feature columns")
    return Dataset.uniform(np.array(feats, dtype=np.float64), np.array(labels))


def iris_path() -> Path:
    return Path(str(resources.files("noisetol") / "datasets" / "iris.csv"))


def load_iris(positive: str = "Iris-virginica", path=None) -> Dataset:
    """Iris as a two-class problem: ``positive`` against the other two species."""
    if positive not in IRIS_CLASSES:
        raise DataError(f"unknown Iris class {positive!r}")
    mapping = LabelMapping(positive, frozenset(c for c in IRIS_CLASSES if c != positive))
    return load_csv(path or iris_path(), IRIS_LABEL_COLUMN, mapping)


def example2_dataset() -> Dataset:
    """36 points on the unit circle; upper half +1, lower half -1."""
    i = np.arange(1, 37)
    theta = (2 * i - 1) * np.pi / 36
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    labels = np.where(i <= 18, 1, -1)
    return Dataset.uniform(pts, labels)


def example3_dataset() -> Dataset:
    return Dataset.uniform(np.array([[5.0], [10.0], [11.0]]), np.array([-1, -1, 1]))


# Stand-in coordinates for the 16-point quadratic-boundary example. Only set
# membership matters for its risk computation; these points are chosen so
# that, with labels sign(x1^2 + x2), the two reference classifiers below
# misclassify exactly the required points (1-based indices).
_EXAMPLE1_POINTS = np.array([
    [-0.5, 2.0],    # x1
    [-1.0, 2.0],    # x2
    [-2.0, 1.0],    # x3   only f_noisy errs
    [1.0, 3.0],     # x4
    [-2.5, 3.0],    # x5   only f_noisy errs
    [2.0, 0.5],     # x6
    [-1.5, 0.5],    # x7   only f_noisy errs
    [0.5, 1.5],     # x8
    [3.0, -7.0],    # x9   only f_clean errs
    [0.5, -1.0],    # x10  both err
    [-3.0, -10.0],  # x11
    [0.0, -6.0],    # x12
    [-1.0, -7.0],   # x13
    [2.5, 2.0],     # x14
    [3.0, 1.0],     # x15
    [1.5, -8.0],    # x16
])

EXAMPLE1_CLEAN_ERRORS = frozenset({9, 10})
EXAMPLE1_NOISY_ERRORS = frozenset({3, 5, 7, 10})


@dataclass(frozen=True)
class Example1:
    dataset: Dataset
    clean_classifier: tuple  # (w, b) of x2 + 5
    noisy_classifier: tuple  # (w, b) of 15.5 x1 + 8 x2 + 10
    clean_errors: frozenset
    noisy_errors: frozenset
    synthetic: bool = True


def example1_dataset() -> Example1:
    """Synthesized 16-point set with a quadratic true boundary.

    Returns the dataset together with the two reference linear classifiers
    and their (1-based) misclassification sets. Raises ``AssertionError`` if
    the built-in coordinates ever stop satisfying the required pattern.
    """
    pts = _EXAMPLE1_POINTS
    labels = np.where(pts[:, 0] ** 2 + pts[:, 1] >= 0, 1, -1)
    ds = Dataset.uniform(pts, labels)
    f_clean = (np.array([0.0, 1.0]), 5.0)
    f_noisy = (np.array([15.5, 8.0]), 10.0)

    def errors(f):
        score = pts @ f[0] + f[1]
        pred = np.where(score >= 0, 1, -1)
        return frozenset(int(i) + 1 for i in np.flatnonzero(pred != labels))

    if np.any(pts[:, 0] ** 2 + pts[:, 1] == 0):
        raise AssertionError("example 1 point lies on the true boundary")
    if errors(f_clean) != EXAMPLE1_CLEAN_ERRORS or errors(f_noisy) != EXAMPLE1_NOISY_ERRORS:
        raise AssertionError(
            f"example 1 construction broken: clean errors {sorted(errors(f_clean))}, "
            f"noisy errors {sorted(errors(f_noisy))}"
        )
    return Example1(ds, f_clean, f_noisy, EXAMPLE1_CLEAN_ERRORS, EXAMPLE1_NOISY_ERRORS)
