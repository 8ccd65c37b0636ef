"""Loss functions and risk functionals for linear classifiers.

Three risks are provided: the noise-free empirical risk, the expected risk
under label flips with per-point rates (``expected_noisy_risk``), and the
0-1 decomposition into a label-free base term plus an excess over the
misclassified set.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset

# exp() of anything above this overflows float64
_EXP_CAP = float(np.log(np.finfo(np.float64).max))


class LossKind(enum.Enum):
    ZERO_ONE = "zero-one"
    SQUARED = "squared"
    EXPONENTIAL = "exponential"
    LOG = "log"
    HINGE = "hinge"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        t = str(text).strip().lower().replace("_", "-")
        for k in cls:
            if t in (k.value, k.name.lower().replace("_", "-")):
                return k
        raise ValueError(f"unknown loss kind {text!r}")


@dataclass(frozen=True, eq=False)
class LinearClassifier:
    """sign(w.x + b), with sign(0) taken as +1."""

    w: np.ndarray
    b: float

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64).reshape(-1)
        b = float(self.b)
        if not (np.all(np.isfinite(w)) and np.isfinite(b)):
            raise ValueError("classifier parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", b)

    @property
    def dim(self):
        return self.w.shape[0]

    def score(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1) if self.dim == 1 else points.reshape(1, -1)
        if points.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: classifier has d={self.dim}, data has d={points.shape[1]}")
        return points @ self.w + self.b

    def predict(self, points) -> np.ndarray:
        return sign(self.score(points))

    def scaled(self, factor: float) -> "LinearClassifier":
        return LinearClassifier(self.w * factor, self.b * factor)

    def __repr__(self):
        return f"LinearClassifier(w={np.array2string(self.w, precision=6)}, b={self.b:.6g})"


def sign(score):
    return np.where(np.asarray(score) >= 0, 1, -1)


def loss(kind: LossKind, score, label):
    """Pointwise loss; broadcasts over arrays of scores and labels."""
    kind = LossKind.parse(kind)
    score = np.asarray(score, dtype=np.float64)
    label = np.asarray(label)
    margin = label * score
    if kind is LossKind.ZERO_ONE:
        out = (sign(score) != label).astype(np.float64)
    elif kind is LossKind.SQUARED:
        out = (score - label) ** 2
    elif kind is LossKind.EXPONENTIAL:
        out = np.exp(np.minimum(-margin, _EXP_CAP))
    elif kind is LossKind.LOG:
        out = np.logaddexp(0.0, -margin)
    else:
        out = np.maximum(0.0, 1.0 - margin)
    return out if out.ndim else float(out)


def _check_dims(f: LinearClassifier, data: Dataset):
    if f.dim != data.dim:
        raise ValueError(f"dimension mismatch: classifier has d={f.dim}, data has d={data.dim}")


def check_etas(etas, n: int) -> np.ndarray:
    etas = np.asarray(etas, dtype=np.float64).reshape(-1)
    if etas.shape != (n,):
        raise ValueError(f"expected {n} flip probabilities, got {etas.shape[0]}")
    if not np.all((etas >= 0) & (etas < 0.5)):
        raise ValueError("flip probabilities must lie in [0, 0.5)")
    return etas


def empirical_risk(f: LinearClassifier, data: Dataset, kind) -> float:
    _check_dims(f, data)
    return float(np.dot(data.weights, loss(kind, f.score(data.points), data.labels)))


def accuracy(f: LinearClassifier, data: Dataset) -> float:
    """Probability mass of points whose predicted sign equals their label."""
    _check_dims(f, data)
    hit = f.predict(data.points) == data.labels
    return min(1.0, math.fsum(data.weights[hit]))


def expected_noisy_risk(f: LinearClassifier, data: Dataset, etas, kind) -> float:
    """Risk averaged over independent label flips with per-point rates ``etas``."""
    _check_dims(f, data)
    etas = check_etas(etas, data.size)
    s = f.score(data.points)
    y = data.labels
    per_point = (1.0 - etas) * loss(kind, s, y) + etas * loss(kind, s, -y)
    return float(np.dot(data.weights, per_point))


def misclassified(f: LinearClassifier, data: Dataset) -> np.ndarray:
    """Boolean mask of the clean-label misclassification set."""
    _check_dims(f, data)
    return f.predict(data.points) != data.labels


def zero_one_noisy_decomposition(f: LinearClassifier, data: Dataset, etas) -> tuple[float, float]:
    """Split the expected noisy 0-1 risk into (label-free base, excess over errors)."""
    etas = check_etas(etas, data.size)
    mask = misclassified(f, data)
    base = float(np.dot(data.weights, etas))
    excess = float(np.dot(data.weights[mask], 1.0 - 2.0 * etas[mask]))
    return base, excess


def risk_difference(f1: LinearClassifier, f2: LinearClassifier, data: Dataset, etas) -> float:
    """R_eta(f1) - R_eta(f2) under 0-1 loss, summed only over disagreeing errors."""
    etas = check_etas(etas, data.size)
    s1 = misclassified(f1, data)
    s2 = misclassified(f2, data)
    gain = 1.0 - 2.0 * etas
    only1 = s1 & ~s2
    only2 = s2 & ~s1
    return float(np.dot(data.weights[only1], gain[only1]) - np.dot(data.weights[only2], gain[only2]))
