"""Label-noise models: per-point flip probabilities and seeded label corruption.

Randomness comes from numpy's PCG64. A trial that needs its own stream gets
a 64-bit seed from ``derive_seed(master_seed, *keys)``, which feeds
``SeedSequence(master_seed, spawn_key=keys)``; streams for distinct keys are
independent and do not depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .data import Dataset


class NoiseSpecError(ValueError):
    pass


def _check_rate(r, what="noise rate"):
    r = float(r)
    if not (0.0 <= r < 0.5):
        raise NoiseSpecError(f"{what} must be in [0, 0.5), got {r}")
    return r


def _fmt(x):
    return format(float(x), "g")


@dataclass(frozen=True)
class Uniform:
    rate: float

    def __post_init__(self):
        object.__setattr__(self, "rate", _check_rate(self.rate))

    def text(self):
        return "none" if self.rate == 0 else f"uniform:{_fmt(self.rate)}"


@dataclass(frozen=True, eq=False)
class PerPoint:
    rates: np.ndarray
    source: str = ""

    def __post_init__(self):
        r = np.array(self.rates, dtype=np.float64).reshape(-1)
        if not np.all((r >= 0) & (r < 0.5)):
            bad = r[~((r >= 0) & (r < 0.5))][0]
            raise NoiseSpecError(f"per-point noise rate must be in [0, 0.5), got {bad}")
        r.setflags(write=False)
        object.__setattr__(self, "rates", r)

    def text(self):
        return f"perpoint:{self.source}" if self.source else f"perpoint:<{self.rates.size} rates>"


@dataclass(frozen=True)
class ClassConditional:
    positive_rate: float
    negative_rate: float

    def __post_init__(self):
        object.__setattr__(self, "positive_rate", _check_rate(self.positive_rate))
        object.__setattr__(self, "negative_rate", _check_rate(self.negative_rate))

    def text(self):
        return f"cccn:{_fmt(self.positive_rate)},{_fmt(self.negative_rate)}"


@dataclass(frozen=True)
class Quadrant:
    """Rate by quadrant of (x1 - c1, x2 - c2); quadrants numbered 1..4 counter-clockwise from (+, +).

    ``center=None`` means the mean of the first two features (see ``auto_center``).
    Points on an axis count as the non-negative side.
    """

    rates: tuple
    center: tuple | None = None

    def __post_init__(self):
        rates = tuple(_check_rate(r) for r in self.rates)
        if len(rates) != 4:
            raise NoiseSpecError(f"quadrant noise needs 4 rates, got {len(rates)}")
        object.__setattr__(self, "rates", rates)
        if self.center is not None:
            c = tuple(float(v) for v in self.center)
            if len(c) != 2 or not all(np.isfinite(c)):
                raise NoiseSpecError("quadrant center must be two finite numbers")
            object.__setattr__(self, "center", c)

    def text(self):
        c = "auto" if self.center is None else f"{_fmt(self.center[0])},{_fmt(self.center[1])}"
        return "quadrant:" + ",".join(_fmt(r) for r in self.rates) + "," + c


NoiseSpec = Union[Uniform, PerPoint, ClassConditional, Quadrant]


def parse_noise_spec(text: str) -> NoiseSpec:
    """Parse ``none``, ``uniform:0.2``, ``cccn:0.1,0.3``,
    ``quadrant:0.15,0.2,0.25,0.3[,cx,cy|,auto]`` or ``perpoint:<file>``."""
    raw = text.strip()
    kind, _, arg = raw.partition(":")
    kind = kind.strip().lower()
    try:
        if kind in ("none", "clean") and not arg:
            return Uniform(0.0)
        if kind == "uniform":
            return Uniform(float(arg))
        if kind == "cccn":
            parts = [p for p in arg.split(",")]
            if len(parts) != 2:
                raise NoiseSpecError("cccn needs two rates: cccn:<eta_pos>,<eta_neg>")
            return ClassConditional(float(parts[0]), float(parts[1]))
        if kind == "quadrant":
            parts = [p.strip() for p in arg.split(",")]
            if len(parts) not in (4, 5, 6):
                raise NoiseSpecError("quadrant needs 4 rates optionally followed by cx,cy or auto")
            rates = [float(p) for p in parts[:4]]
            rest = parts[4:]
            if not rest or rest == ["auto"]:
                return Quadrant(tuple(rates), None)
            if len(rest) != 2:
                raise NoiseSpecError("quadrant center must be 'auto' or two numbers")
            return Quadrant(tuple(rates), (float(rest[0]), float(rest[1])))
        if kind == "perpoint":
            path = Path(arg)
            if not path.is_file():
                raise NoiseSpecError(f"per-point rate file not found: {arg}")
            vals = [float(line) for line in path.read_text().split() if line.strip()]
            return PerPoint(np.array(vals), source=arg)
    except ValueError as exc:
        if isinstance(exc, NoiseSpecError):
            raise
        raise NoiseSpecError(f"bad noise spec {text!r}: {exc}") from None
    raise NoiseSpecError(f"unknown noise spec {text!r}")


def auto_center(dataset: Dataset) -> np.ndarray:
    if dataset.dim < 2:
        raise NoiseSpecError("quadrant center needs at least two features")
    return dataset.points[:, :2].mean(axis=0)


def quadrant_index(points, center) -> np.ndarray:
    dx = points[:, 0] - center[0]
    dy = points[:, 1] - center[1]
    right = dx >= 0
    up = dy >= 0
    return np.where(up, np.where(right, 1, 2), np.where(right, 4, 3))


def flip_probabilities(dataset: Dataset, spec: NoiseSpec) -> np.ndarray:
    n = dataset.size
    if isinstance(spec, Uniform):
        return np.full(n, spec.rate)
    if isinstance(spec, ClassConditional):
        return np.where(dataset.labels == 1, spec.positive_rate, spec.negative_rate).astype(np.float64)
    if isinstance(spec, PerPoint):
        if spec.rates.size != n:
            raise NoiseSpecError(f"per-point table has {spec.rates.size} rates for {n} points")
        return spec.rates.copy()
    if isinstance(spec, Quadrant):
        center = auto_center(dataset) if spec.center is None else np.array(spec.center)
        if dataset.dim < 2:
            raise NoiseSpecError("quadrant noise needs at least two features")
        q = quadrant_index(dataset.points, center)
        return np.array(spec.rates)[q - 1]
    raise TypeError(f"not a noise spec: {spec!r}")


@dataclass(frozen=True, eq=False)
class NoisyDataset:
    base: Dataset
    noisy_labels: np.ndarray
    flipped: np.ndarray
    seed: int
    etas: np.ndarray = field(repr=False, default=None)

    def training_set(self) -> Dataset:
        """The corrupted sample as seen by a learner."""
        return self.base.with_labels(self.noisy_labels)

    @property
    def flip_count(self) -> int:
        return int(self.flipped.sum())


def derive_seed(master_seed: int, *keys: int) -> int:
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def inject(dataset: Dataset, spec: NoiseSpec, seed: int) -> NoisyDataset:
    """Flip each label independently with its own probability."""
    etas = flip_probabilities(dataset, spec)
    u = make_rng(seed).random(dataset.size)
    flipped = u < etas
    noisy = np.where(flipped, -dataset.labels, dataset.labels)
    for a in (flipped, noisy, etas):
        a.setflags(write=False)
    return NoisyDataset(dataset, noisy, flipped, int(seed), etas)
