"""Noise tolerance of risk minimization for linear classifiers under label noise."""

from ._accel import backend_name
from .data import Dataset, LabelMapping, example1_dataset, example2_dataset, example3_dataset, load_csv, load_iris
from .noise import ClassConditional, PerPoint, Quadrant, Uniform, flip_probabilities, inject, parse_noise_spec
from .risk import (
    LinearClassifier,
    LossKind,
    accuracy,
    empirical_risk,
    expected_noisy_risk,
    loss,
    risk_difference,
    zero_one_noisy_decomposition,
)

__version__ = "0.1.0"
