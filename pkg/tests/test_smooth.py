import math

import numpy as np
import pytest

from noisetol.data import Dataset
from noisetol.experiments import random_dataset
from noisetol.minimizers import SolverConfig, UnboundedObjectiveError, minimize_smooth_convex
from noisetol.risk import LinearClassifier, LossKind, accuracy, expected_noisy_risk, misclassified


def grid_argmin(fn, lo, hi, rounds=6, n=2001):
    """Scalar minimizer by repeated grid refinement; fn must be unimodal on [lo, hi]."""
    for _ in range(rounds):
        xs = np.linspace(lo, hi, n)
        vals = np.array([fn(x) for x in xs])
        i = int(np.argmin(vals))
        lo, hi = xs[max(i - 2, 0)], xs[min(i + 2, n - 1)]
    return 0.5 * (lo + hi)


def bias_risk(data, kind, eta):
    etas = np.full(data.size, eta)
    return lambda b: expected_noisy_risk(LinearClassifier([1.0], b), data, etas, kind)


class TestExample3Bias:
    def test_exponential_clean(self, ex3):
        f = minimize_smooth_convex(ex3, "exponential", fix_w=[1.0])
        closed = 0.5 * math.log(math.exp(-11) / (math.exp(5) + math.exp(10)))
        assert f.b == pytest.approx(closed, abs=1e-9)
        assert f.b == pytest.approx(-10.5034, abs=1e-3)

    def test_exponential_noisy(self, ex3):
        f = minimize_smooth_convex(ex3, LossKind.EXPONENTIAL, etas=np.full(3, 0.3), fix_w=[1.0])
        # stationarity of the flip-averaged risk gives e^{2b} in closed form
        num = 0.7 * math.exp(-11) + 0.3 * (math.exp(-5) + math.exp(-10))
        den = 0.7 * (math.exp(5) + math.exp(10)) + 0.3 * math.exp(11)
        assert f.b == pytest.approx(0.5 * math.log(num / den), abs=1e-9)
        assert f.b == pytest.approx(-8.3052, abs=1e-3)
        assert {int(i) + 1 for i in np.flatnonzero(misclassified(f, ex3))} == {2}

    @pytest.mark.parametrize("eta, expected", [(0.0, -10.5086), (0.3, -9.8607)])
    def test_log(self, ex3, eta, expected):
        etas = None if eta == 0 else np.full(3, eta)
        f = minimize_smooth_convex(ex3, LossKind.LOG, etas=etas, fix_w=[1.0])
        oracle = grid_argmin(bias_risk(ex3, LossKind.LOG, eta), -20.0, 0.0)
        assert f.b == pytest.approx(oracle, abs=1e-7)
        assert f.b == pytest.approx(expected, abs=1e-3)

    def test_log_noisy_misclassifies_x2(self, ex3):
        f = minimize_smooth_convex(ex3, LossKind.LOG, etas=np.full(3, 0.3), fix_w=[1.0])
        assert {int(i) + 1 for i in np.flatnonzero(misclassified(f, ex3))} == {2}

    @pytest.mark.parametrize("kind", [LossKind.EXPONENTIAL, LossKind.LOG])
    def test_symmetric(self, kind):
        ds = Dataset.uniform([[-1.0], [1.0]], [-1, 1])
        f = minimize_smooth_convex(ds, kind, fix_w=[1.0])
        assert f.b == pytest.approx(0.0, abs=1e-9)


def numeric_grad(data, kind, etas, v, h=1e-6):
    d = data.dim
    g = np.zeros(d + 1)
    for k in range(d + 1):
        e = np.zeros(d + 1)
        e[k] = h
        up = expected_noisy_risk(LinearClassifier((v + e)[:d], (v + e)[d]), data, etas, kind)
        dn = expected_noisy_risk(LinearClassifier((v - e)[:d], (v - e)[d]), data, etas, kind)
        g[k] = (up - dn) / (2 * h)
    return g


class TestNewton:
    @pytest.mark.parametrize("kind", [LossKind.EXPONENTIAL, LossKind.LOG])
    @pytest.mark.parametrize("seed", range(4))
    def test_optimality(self, kind, seed):
        rng = np.random.default_rng(seed)
        ds = random_dataset(rng, 40, 3)
        etas = rng.uniform(0, 0.4, ds.size)
        f = minimize_smooth_convex(ds, kind, etas=etas, config=SolverConfig(tol=1e-9))
        v = np.r_[f.w, f.b]
        assert np.max(np.abs(numeric_grad(ds, kind, etas, v))) <= 1e-6
        best = expected_noisy_risk(f, ds, etas, kind)
        for _ in range(100):
            p = v + rng.normal(scale=0.5, size=v.size)
            assert best <= expected_noisy_risk(LinearClassifier(p[:-1], p[-1]), ds, etas, kind) + 1e-12

    def test_iris_log(self, iris):
        f = minimize_smooth_convex(iris, LossKind.LOG)
        assert accuracy(f, iris) == pytest.approx(0.9867, abs=5e-4)

    def test_single_class_unbounded(self):
        ds = Dataset.uniform([[0.0], [1.0]], [1, 1])
        with pytest.raises(UnboundedObjectiveError):
            minimize_smooth_convex(ds, LossKind.EXPONENTIAL)

    def test_rejects_other_losses(self, ex3):
        with pytest.raises(ValueError):
            minimize_smooth_convex(ex3, LossKind.HINGE)

    def test_fix_w_length(self, ex3):
        with pytest.raises(ValueError):
            minimize_smooth_convex(ex3, LossKind.LOG, fix_w=[1.0, 2.0])
