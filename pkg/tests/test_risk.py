import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisetol.data import Dataset, example1_dataset
from noisetol.noise import PerPoint, derive_seed, inject
from noisetol.risk import (
    LinearClassifier,
    LossKind,
    accuracy,
    empirical_risk,
    expected_noisy_risk,
    loss,
    misclassified,
    risk_difference,
    sign,
    zero_one_noisy_decomposition,
)

ALL_KINDS = list(LossKind)


def random_instance(rng, n=40, d=3):
    X = rng.standard_normal((n, d))
    y = np.where(rng.random(n) < 0.5, 1, -1)
    w = rng.random(n) + 0.1
    ds = Dataset(X, y, w / w.sum())
    f = LinearClassifier(rng.standard_normal(d), rng.standard_normal())
    return ds, f


class TestLoss:
    @pytest.mark.parametrize(
        "kind, score, label, expected",
        [
            (LossKind.HINGE, 2.0, 1, 0.0),
            (LossKind.EXPONENTIAL, 0.0, 1, 1.0),
            (LossKind.EXPONENTIAL, 0.0, -1, 1.0),
            (LossKind.SQUARED, 0.5, 1, 0.25),
            (LossKind.ZERO_ONE, -0.1, 1, 1.0),
            (LossKind.ZERO_ONE, 0.0, 1, 0.0),
            (LossKind.ZERO_ONE, 0.0, -1, 1.0),
            (LossKind.LOG, 0.0, 1, math.log(2.0)),
            (LossKind.HINGE, -1.0, 1, 2.0),
        ],
    )
    def test_values(self, kind, score, label, expected):
        assert loss(kind, score, label) == pytest.approx(expected, abs=1e-15)

    def test_sign_tie(self):
        assert list(sign(np.array([-1e-300, 0.0, 1e-300]))) == [-1, 1, 1]

    def test_overflow_safe(self):
        with np.errstate(over="raise"):
            assert loss(LossKind.LOG, -1000.0, 1) == pytest.approx(1000.0)
            assert loss(LossKind.LOG, 1000.0, 1) == pytest.approx(0.0, abs=1e-300)
            assert np.isfinite(loss(LossKind.EXPONENTIAL, -1000.0, 1))

    def test_parse(self):
        assert LossKind.parse("zero_one") is LossKind.ZERO_ONE
        assert LossKind.parse("Hinge") is LossKind.HINGE
        with pytest.raises(ValueError):
            LossKind.parse("cubic")

    @pytest.mark.parametrize("kind", [LossKind.SQUARED, LossKind.EXPONENTIAL, LossKind.LOG, LossKind.HINGE])
    def test_convex_in_score(self, kind, rng):
        a = rng.uniform(-30, 30, 2000)
        b = rng.uniform(-30, 30, 2000)
        for label in (1, -1):
            mid = loss(kind, (a + b) / 2, label)
            avg = (loss(kind, a, label) + loss(kind, b, label)) / 2
            assert np.all(mid <= avg + 1e-9 * np.maximum(1.0, avg))


class TestRisks:
    def test_example3_zero_one(self, ex3):
        assert empirical_risk(LinearClassifier([1.0], -10.5), ex3, LossKind.ZERO_ONE) == 0.0

    def test_example3_exponential(self, ex3):
        b = -10.5034
        expected = (math.exp(5 + b) + math.exp(10 + b) + math.exp(-11 - b)) / 3
        assert empirical_risk(LinearClassifier([1.0], b), ex3, LossKind.EXPONENTIAL) == pytest.approx(expected, rel=1e-14)

    def test_example3_noisy_exponential(self, ex3):
        b = -8.3
        expected = (0.7 / 3) * (math.exp(5 + b) + math.exp(10 + b) + math.exp(-11 - b)) + (0.3 / 3) * (
            math.exp(-5 - b) + math.exp(-10 - b) + math.exp(11 + b)
        )
        got = expected_noisy_risk(LinearClassifier([1.0], b), ex3, np.full(3, 0.3), LossKind.EXPONENTIAL)
        assert got == pytest.approx(expected, rel=1e-14)

    def test_margin_one_hinge(self):
        ds = Dataset.uniform([[2.0, 0.0]], [1])
        assert empirical_risk(LinearClassifier([0.5, 3.0], 0.0), ds, LossKind.HINGE) == 0.0

    def test_accuracy_example2(self, ex2):
        assert accuracy(LinearClassifier([0.0, 1.27], 0.0), ex2) == 1.0
        assert accuracy(LinearClassifier([-0.342, 0.988], 0.0), ex2) == pytest.approx(8 / 9, abs=1e-15)

    def test_accuracy_complement(self, ex2):
        flipped = ex2.with_labels(-ex2.labels)
        assert accuracy(LinearClassifier([0.0, 1.0], 0.0), flipped) == 0.0

    def test_perfect_accuracy_is_exactly_one(self, iris_setosa):
        # 150 masses of 1/150 do not sum to 1.0 in naive floating point
        f = LinearClassifier([0.0, 0.0, -1.0, 0.0], 2.5)
        assert accuracy(f, iris_setosa) == 1.0

    def test_dimension_mismatch(self, ex2):
        with pytest.raises(ValueError, match="dimension"):
            empirical_risk(LinearClassifier([1.0], 0.0), ex2, LossKind.HINGE)

    @pytest.mark.parametrize("etas", [np.full(3, 0.5), np.full(2, 0.1), np.array([0.1, -0.1, 0.1])])
    def test_bad_etas(self, ex3, etas):
        with pytest.raises(ValueError):
            expected_noisy_risk(LinearClassifier([1.0], 0.0), ex3, etas, LossKind.LOG)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_zero_noise_equals_clean(self, kind, rng):
        ds, f = random_instance(rng)
        assert expected_noisy_risk(f, ds, np.zeros(ds.size), kind) == pytest.approx(empirical_risk(f, ds, kind), abs=1e-15)


class TestZeroOneStructure:
    def test_example1(self):
        ex = example1_dataset()
        etas = np.full(16, 0.2)
        etas[8] = 0.125
        etas[[2, 4, 6]] = 0.4
        f_clean = LinearClassifier(*ex.clean_classifier)
        f_noisy = LinearClassifier(*ex.noisy_classifier)
        _, e_clean = zero_one_noisy_decomposition(f_clean, ex.dataset, etas)
        _, e_noisy = zero_one_noisy_decomposition(f_noisy, ex.dataset, etas)
        assert e_clean - e_noisy == pytest.approx(0.009375, abs=1e-12)
        assert risk_difference(f_clean, f_noisy, ex.dataset, etas) == pytest.approx(0.009375, abs=1e-12)

    def test_zero_noise_decomposition(self, rng):
        ds, f = random_instance(rng)
        base, excess = zero_one_noisy_decomposition(f, ds, np.zeros(ds.size))
        assert base == 0.0
        assert excess == pytest.approx(empirical_risk(f, ds, LossKind.ZERO_ONE), abs=1e-15)

    def test_empty_error_set(self, ex2):
        f = LinearClassifier([0.0, 1.0], 0.0)
        assert not misclassified(f, ex2).any()
        assert zero_one_noisy_decomposition(f, ex2, np.full(36, 0.3))[1] == 0.0

    def test_self_difference(self, rng):
        ds, f = random_instance(rng)
        assert risk_difference(f, f, ds, rng.uniform(0, 0.49, ds.size)) == 0.0

    def test_k_errors(self, ex2):
        perfect = LinearClassifier([0.0, 1.0], 0.0)
        rotated = LinearClassifier([-0.342, 0.988], 0.0)  # 4 errors of weight 1/36
        eta = 0.3
        got = risk_difference(perfect, rotated, ex2, np.full(36, eta))
        assert got == pytest.approx(-(1 - 2 * eta) * 4 / 36, abs=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), eta=st.floats(0.0, 0.49))
    def test_affine_identity(self, seed, eta):
        ds, f = random_instance(np.random.default_rng(seed))
        lhs = expected_noisy_risk(f, ds, np.full(ds.size, eta), LossKind.ZERO_ONE)
        rhs = eta + (1 - 2 * eta) * empirical_risk(f, ds, LossKind.ZERO_ONE)
        assert abs(lhs - rhs) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_decomposition_and_difference(self, seed):
        rng = np.random.default_rng(seed)
        ds, f = random_instance(rng)
        g = LinearClassifier(rng.standard_normal(ds.dim), rng.standard_normal())
        etas = rng.uniform(0, 0.49, ds.size)
        base, excess = zero_one_noisy_decomposition(f, ds, etas)
        rf = expected_noisy_risk(f, ds, etas, LossKind.ZERO_ONE)
        rg = expected_noisy_risk(g, ds, etas, LossKind.ZERO_ONE)
        assert abs(base + excess - rf) <= 1e-12
        assert abs(risk_difference(f, g, ds, etas) - (rf - rg)) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), eta=st.floats(0.0, 0.49))
    def test_order_preserved_under_uniform_noise(self, seed, eta):
        rng = np.random.default_rng(seed)
        ds, f = random_instance(rng)
        g = LinearClassifier(rng.standard_normal(ds.dim), rng.standard_normal())
        etas = np.full(ds.size, eta)
        clean = empirical_risk(f, ds, LossKind.ZERO_ONE) <= empirical_risk(g, ds, LossKind.ZERO_ONE)
        noisy = expected_noisy_risk(f, ds, etas, LossKind.ZERO_ONE) <= expected_noisy_risk(g, ds, etas, LossKind.ZERO_ONE) + 1e-15
        assert clean == noisy


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_monte_carlo_expected_risk(kind, rng):
    ds, f = random_instance(rng, n=25, d=2)
    etas = rng.uniform(0, 0.45, ds.size)
    spec = PerPoint(etas)
    M = 2000
    realized = np.array([empirical_risk(f, inject(ds, spec, derive_seed(11, m)).training_set(), kind) for m in range(M)])
    se = realized.std(ddof=1) / math.sqrt(M)
    assert abs(realized.mean() - expected_noisy_risk(f, ds, etas, kind)) <= 5 * se
