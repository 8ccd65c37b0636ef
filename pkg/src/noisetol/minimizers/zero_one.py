"""0-1 risk minimization: exhaustive hyperplane enumeration and simulated annealing."""

from __future__ import annotations

import itertools

import numpy as np

from .. import kernels
from ..data import Dataset
from ..noise import derive_seed, make_rng
from ..risk import LinearClassifier, check_etas
from .config import SolverConfig

MAX_EXACT_DIM = 3
MAX_EXACT_POINTS = 200

# annealing step: step0 * max(T / T0, STEP_FLOOR), in standardized units on the unit sphere
STEP0 = 0.5
STEP_FLOOR = 0.02


class ExactSearchTooLarge(ValueError):
    pass


def _costs(data: Dataset, etas):
    if etas is None:
        return data.weights.copy(), 0.0
    etas = check_etas(etas, data.size)
    return data.weights * (1.0 - 2.0 * etas), float(data.weights @ etas)


def _simple_candidates(X):
    """Constant classifiers and axis-aligned thresholds, as unit (w, b) rows."""
    n, d = X.shape
    rows = []
    const = np.zeros(d + 1)
    const[d] = 1.0
    rows += [const, -const]
    for k in range(d):
        u = np.unique(X[:, k])
        cuts = np.concatenate([[u[0] - 1.0], (u[:-1] + u[1:]) / 2, [u[-1] + 1.0]])
        for thr in cuts:
            v = np.zeros(d + 1)
            v[k] = 1.0
            v[d] = -thr
            v /= np.linalg.norm(v)
            rows += [v, -v]
    return np.array(rows)


def minimize_zero_one_exact(data: Dataset, etas=None) -> tuple[LinearClassifier, float]:
    """Global minimizer of the (expected noisy) 0-1 risk over linear classifiers.

    Exhaustive over point-incident hyperplanes, so only small problems are
    accepted (d <= 3, N <= 200). Returns the classifier (unit-norm (w, b))
    and its risk.
    """
    n, d = data.size, data.dim
    if d > MAX_EXACT_DIM or n > MAX_EXACT_POINTS:
        raise ExactSearchTooLarge(
            f"exact 0-1 search is limited to d <= {MAX_EXACT_DIM} and N <= {MAX_EXACT_POINTS} (got d={d}, N={n})"
        )
    X = np.ascontiguousarray(data.points)
    y = data.labels.astype(np.int64)
    cost, base = _costs(data, etas)

    best_r = np.inf
    best_v = np.zeros(d + 1)
    simple = _simple_candidates(X)
    risks = kernels.batch_zero_one_risk(X, y, cost, simple)
    for r, v in zip(risks, simple):
        if kernels.better_candidate(r, v, best_r, best_v):
            best_r, best_v = float(r), v.copy()

    signs = np.array(list(itertools.product([-1.0, 1.0], repeat=d)))
    if n >= d:
        combos = np.array(list(itertools.combinations(range(n), d)), dtype=np.int64)
        r, v, valid = kernels.enumerate_hyperplanes(X, X, y, cost, combos, signs, best_r, best_v.copy())
        if valid == 0:
            # every subset degenerate (e.g. repeated or collinear points): jitter the geometry only
            jitter = make_rng(0).standard_normal(X.shape) * 1e-6 * max(1.0, float(np.abs(X).max()))
            r, v, valid = kernels.enumerate_hyperplanes(X + jitter, X, y, cost, combos, signs, best_r, best_v.copy())
        best_r, best_v = float(r), np.asarray(v).copy()
    return LinearClassifier(best_v[:d], best_v[d]), base + best_r


def anneal_zero_one(data: Dataset, config: SolverConfig | None = None) -> tuple[LinearClassifier, float]:
    """Best-of-restarts simulated annealing on the empirical 0-1 risk.

    Features are standardized internally; the result is mapped back to the
    original coordinates. Restart r draws from the stream derive_seed(seed, r).
    """
    config = config or SolverConfig()
    X = data.points
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    Xs = np.ascontiguousarray((X - mu) / sd)
    y = data.labels.astype(np.int64)
    cost = data.weights
    scale = data.size  # energies in units of "points" for uniform weights
    t0, decay = config.anneal_schedule
    d1 = data.dim + 1

    best_r = np.inf
    best_v = None
    for restart in range(config.restarts):
        rng = make_rng(derive_seed(config.seed, restart))
        v0 = rng.standard_normal(d1)
        noise = rng.standard_normal((config.max_iters, d1))
        unif = rng.random(config.max_iters)
        v, r = kernels.anneal_chain(Xs, y, cost, v0, noise, unif, t0, decay, STEP0, STEP_FLOOR, float(scale))
        if r < best_r - kernels.RISK_TOL:
            best_r, best_v = float(r), np.asarray(v).copy()
    w = best_v[:-1] / sd
    b = best_v[-1] - float(w @ mu)
    return LinearClassifier(w, b), best_r


def minimize_zero_one_stochastic(data: Dataset, config: SolverConfig | None = None) -> LinearClassifier:
    return anneal_zero_one(data, config)[0]
