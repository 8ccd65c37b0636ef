"""Hinge-risk minimization as a linear program."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..risk import LinearClassifier, check_etas
from .config import SolverConfig
from .simplex import LPProblem, simplex_solve


def hinge_lp(data: Dataset, etas=None) -> LPProblem:
    """LP over (w, b, xi, zeta) whose optimum is the expected noisy hinge risk.

    xi_i >= 1 - y_i f(x_i) carries weight (1 - eta_i) w_i; zeta_i >= 1 + y_i f(x_i)
    carries eta_i w_i and is only created for points with eta_i > 0.
    """
    n, d = data.size, data.dim
    etas = np.zeros(n) if etas is None else check_etas(etas, n)
    noisy = np.flatnonzero(etas > 0)
    k = noisy.size
    nv = d + 1 + n + k

    yx = data.labels[:, None] * np.hstack([data.points, np.ones((n, 1))])  # y_i x~_i
    A_xi = np.zeros((n, nv))
    A_xi[:, :d + 1] = -yx
    A_xi[np.arange(n), d + 1 + np.arange(n)] = -1.0
    A_zeta = np.zeros((k, nv))
    A_zeta[:, :d + 1] = yx[noisy]
    A_zeta[np.arange(k), d + 1 + n + np.arange(k)] = -1.0

    c = np.zeros(nv)
    c[d + 1:d + 1 + n] = data.weights * (1.0 - etas)
    c[d + 1 + n:] = data.weights[noisy] * etas[noisy]
    lower = np.zeros(nv)
    lower[:d + 1] = -np.inf
    return LPProblem(c=c, A_ub=np.vstack([A_xi, A_zeta]), b_ub=-np.ones(n + k), lower=lower)


def solve_hinge(data: Dataset, etas=None) -> tuple[LinearClassifier, float]:
    x, obj = simplex_solve(hinge_lp(data, etas))
    d = data.dim
    return LinearClassifier(x[:d], x[d]), obj


def minimize_hinge(data: Dataset, etas=None, config: SolverConfig | None = None) -> LinearClassifier:
    return solve_hinge(data, etas)[0]
