"""Closed-form squared-loss minimizers: least squares and Fisher's discriminant."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..risk import LinearClassifier, check_etas
from .linalg import solve_linear_system


def _augment(points, fit_bias):
    return np.hstack([points, np.ones((points.shape[0], 1))]) if fit_bias else points


def normal_equations(data: Dataset, fit_bias: bool = True, etas=None):
    """Weighted second-moment matrix and right-hand side of the squared-loss optimum.

    With ``etas`` the right-hand side is the expectation over label flips,
    sum_i w_i (1 - 2 eta_i) y_i x~_i.
    """
    Xa = _augment(data.points, fit_bias)
    wy = data.weights * data.labels
    if etas is not None:
        wy = wy * (1.0 - 2.0 * check_etas(etas, data.size))
    moment = (Xa * data.weights[:, None]).T @ Xa
    rhs = Xa.T @ wy
    return moment, rhs


def least_squares(data: Dataset, fit_bias: bool = True, etas=None) -> LinearClassifier:
    moment, rhs = normal_equations(data, fit_bias, etas)
    sol = solve_linear_system(moment, rhs)
    if fit_bias:
        return LinearClassifier(sol[:-1], sol[-1])
    return LinearClassifier(sol, 0.0)


def canonical_direction(w) -> np.ndarray:
    """Unit vector along ``w`` whose first non-negligible component is positive."""
    w = np.asarray(w, dtype=np.float64)
    nrm = np.linalg.norm(w)
    if nrm == 0:
        raise ValueError("zero vector has no direction")
    u = w / nrm
    lead = np.flatnonzero(np.abs(u) > 1e-12)[0]
    return u if u[lead] > 0 else -u


def _class_stats(data: Dataset):
    pos = data.labels == 1
    neg = ~pos
    if not pos.any() or not neg.any():
        raise ValueError("Fisher discriminant needs both classes to be non-empty")
    w = data.weights
    X = data.points
    m_pos = w[pos].sum()
    m_neg = w[neg].sum()
    mu_pos = w[pos] @ X[pos] / m_pos
    mu_neg = w[neg] @ X[neg] / m_neg
    return pos, neg, m_pos, m_neg, mu_pos, mu_neg


def within_class_scatter(data: Dataset) -> np.ndarray:
    pos, neg, _, _, mu_pos, mu_neg = _class_stats(data)
    X = data.points
    # weights rescaled by N so uniform weights give the textbook count-based scatter
    w = data.weights * data.size
    cp = X[pos] - mu_pos
    cn = X[neg] - mu_neg
    return (cp * w[pos, None]).T @ cp + (cn * w[neg, None]).T @ cn


def fld(data: Dataset) -> LinearClassifier:
    """Fisher discriminant with unit-norm weight and threshold at the grand mean.

    The direction is S_W^{-1}(mu_pos - mu_neg), so the positive class mean
    scores positive.
    """
    _, _, _, _, mu_pos, mu_neg = _class_stats(data)
    direction = solve_linear_system(within_class_scatter(data), mu_pos - mu_neg)
    direction = direction / np.linalg.norm(direction)
    mu = data.weights @ data.points
    return LinearClassifier(direction, -float(direction @ mu))


def fld_expected_direction(data: Dataset, eta_pos: float, eta_neg: float) -> np.ndarray:
    """Fisher direction learnt from the flip-averaged class means.

    Under class-conditional flips the noisy class means are fixed mixtures of
    the clean ones. Fitting the discriminant as a least-squares problem then
    solves S_T w = mu_pos^eta - mu_neg^eta with the label-free total scatter
    S_T, which is what is computed here. Returns a unit vector.
    """
    check_etas([eta_pos, eta_neg], 2)
    _, _, m_pos, m_neg, mu_pos, mu_neg = _class_stats(data)
    stay_pos, move_neg = m_pos * (1 - eta_pos), m_neg * eta_neg
    stay_neg, move_pos = m_neg * (1 - eta_neg), m_pos * eta_pos
    mu_pos_eta = (stay_pos * mu_pos + move_neg * mu_neg) / (stay_pos + move_neg)
    mu_neg_eta = (stay_neg * mu_neg + move_pos * mu_pos) / (stay_neg + move_pos)
    X = data.points
    w = data.weights * data.size
    c = X - data.weights @ X
    total_scatter = (c * w[:, None]).T @ c
    direction = solve_linear_system(total_scatter, mu_pos_eta - mu_neg_eta)
    return direction / np.linalg.norm(direction)
