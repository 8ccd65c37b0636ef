"""Minimizers for the exponential and log risks (smooth, convex in the score)."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..risk import LinearClassifier, LossKind, check_etas
from .config import ConvergenceError, SolverConfig, UnboundedObjectiveError
from .linalg import SingularMatrixError, solve_linear_system

_EXP_CAP = float(np.log(np.finfo(np.float64).max)) - 1.0


def _exp(z):
    return np.exp(np.minimum(z, _EXP_CAP))


def _sigmoid(z):
    # 1 / (1 + exp(-z)) without overflow
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _loss_derivs(kind, m):
    """Value, first and second derivative of the loss as a function of the margin."""
    if kind is LossKind.EXPONENTIAL:
        e = _exp(-m)
        return e, -e, e
    val = np.logaddexp(0.0, -m)
    s = _sigmoid(m)
    return val, -(1.0 - s), s * (1.0 - s)


class _Objective:
    """Expected noisy risk as a function of the per-point scores."""

    def __init__(self, kind, data: Dataset, etas):
        self.kind = kind
        self.y = data.labels.astype(np.float64)
        self.a = data.weights * (1.0 - etas)
        self.c = data.weights * etas

    def __call__(self, s):
        m = self.y * s
        v1, d1, h1 = _loss_derivs(self.kind, m)
        v2, d2, h2 = _loss_derivs(self.kind, -m)
        f = float(self.a @ v1 + self.c @ v2)
        g = self.a * d1 * self.y - self.c * d2 * self.y
        h = self.a * h1 + self.c * h2
        return f, g, h


def _check_bounded(data, etas, kind):
    if np.any(etas > 0):
        return
    if np.all(data.labels == 1) or np.all(data.labels == -1):
        raise UnboundedObjectiveError(
            f"{kind.value} risk with single-class labels has infimum 0 only at infinity; no minimizer exists"
        )


def minimize_smooth_convex(
    data: Dataset,
    kind,
    etas=None,
    fix_w=None,
    config: SolverConfig | None = None,
) -> LinearClassifier:
    """Minimize the (expected noisy) exponential or log risk.

    With ``fix_w`` only the bias is optimized, by bisection on the derivative;
    otherwise a damped Newton method runs over (w, b) until the gradient norm
    is at most ``config.tol``.
    """
    config = config or SolverConfig()
    kind = LossKind.parse(kind)
    if kind not in (LossKind.EXPONENTIAL, LossKind.LOG):
        raise ValueError(f"smooth solver handles exponential and log losses, not {kind.value}")
    etas = np.zeros(data.size) if etas is None else check_etas(etas, data.size)
    _check_bounded(data, etas, kind)
    obj = _Objective(kind, data, etas)
    if fix_w is not None:
        w = np.atleast_1d(np.asarray(fix_w, dtype=np.float64))
        if w.shape != (data.dim,):
            raise ValueError(f"fix_w must have length {data.dim}")
        return LinearClassifier(w, _bias_by_bisection(obj, data.points @ w, config))
    return _newton(obj, data, config)


def _bias_by_bisection(obj, s0, config):
    def deriv(b):
        return float(np.sum(obj(s0 + b)[1]))

    center = -float(np.median(s0))
    lo, hi = center - 1.0, center + 1.0
    step = 1.0
    for _ in range(1100):
        if deriv(lo) <= 0.0:
            break
        step *= 2.0
        lo = center - step
    else:
        raise UnboundedObjectiveError("risk keeps decreasing as the bias goes to -infinity")
    step = 1.0
    for _ in range(1100):
        if deriv(hi) >= 0.0:
            break
        step *= 2.0
        hi = center + step
    else:
        raise UnboundedObjectiveError("risk keeps decreasing as the bias goes to +infinity")

    for _ in range(config.max_iters):
        mid = 0.5 * (lo + hi)
        g = deriv(mid)
        if abs(g) <= config.tol or not (lo < mid < hi):
            return mid
        if g > 0:
            hi = mid
        else:
            lo = mid
    raise ConvergenceError(f"bias bisection did not converge in {config.max_iters} iterations")


def _newton(obj, data, config):
    Xa = np.hstack([data.points, np.ones((data.size, 1))])
    v = np.zeros(Xa.shape[1])
    f, gs, hs = obj(Xa @ v)
    for _ in range(config.max_iters):
        grad = Xa.T @ gs
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= config.tol:
            return LinearClassifier(v[:-1], v[-1])
        H = (Xa * hs[:, None]).T @ Xa
        step = None
        damping = 0.0
        for _ in range(40):
            try:
                step = solve_linear_system(H + damping * np.eye(H.shape[0]), -grad)
                break
            except SingularMatrixError:
                damping = max(1e-12 * max(1.0, float(np.trace(H))), damping * 10.0)
        if step is None:
            step = -grad
        slope = float(grad @ step)
        if slope >= 0:
            step, slope = -grad, -gnorm**2
        alpha = 1.0
        for _ in range(60):
            cand = v + alpha * step
            f_new, gs_new, hs_new = obj(Xa @ cand)
            if f_new <= f + 1e-4 * alpha * slope:
                break
            # at the optimum f stops resolving; accept steps that still shrink the gradient
            if f_new <= f + 1e-14 * abs(f) and np.linalg.norm(Xa.T @ gs_new) < gnorm:
                break
            alpha *= 0.5
        else:
            raise ConvergenceError(f"line search failed at gradient norm {gnorm:.3g}")
        v, f, gs, hs = cand, f_new, gs_new, hs_new
    raise ConvergenceError(f"Newton iterations did not reach gradient norm {config.tol} in {config.max_iters} steps")
