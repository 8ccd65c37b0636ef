"""Dense two-phase tableau simplex with Bland's anti-cycling rule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SolverError


class InfeasibleError(SolverError):
    pass


class UnboundedError(SolverError):
    pass


def _as_matrix(a, ncols):
    if a is None:
        return np.zeros((0, ncols))
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if a.size == 0:
        return np.zeros((0, ncols))
    return a


@dataclass(frozen=True, eq=False)
class LPProblem:
    """minimize c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= lower.

    ``lower`` defaults to zeros; an entry of ``-inf`` makes that variable free.
    """

    c: np.ndarray
    A_ub: np.ndarray = None
    b_ub: np.ndarray = None
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None
    lower: np.ndarray = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        n = c.size
        A_ub = _as_matrix(self.A_ub, n)
        A_eq = _as_matrix(self.A_eq, n)
        b_ub = np.zeros(0) if self.b_ub is None else np.asarray(self.b_ub, dtype=np.float64).reshape(-1)
        b_eq = np.zeros(0) if self.b_eq is None else np.asarray(self.b_eq, dtype=np.float64).reshape(-1)
        lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=np.float64).reshape(-1)
        if A_ub.shape != (b_ub.size, n) or A_eq.shape != (b_eq.size, n) or lower.shape != (n,):
            raise ValueError("inconsistent LP dimensions")
        for arr in (c, A_ub, A_eq, b_ub, b_eq):
            if not np.all(np.isfinite(arr)):
                raise ValueError("LP data must be finite")
        if np.any(np.isnan(lower)) or np.any(lower == np.inf):
            raise ValueError("lower bounds must be finite or -inf")
        for name, val in (("c", c), ("A_ub", A_ub), ("b_ub", b_ub), ("A_eq", A_eq), ("b_eq", b_eq), ("lower", lower)):
            object.__setattr__(self, name, val)

    @property
    def num_vars(self):
        return self.c.size


def _pivot(T, row, col):
    T[row] /= T[row, col]
    f = T[:, col].copy()
    f[row] = 0.0
    T -= np.outer(f, T[row])


def _run(T, basis, ncols, allowed, tol, max_pivots, counter):
    m = T.shape[0] - 1
    while True:
        rc = T[-1, :ncols]
        entering = np.flatnonzero((rc < -tol) & allowed)
        if entering.size == 0:
            return
        j = entering[0]
        col = T[:m, j]
        pos = col > tol
        if not pos.any():
            raise UnboundedError("LP objective is unbounded below")
        rhs = T[:m, -1]
        ratios = np.full(m, np.inf)
        ratios[pos] = rhs[pos] / col[pos]
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + tol * max(1.0, abs(rmin)))
        i = ties[np.argmin(basis[ties])]
        _pivot(T, i, j)
        basis[i] = j
        counter[0] += 1
        if counter[0] > max_pivots:
            raise SolverError(f"simplex exceeded {max_pivots} pivots")


def simplex_solve(lp: LPProblem, tol: float = 1e-9, max_pivots: int = 200_000):
    """Return (x, objective) for an optimal basic solution.

    Raises InfeasibleError or UnboundedError.
    """
    n = lp.num_vars
    free = np.isneginf(lp.lower)
    shift = np.where(free, 0.0, lp.lower)

    # columns: one per bounded variable, two (plus/minus) per free variable
    col_of = []
    for j in range(n):
        col_of.append((j, 1.0))
        if free[j]:
            col_of.append((j, -1.0))
    nx = len(col_of)

    def expand(A):
        out = np.zeros((A.shape[0], nx))
        for k, (j, sgn) in enumerate(col_of):
            out[:, k] = sgn * A[:, j]
        return out

    m_ub, m_eq = lp.b_ub.size, lp.b_eq.size
    m = m_ub + m_eq
    A = np.vstack([expand(lp.A_ub), expand(lp.A_eq)]) if m else np.zeros((0, nx))
    b = np.concatenate([lp.b_ub - lp.A_ub @ shift, lp.b_eq - lp.A_eq @ shift])
    c = np.array([sgn * lp.c[j] for j, sgn in col_of])

    # slacks for <= rows
    S = np.zeros((m, m_ub))
    S[np.arange(m_ub), np.arange(m_ub)] = 1.0
    neg = b < 0
    A[neg] *= -1
    S[neg] *= -1
    b = np.abs(b)

    needs_art = np.ones(m, dtype=bool)
    needs_art[:m_ub] = neg[:m_ub]
    art_rows = np.flatnonzero(needs_art)
    n_art = art_rows.size
    Art = np.zeros((m, n_art))
    Art[art_rows, np.arange(n_art)] = 1.0

    ncols = nx + m_ub + n_art
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :nx] = A
    T[:m, nx:nx + m_ub] = S
    T[:m, nx + m_ub:ncols] = Art
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.int64)
    slack_rows = np.flatnonzero(~needs_art)
    basis[slack_rows] = nx + slack_rows
    basis[art_rows] = nx + m_ub + np.arange(n_art)

    scale = max(1.0, float(np.max(np.abs(T[:m]))) if m else 1.0)
    ptol = tol * scale
    counter = [0]

    if n_art:
        T[-1, nx + m_ub:ncols] = 1.0
        T[-1] -= T[art_rows].sum(axis=0)
        _run(T, basis, ncols, np.ones(ncols, dtype=bool), ptol, max_pivots, counter)
        if -T[-1, -1] > ptol * max(1.0, float(b.max(initial=0.0))):
            raise InfeasibleError(f"LP is infeasible (phase-1 residual {-T[-1, -1]:.3g})")
        # pivot zero-level artificials out of the basis; drop redundant rows
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= nx + m_ub:
                cand = np.flatnonzero(np.abs(T[i, :nx + m_ub]) > ptol)
                if cand.size:
                    _pivot(T, i, cand[0])
                    basis[i] = cand[0]
                else:
                    keep[i] = False
        if not keep.all():
            T = np.vstack([T[:m][keep], T[-1:]])
            basis = basis[keep]
            m = int(keep.sum())
        T = np.hstack([T[:, :nx + m_ub], T[:, -1:]])
        ncols = nx + m_ub

    T[-1, :] = 0.0
    T[-1, :nx] = c
    for i in range(m):
        cb = T[-1, basis[i]]
        if cb != 0.0:
            T[-1] -= cb * T[i]
    _run(T, basis, ncols, np.ones(ncols, dtype=bool), ptol, max_pivots, counter)

    z = np.zeros(ncols)
    z[basis] = T[:m, -1]
    x = shift.copy()
    for k, (j, sgn) in enumerate(col_of):
        x[j] += sgn * z[k]
    return x, float(lp.c @ x)
