"""Hot loops of the 0-1 minimizers, each with a numba and a numpy implementation.

The public names (``zero_one_risk``, ``anneal_chain``, ``enumerate_hyperplanes``)
dispatch to the numba kernels unless ``NOISETOL_DISABLE_NUMBA`` is set. The
``*_numpy`` and ``*_numba`` variants stay importable for tests and benchmarks.

Conventions shared by all kernels: ``X`` is (N, d) float64, ``y`` holds +/-1
labels, ``cost`` is the per-point price of a misclassification, and a
classifier is the augmented vector ``v = (w, b)`` predicting +1 when
``w.x + b >= 0``.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import NUMBA_AVAILABLE, njit

RISK_TOL = 1e-12
_PARAM_TOL = 1e-15


# ---------------------------------------------------------------- 0-1 risk

@njit(cache=True)
def _risk_nb(X, y, cost, v):
    n, d = X.shape
    r = 0.0
    for i in range(n):
        m = v[d]
        for k in range(d):
            m += X[i, k] * v[k]
        pred = 1 if m >= 0.0 else -1
        if pred != y[i]:
            r += cost[i]
    return r


def _risk_np(X, y, cost, v):
    m = X @ v[:-1] + v[-1]
    pred = np.where(m >= 0.0, 1, -1)
    return float(cost[pred != y].sum())


def zero_one_risk_numpy(X, y, cost, v):
    return _risk_np(X, y, cost, v)


def batch_zero_one_risk(X, y, cost, V):
    """Risk of each row of ``V`` (K, d+1); numpy only, used for small candidate sets."""
    m = X @ V[:, :-1].T + V[:, -1]
    miss = np.where(m >= 0.0, 1, -1) != y[:, None]
    return cost @ miss


# ---------------------------------------------------------- annealing chain

@njit(cache=True)
def _anneal_nb(X, y, cost, v0, noise, unif, t0, decay, step0, step_floor, scale):
    d1 = v0.shape[0]
    v = v0 / math.sqrt(np.sum(v0 * v0))
    e = _risk_nb(X, y, cost, v)
    best = v.copy()
    best_e = e
    t = t0
    t_min = 1e-12 * t0
    cand = np.empty(d1)
    for it in range(noise.shape[0]):
        step = step0 * max(t / t0, step_floor)
        nrm = 0.0
        for k in range(d1):
            cand[k] = v[k] + step * noise[it, k]
            nrm += cand[k] * cand[k]
        nrm = math.sqrt(nrm)
        if nrm == 0.0:
            continue
        for k in range(d1):
            cand[k] /= nrm
        ec = _risk_nb(X, y, cost, cand)
        de = (ec - e) * scale
        if de <= 1e-9 or unif[it] < math.exp(-de / t):
            for k in range(d1):
                v[k] = cand[k]
            e = ec
            if e < best_e - RISK_TOL:
                best_e = e
                best[:] = v
        t = max(t * decay, t_min)
    return best, best_e


def _anneal_np(X, y, cost, v0, noise, unif, t0, decay, step0, step_floor, scale):
    v = v0 / math.sqrt(float(np.sum(v0 * v0)))
    e = _risk_np(X, y, cost, v)
    best = v.copy()
    best_e = e
    t = t0
    t_min = 1e-12 * t0
    for it in range(noise.shape[0]):
        step = step0 * max(t / t0, step_floor)
        cand = v + step * noise[it]
        nrm = math.sqrt(float(np.sum(cand * cand)))
        if nrm == 0.0:
            continue
        cand = cand / nrm
        ec = _risk_np(X, y, cost, cand)
        de = (ec - e) * scale
        if de <= 1e-9 or unif[it] < math.exp(-de / t):
            v = cand
            e = ec
            if e < best_e - RISK_TOL:
                best_e = e
                best = v.copy()
        t = max(t * decay, t_min)
    return best, best_e


def anneal_chain_numpy(X, y, cost, v0, noise, unif, t0, decay, step0, step_floor, scale):
    return _anneal_np(X, y, cost, v0, noise, unif, t0, decay, step0, step_floor, scale)


# ------------------------------------------------- hyperplane enumeration
#
# Every labelling a hyperplane can induce is also induced by one passing
# through d of the points, nudged so each of those d points lands on a chosen
# side. For each d-subset we take the hyperplane through it (normal n of unit
# length), and for each sign pattern s the least-norm direction delta with
# delta . x~_j = s_j on the subset; v = n + t delta with t at half the
# distance at which any off-plane point would change side. Both v and -v are
# candidates.

@njit(cache=True)
def _det(a):
    k = a.shape[0]
    if k == 1:
        return a[0, 0]
    if k == 2:
        return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if k == 3:
        return (a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
                - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
                + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]))
    return np.linalg.det(a)


@njit(cache=True)
def _better(r, v, best_r, best_v):
    if r < best_r - RISK_TOL:
        return True
    if r > best_r + RISK_TOL:
        return False
    d = v.shape[0] - 1
    wn = 0.0
    bn = 0.0
    for k in range(d):
        wn += v[k] * v[k]
        bn += best_v[k] * best_v[k]
    wn = math.sqrt(wn)
    bn = math.sqrt(bn)
    if wn < bn - _PARAM_TOL:
        return True
    if wn > bn + _PARAM_TOL:
        return False
    for k in range(v.shape[0]):
        if v[k] < best_v[k] - _PARAM_TOL:
            return True
        if v[k] > best_v[k] + _PARAM_TOL:
            return False
    return False


@njit(cache=True)
def _enumerate_nb(Xg, Xe, y, cost, combos, signs, best_r, best_v):
    n, d = Xg.shape
    d1 = d + 1
    Xa = np.ones((n, d1))
    Xa[:, :d] = Xg
    Xea = np.ones((Xe.shape[0], d1))
    Xea[:, :d] = Xe
    scale = max(1.0, np.max(np.abs(Xa)))
    in_set = np.zeros(n, dtype=np.bool_)
    minor = np.empty((d, d))
    nvec = np.empty(d1)
    v = np.empty(d1)
    vneg = np.empty(d1)
    valid = 0
    for c in range(combos.shape[0]):
        idx = combos[c]
        M = Xa[idx]
        for k in range(d1):
            col = 0
            for kk in range(d1):
                if kk == k:
                    continue
                for r in range(d):
                    minor[r, col] = M[r, kk]
                col += 1
            nvec[k] = (-1.0) ** k * _det(minor)
        nn = math.sqrt(np.sum(nvec * nvec))
        if nn <= 1e-12 * scale ** d:
            continue
        nvec /= nn
        G = M @ M.T
        if abs(_det(G)) <= 1e-24 * scale ** (2 * d):
            continue
        Ginv = np.linalg.inv(G)
        valid += 1
        for j in range(d):
            in_set[idx[j]] = True
        base_m = Xa @ nvec
        for s in range(signs.shape[0]):
            delta = M.T @ (Ginv @ signs[s])
            dm = Xa @ delta
            t = np.inf
            for j in range(n):
                if in_set[j]:
                    continue
                a = abs(base_m[j])
                b = abs(dm[j])
                if a > 1e-12 * scale and b > 0.0:
                    q = a / b
                    if q < t:
                        t = q
            t = 1.0 if t == np.inf else 0.5 * t
            nv = 0.0
            for k in range(d1):
                v[k] = nvec[k] + t * delta[k]
                nv += v[k] * v[k]
            nv = math.sqrt(nv)
            for k in range(d1):
                v[k] /= nv
                vneg[k] = -v[k]
            r_pos = 0.0
            r_neg = 0.0
            for i in range(Xea.shape[0]):
                m = 0.0
                for k in range(d1):
                    m += Xea[i, k] * v[k]
                pp = 1 if m >= 0.0 else -1
                pn = 1 if -m >= 0.0 else -1
                if pp != y[i]:
                    r_pos += cost[i]
                if pn != y[i]:
                    r_neg += cost[i]
            if _better(r_pos, v, best_r, best_v):
                best_r = r_pos
                best_v[:] = v
            if _better(r_neg, vneg, best_r, best_v):
                best_r = r_neg
                best_v[:] = vneg
        for j in range(d):
            in_set[idx[j]] = False
    return best_r, best_v, valid


def _det_np(a):
    k = a.shape[-1]
    if k == 1:
        return a[..., 0, 0]
    if k == 2:
        return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    if k == 3:
        return (a[..., 0, 0] * (a[..., 1, 1] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 1])
                - a[..., 0, 1] * (a[..., 1, 0] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 0])
                + a[..., 0, 2] * (a[..., 1, 0] * a[..., 2, 1] - a[..., 1, 1] * a[..., 2, 0]))
    return np.linalg.det(a)


def _better_py(r, v, best_r, best_v):
    if r < best_r - RISK_TOL:
        return True
    if r > best_r + RISK_TOL:
        return False
    wn = math.sqrt(float(np.sum(v[:-1] ** 2)))
    bn = math.sqrt(float(np.sum(best_v[:-1] ** 2)))
    if wn < bn - _PARAM_TOL:
        return True
    if wn > bn + _PARAM_TOL:
        return False
    for a, b in zip(v, best_v):
        if a < b - _PARAM_TOL:
            return True
        if a > b + _PARAM_TOL:
            return False
    return False


def _enumerate_np(Xg, Xe, y, cost, combos, signs, best_r, best_v, chunk_budget=4_000_000):
    n, d = Xg.shape
    d1 = d + 1
    Xa = np.hstack([Xg, np.ones((n, 1))])
    Xea = np.hstack([Xe, np.ones((Xe.shape[0], 1))])
    scale = max(1.0, float(np.max(np.abs(Xa))))
    n_sign = signs.shape[0]
    chunk = max(1, chunk_budget // (n_sign * n * 2))
    best_v = best_v.copy()
    valid_total = 0
    for start in range(0, combos.shape[0], chunk):
        idx = combos[start:start + chunk]
        M = Xa[idx]  # (C, d, d1)
        nvec = np.empty((idx.shape[0], d1))
        for k in range(d1):
            minor = np.delete(M, k, axis=2)
            nvec[:, k] = (-1.0) ** k * _det_np(minor)
        nn = np.sqrt(np.sum(nvec * nvec, axis=1))
        G = M @ np.swapaxes(M, 1, 2)
        ok = (nn > 1e-12 * scale ** d) & (np.abs(_det_np(G)) > 1e-24 * scale ** (2 * d))
        if not np.any(ok):
            continue
        idx, M, G = idx[ok], M[ok], G[ok]
        nvec = nvec[ok] / nn[ok, None]
        valid_total += idx.shape[0]
        Ginv = np.linalg.inv(G)
        delta = np.einsum("cji,cjk,sk->csi", M, Ginv, signs)  # (C, S, d1)
        base_m = nvec @ Xa.T  # (C, N)
        dm = delta @ Xa.T  # (C, S, N)
        member = np.zeros((idx.shape[0], n), dtype=bool)
        np.put_along_axis(member, idx, True, axis=1)
        a = np.abs(base_m)[:, None, :]
        b = np.abs(dm)
        usable = (~member)[:, None, :] & (a > 1e-12 * scale) & (b > 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(usable, a / np.where(b > 0, b, 1.0), np.inf)
        t = q.min(axis=2)
        t = np.where(np.isinf(t), 1.0, 0.5 * t)
        v = nvec[:, None, :] + t[..., None] * delta
        v /= np.sqrt(np.sum(v * v, axis=2))[..., None]
        m = v @ Xea.T  # (C, S, N)
        r_pos = np.where(np.where(m >= 0.0, 1, -1) != y, cost, 0.0).sum(axis=2)
        r_neg = np.where(np.where(-m >= 0.0, 1, -1) != y, cost, 0.0).sum(axis=2)
        # interleave in the same order as the compiled loop: (c, s, +), (c, s, -)
        risks = np.stack([r_pos, r_neg], axis=2).reshape(-1)
        cands = np.stack([v, -v], axis=2).reshape(-1, d1)
        rmin = risks.min()
        if rmin > best_r + RISK_TOL:
            continue
        for j in np.flatnonzero(risks <= rmin + RISK_TOL):
            if _better_py(risks[j], cands[j], best_r, best_v):
                best_r = float(risks[j])
                best_v = cands[j].copy()
    return best_r, best_v, valid_total


def enumerate_hyperplanes_numpy(Xg, Xe, y, cost, combos, signs, best_r, best_v):
    return _enumerate_np(Xg, Xe, y, cost, combos, signs, best_r, best_v)


if NUMBA_AVAILABLE:
    zero_one_risk_numba = _risk_nb
    anneal_chain_numba = _anneal_nb
    enumerate_hyperplanes_numba = _enumerate_nb
    zero_one_risk = _risk_nb
    anneal_chain = _anneal_nb
    enumerate_hyperplanes = _enumerate_nb
else:
    zero_one_risk = _risk_np
    anneal_chain = _anneal_np
    enumerate_hyperplanes = _enumerate_np

better_candidate = _better_py
