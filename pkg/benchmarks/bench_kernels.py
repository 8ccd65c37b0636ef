"""Time the numba kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeats 5 --points 150

Results of the two backends are also compared, so a speedup never hides a
divergence.
"""

import argparse
import itertools
import time

import numpy as np

from noisetol import kernels
from noisetol.noise import make_rng


def best_of(fn, repeats):
    times = []
    out = None
    for _ in range(repeats):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases(n, iters, seed):
    rng = make_rng(seed)
    X4 = rng.standard_normal((n, 4))
    y4 = np.where(X4 @ np.array([1.0, -0.5, 0.3, 0.2]) + 0.1 * rng.standard_normal(n) >= 0, 1, -1).astype(np.int64)
    cost4 = np.full(n, 1.0 / n)
    v0 = rng.standard_normal(5)
    noise = rng.standard_normal((iters, 5))
    unif = rng.random(iters)

    m = 60
    X2 = rng.standard_normal((m, 2))
    y2 = np.where(X2[:, 0] + X2[:, 1] >= 0, 1, -1).astype(np.int64)
    cost2 = np.full(m, 1.0 / m)
    combos = np.array(list(itertools.combinations(range(m), 2)), dtype=np.int64)
    signs = np.array(list(itertools.product([-1.0, 1.0], repeat=2)))

    v = np.append(rng.standard_normal(4), 0.0)
    return {
        "zero_one_risk": (
            lambda f: f(X4, y4, cost4, v),
            kernels.zero_one_risk_numpy,
            getattr(kernels, "zero_one_risk_numba", None),
        ),
        "anneal_chain": (
            lambda f: f(X4, y4, cost4, v0, noise, unif, 1.0, 0.995, 0.5, 0.02, float(n)),
            kernels.anneal_chain_numpy,
            getattr(kernels, "anneal_chain_numba", None),
        ),
        "enumerate_hyperplanes": (
            lambda f: f(X2, X2, y2, cost2, combos, signs, np.inf, np.zeros(3)),
            kernels.enumerate_hyperplanes_numpy,
            getattr(kernels, "enumerate_hyperplanes_numba", None),
        ),
    }


def risk_of(result):
    # kernels return either a scalar risk or a tuple whose risk sits at index 0 or 1
    if np.isscalar(result):
        return float(result)
    a, b = result[0], result[1]
    return float(b) if np.ndim(a) else float(a)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=150)
    p.add_argument("--iters", type=int, default=20000, help="annealing chain length")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    table = cases(args.points, args.iters, args.seed)
    print(f"{'kernel':<24}{'numpy (s)':>12}{'numba (s)':>12}{'speedup':>10}  agree")
    for name, (call, np_fn, nb_fn) in table.items():
        t_np, r_np = best_of(lambda: call(np_fn), args.repeats)
        if nb_fn is None:
            print(f"{name:<24}{t_np:>12.6f}{'n/a':>12}{'':>10}  numba unavailable")
            continue
        call(nb_fn)  # compile outside the timed region
        t_nb, r_nb = best_of(lambda: call(nb_fn), args.repeats)
        agree = abs(risk_of(r_np) - risk_of(r_nb)) <= kernels.RISK_TOL
        print(f"{name:<24}{t_np:>12.6f}{t_nb:>12.6f}{t_np / t_nb:>9.1f}x  {'yes' if agree else 'NO'}")


if __name__ == "__main__":
    main()
