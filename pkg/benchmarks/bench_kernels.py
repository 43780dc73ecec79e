"""Time the compiled and numpy candidate scans on the same inputs.

    python benchmarks/bench_kernels.py [--states 60] [--m3 40] [--pivots 40] [--repeat 3]

Inputs are random but shaped like a real MEK_l closure step: every pairing
of state and level-3 frontier points against every pivot point.  Both
backends must return identical arrays; the script exits non-zero otherwise.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from rotforge.costs import ErrorGrid
from rotforge.kernels import backends


def make_inputs(n_states: int, n_m3: int, n_pivots: int, seed: int):
    rng = np.random.default_rng(seed)
    shape = (n_states, n_m3)
    p0 = rng.uniform(0.8, 1.0, shape)
    p1 = p0 * rng.uniform(0.4, 0.6, shape)
    e0 = 10.0 ** rng.uniform(-20, -4, shape) * p0
    e1 = e0 + 0.25 * p1 * 1e-3
    base = rng.uniform(1, 1e4, shape)
    r_eta = np.sort(10.0 ** rng.uniform(-22, -3, n_pivots))
    r_cost = rng.uniform(1, 1e4, n_pivots)
    return [np.ascontiguousarray(a) for a in (p0, p1, e0, e1, base, r_eta, r_cost)]


def timed(fn, args, repeat: int) -> tuple[float, tuple]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--states", type=int, default=60)
    ap.add_argument("--m3", type=int, default=40)
    ap.add_argument("--pivots", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    grid = ErrorGrid()
    inputs = make_inputs(args.states, args.m3, args.pivots, args.seed)
    extra = (grid.hi_log, float(grid.density), grid.n_bins)
    impls = backends()
    n = args.states * args.m3 * args.pivots
    results = {}
    print(f"{n} MEK candidates, {args.states * args.pivots} rotation candidates")
    for name, mod in impls.items():
        t_mek, out_mek = timed(mod.mek_candidates, (*inputs, *extra), args.repeat)
        m_err = np.ascontiguousarray(inputs[2][:, 0] / inputs[0][:, 0])
        m_cost = np.ascontiguousarray(inputs[4][:, 0])
        t_rot, out_rot = timed(mod.rotation_candidates, (m_err, m_cost, inputs[5], inputs[6], *extra), args.repeat)
        results[name] = (out_mek, out_rot)
        print(f"{name:>7}: mek {t_mek * 1e3:9.2f} ms   rotation {t_rot * 1e3:8.2f} ms")
    if "cython" not in impls:
        print("compiled backend not built; only the numpy twin was timed")
        return 0
    same = all(
        np.array_equal(a, b)
        for pa, pb in zip(results["python"], results["cython"])
        for a, b in zip(pa, pb)
    )
    print("outputs identical" if same else "OUTPUTS DIFFER")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
