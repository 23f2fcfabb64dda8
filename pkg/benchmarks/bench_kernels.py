"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --m 4 --repeat 3

Each row reports the best of ``--repeat`` runs per backend and checks that
both backends returned identical arrays.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from quadapn import field as fld
from quadapn import kernels


def _cases(ctx, rng, size):
    q, q2 = ctx.q, ctx.q2
    a1 = rng.integers(0, q, size)
    a2 = rng.integers(0, q2, size)
    a3 = rng.integers(0, q2, size)
    C = rng.integers(0, q2, (size, 4))
    D = rng.integers(0, q2, (size, 4))
    a2_rows = np.arange(min(q2, 64))
    return {
        "theorem_grid": lambda: kernels.theorem_grid(ctx, 1, a2_rows),
        "theorem_triples": lambda: kernels.theorem_triples(ctx, a1, a2, a3),
        "family_apn_witness": lambda: kernels.family_apn_witness(ctx, a1, a2, a3),
        "f_tables": lambda: kernels.f_tables(ctx, a1[:256], a2[:256], a3[:256]),
        "linform_root_counts": lambda: kernels.linform_root_counts(ctx, C[:512], D[:512]),
        "linform_kernel_dims": lambda: kernels.linform_kernel_dims(ctx, C, D),
    }


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--size", type=int, default=4096, help="triples per call")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    if "compiled" not in kernels.available():
        raise SystemExit("quadapn._ext is not built; run `pip install -e . --no-build-isolation`")
    ctx = fld.make_field(args.m)
    cases = _cases(ctx, np.random.default_rng(args.seed), args.size)
    kernels.power_tables(ctx), kernels.circle_weights(ctx)   # warm the caches

    print(f"m={args.m} size={args.size} repeat={args.repeat}")
    print(f"{'kernel':<22}{'compiled s':>12}{'python s':>12}{'speedup':>10}  same")
    for name, fn in cases.items():
        with kernels.use("compiled"):
            tc, oc = _best(fn, args.repeat)
        with kernels.use("python"):
            tp, op = _best(fn, args.repeat)
        same = np.array_equal(oc, op)
        print(f"{name:<22}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x  {same}")


if __name__ == "__main__":
    main()
