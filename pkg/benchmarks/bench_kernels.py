"""Compare the compiled and pure-Python batch invariant kernels.

Usage::

    python benchmarks/bench_kernels.py [--grid 64] [--repeat 3]

For each registry profile family in the list below the partial-derivative
stack of a ``grid x grid`` rotational patch is built once, then each
available backend evaluates it ``repeat`` times.  The best time, the
throughput and the largest disagreement between backends are printed.
"""

import argparse
import time

import numpy as np

from minkchen import rotational as rot
from minkchen._kernels import available_backends, get_kernels
from minkchen.registry import BY_KEY

PROFILES = ("hyp-spiral", "ell-spiral", "euc-spiral")


def _best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = available_backends()
    print(f"backends: {', '.join(backends)}; grid {args.grid}x{args.grid}")
    header = f"{'profile':<12} {'backend':<8} {'best [s]':>10} {'points/s':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for key in PROFILES:
        profile = BY_KEY[key].profile()
        patch = rot.build(profile)
        us = np.linspace(*profile.domain, args.grid)
        vs = patch.v_samples(args.grid)
        parts = np.ascontiguousarray(patch.partials_grid(us, vs).reshape(-1, 5, 4))
        metric = np.ascontiguousarray(patch.metric, dtype=float)
        n = parts.shape[0]
        times, tables = {}, {}
        for name in backends:
            kern = get_kernels(name)
            times[name], tables[name] = _best_time(lambda: kern.invariant_rows(parts, metric),
                                                   args.repeat)
        ref = times.get("python")
        for name in backends:
            speedup = ref / times[name] if ref else float("nan")
            print(f"{key:<12} {name:<8} {times[name]:>10.4f} {n / times[name]:>12.0f} "
                  f"{speedup:>7.1f}x")
        if len(tables) > 1:
            a, b = (tables[k] for k in backends[:2])
            diff = np.nanmax(np.abs(a - b) / (1.0 + np.abs(b)), initial=0.0)
            same_nan = np.array_equal(np.isnan(a), np.isnan(b))
            print(f"{'':<12} max relative backend difference {diff:.2e}, "
                  f"NaN pattern {'identical' if same_nan else 'DIFFERS'}")


if __name__ == "__main__":
    main()
