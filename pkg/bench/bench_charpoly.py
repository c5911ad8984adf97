"""Compare the compiled and pure-Python characteristic-polynomial kernels.

    python3 bench/bench_charpoly.py [--sizes 10 20 40] [--repeat 5]

Matrices follow the campaign distribution (entries p^{b_j} * r, r < p^{n+2}).
"""

import argparse
import statistics
import time

from slopekit.bounds import shape_from_profile, sigma_profile
from slopekit.harness import gen_matrix
from slopekit.kernels import _pure

try:
    from slopekit.kernels import _compiled
except ImportError:
    _compiled = None


def bench(fn, rows, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(rows)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 30, 40])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--p", type=int, default=5)
    args = ap.parse_args()

    prof = sigma_profile(2, 1, 5)
    print(f"{'t':>4} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for t in args.sizes:
        # generate at rank >= sum(sigma), then keep the leading t x t block
        shape = shape_from_profile(prof, max(t, prof.total))
        rows = [list(r[:t]) for r in gen_matrix(shape, args.p, seed=t).rows[:t]]
        tp, ref = bench(_pure.berkowitz, rows, args.repeat)
        if _compiled is None:
            print(f"{t:>4} {tp:>10.4f} {'n/a':>13} {'n/a':>8}")
            continue
        tc, got = bench(_compiled.berkowitz, rows, args.repeat)
        assert got == ref, "backends disagree"
        print(f"{t:>4} {tp:>10.4f} {tc:>13.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
