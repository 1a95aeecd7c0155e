"""Compare the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

Both backends produce bit-identical outputs (asserted below); this
script only measures throughput.
"""
import time

import numpy as np

from leosim import _kernels_py, kernels


def bench(label, fn, args, repeats=200):
    fn(*args)  # warm-up
    start = time.perf_counter()
    for _ in range(repeats):
        out = fn(*args)
    elapsed = (time.perf_counter() - start) / repeats
    print(f"  {label:<14} {elapsed * 1e6:10.1f} us/call")
    return out, elapsed


def bench_schedule(n_tasks, n_sats, rng):
    sizes = rng.uniform(1e5, 5e6, size=n_tasks)
    assign = rng.integers(0, n_sats, size=n_tasks).astype(np.int64)
    up_rate = rng.uniform(1e5, 5e6, size=n_sats)
    comp_speed = rng.uniform(1e6, 1e7, size=n_sats)
    hops = rng.integers(0, 3, size=n_sats).astype(np.int64)
    args = (sizes, assign, up_rate, comp_speed, hops, up_rate * 10.0,
            1e8, 0.0)
    print(f"schedule_frozen  N={n_tasks} J={n_sats}")
    fast, t_fast = bench("compiled", kernels.schedule_frozen, args)
    slow, t_slow = bench("pure python", _kernels_py.schedule_frozen, args)
    for a, b in zip(fast, slow):
        assert np.array_equal(np.asarray(a), np.asarray(b))
    print(f"  speedup        {t_slow / t_fast:10.1f}x\n")


def bench_gae(n, rng):
    rewards = rng.standard_normal(n)
    values = rng.standard_normal(n)
    dones = (rng.random(n) < 0.1).astype(np.float64)
    args = (rewards, values, dones, 0.3, 0.99, 0.95)
    print(f"gae_backward     T={n}")
    fast, t_fast = bench("compiled", kernels.gae_backward, args)
    slow, t_slow = bench("pure python", _kernels_py.gae_backward, args)
    assert np.array_equal(np.asarray(fast), np.asarray(slow))
    print(f"  speedup        {t_slow / t_fast:10.1f}x\n")


def main():
    if not kernels.HAVE_COMPILED:
        print("compiled extension not available; benchmarking the fallback "
              "against itself is pointless -- rebuild with Cython first")
        return
    rng = np.random.default_rng(0)
    for n, j in ((8, 3), (64, 8), (512, 15)):
        bench_schedule(n, j, rng)
    for n in (256, 2048, 16384):
        bench_gae(n, rng)


if __name__ == "__main__":
    main()
