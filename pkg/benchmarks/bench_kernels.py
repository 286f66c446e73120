"""Benchmark the compiled kernel against the pure-numpy fallback on the
workloads that dominate real sweeps.

Run:  python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from floquet_echo.backends import pure

try:
    from floquet_echo.backends import _core
except ImportError:
    _core = None

WORKLOADS = [
    # (label, modes, substeps), sized like the production sweeps
    ("ising point, L=1000 (low omega0)", 500, 32768),
    ("ising point, L=1000 (high omega0)", 500, 2048),
    ("dirac point, L=200", 40000, 2048),
    ("oracle point, L=64", 32, 32768),
]


def workload(m, s, seed=0):
    rng = np.random.default_rng(seed)
    static = np.column_stack(
        [np.zeros(m), rng.uniform(0.1, 1.0, m), rng.uniform(-2.0, 1.0, m)]
    )
    drive = -np.cos(2 * np.pi * (np.arange(s) + 0.5) / s)
    return static, drive, 0.01


def best_of(fn, repeats=3):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    print(f"{'workload':38s} {'modes':>7s} {'steps':>7s} "
          f"{'pure [s]':>10s} {'compiled [s]':>13s} {'speedup':>8s}")
    for label, m, s in WORKLOADS:
        static, drive, dt = workload(m, s)
        t_pure = best_of(lambda: pure.propagate_z_driven(static, drive, dt))
        if _core is not None:
            t_core = best_of(lambda: _core.propagate_z_driven(static, drive, dt))
            ref = pure.propagate_z_driven(static, drive, dt)
            got = _core.propagate_z_driven(static, drive, dt)
            assert np.max(np.abs(ref - got)) < 1e-12
            print(f"{label:38s} {m:7d} {s:7d} {t_pure:10.3f} "
                  f"{t_core:13.3f} {t_pure / t_core:7.1f}x")
        else:
            print(f"{label:38s} {m:7d} {s:7d} {t_pure:10.3f} "
                  f"{'(not built)':>13s} {'':>8s}")


if __name__ == "__main__":
    main()
