"""Time `evolve` with the numba kernel against the pure-numpy kernel.

    python benchmarks/bench_kernels.py [--steps 500 2000 5000] [--repeat 3]

Both paths are timed in the same process through ``evolve(..., backend=...)``;
the numba path is warmed up first so compilation is not counted.
"""

import argparse
import time

import numpy as np

from aqwalk import kernels
from aqwalk.coin import CoinParams
from aqwalk.engine import WalkConfig, evolve


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, nargs="+", default=[500, 2000, 5000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not kernels.HAS_NUMBA:
        print("numba unavailable (or AQWALK_NO_NUMBA set): both columns use numpy")
    evolve(WalkConfig(steps=4), backend="numba")
    evolve(WalkConfig(steps=4, mode="static"), backend="numba")

    print(f"{'mode':8s} {'steps':>6s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s} {'max |diff|':>11s}")
    for mode in ("dynamic", "static"):
        for T in args.steps:
            cfg = WalkConfig(
                sequence="fibonacci", mode=mode, steps=T,
                coin1=CoinParams(0.2, 0.0, 0.0), coin2=CoinParams(0.2, 2.1, 4.7),
            )
            t_np = best_of(lambda: evolve(cfg, backend="numpy"), args.repeat)
            t_nb = best_of(lambda: evolve(cfg, backend="numba"), args.repeat)
            diff = np.abs(evolve(cfg, backend="numpy").sigma - evolve(cfg, backend="numba").sigma).max()
            print(f"{mode:8s} {T:6d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x {diff:11.2e}")


if __name__ == "__main__":
    main()
