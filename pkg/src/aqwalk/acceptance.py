"""Acceptance experiments, each returning ``(passed, detail)``.

Used by ``aqwalk accept`` and by ``tests/test_acceptance.py``. Runs are
scaled down from the full T=5000, 201x201 protocol where noted.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .analysis import fit_exponent, summarize_entropy
from .coin import TWO_PI, CoinParams
from .engine import WalkConfig, evolve
from .oracle import brute_force_evolve
from .sequences import fibonacci_word, rudin_shapiro_word, thue_morse_word
from .sweep import SweepConfig, run_sweep, summarize_fractions

PI = math.pi
KINDS = ("fibonacci", "thue-morse", "rudin-shapiro", "homogeneous", "random")
APERIODIC = ("fibonacci", "thue-morse", "rudin-shapiro")

# (theta, phi) of the rho scan, read as radians and as multiples of pi
RHO_SCAN_POINT = {"rad": (0.67, 1.49), "pi": (0.67 * PI, 1.49 * PI)}


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    check: Callable[[], tuple[bool, str]]


def _walk(sequence, rho, theta, phi, steps, mode="dynamic", seed=0, rho2=None):
    cfg = WalkConfig(
        sequence=sequence,
        mode=mode,
        steps=steps,
        coin1=CoinParams(rho, 0.0, 0.0),
        coin2=CoinParams(rho if rho2 is None else rho2, theta, phi),
        seed=seed,
    )
    return evolve(cfg)


def sequences_exact() -> tuple[bool, str]:
    t0 = time.perf_counter()
    fib = str(fibonacci_word(25)) == "0 1 0 0 1 0 1 0 0 1 0 0 1 0 1 0 0 1 0 1 0 0 1 0 0"
    tm = str(thue_morse_word(25)) == "0 1 1 0 1 0 0 1 1 0 0 1 0 1 1 0 1 0 0 1 0 1 1 0 0"
    rs = rudin_shapiro_word(16).as_signs().tolist() == [1, 1, 1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, -1, 1, -1]

    N = 10**5
    t = thue_morse_word(2 * N).symbols.astype(np.int64)
    n = np.arange(N)
    tm_rec = np.array_equal(t[2 * n], t[n]) and np.array_equal(t[2 * n + 1], 1 - t[n])
    r = rudin_shapiro_word(2 * N).as_signs()
    rs_rec = np.array_equal(r[2 * n], r[n]) and np.array_equal(r[2 * n + 1], r[n] * (-1) ** n)
    f = fibonacci_word(N).symbols
    lengths = [1, 2]
    while lengths[-1] + lengths[-2] <= N:
        lengths.append(lengths[-1] + lengths[-2])
    fib_pre = all(np.array_equal(fibonacci_word(b).symbols[:a], fibonacci_word(a).symbols) for a, b in zip(lengths, lengths[1:]))
    fib_pre &= bool(np.array_equal(f[: lengths[-1]], fibonacci_word(lengths[-1]).symbols))
    dt = time.perf_counter() - t0
    ok = fib and tm and rs and tm_rec and rs_rec and fib_pre and dt < 1.0
    return ok, f"fib={fib} tm={tm} rs={rs} recurrences tm={tm_rec} rs={rs_rec} fib-prefix={fib_pre} in {dt:.2f}s"


def oracle_equivalence(n_pairs: int = 50, steps: int = 8, seed: int = 2024) -> tuple[bool, str]:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_pairs):
        c1 = CoinParams(rng.uniform(), rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI))
        c2 = CoinParams(rng.uniform(), rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI))
        for kind in KINDS:
            for mode in ("dynamic", "static"):
                cfg = WalkConfig(sequence=kind, mode=mode, steps=steps, coin1=c1, coin2=c2, seed=int(rng.integers(1 << 30)))
                a = evolve(cfg).final_state
                b = brute_force_evolve(cfg).final_state
                worst = max(worst, np.abs(a.up - b.up).max(), np.abs(a.down - b.down).max())
    dt = time.perf_counter() - t0
    return worst < 1e-12 and dt < 30.0, f"max amplitude difference {worst:.2e} over {n_pairs * 10} walks in {dt:.1f}s"


def norm_at_scale(n_configs: int = 10, steps: int = 5000, seed: int = 7) -> tuple[bool, str]:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_configs):
        cfg = WalkConfig(
            sequence=KINDS[k % len(KINDS)],
            mode=("dynamic", "static")[k % 2],
            steps=steps,
            coin1=CoinParams(rng.uniform(), rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI)),
            coin2=CoinParams(rng.uniform(), rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI)),
            seed=k,
        )
        worst = max(worst, abs(evolve(cfg).final_state.norm() - 1.0))
    dt = time.perf_counter() - t0
    return worst < 1e-10 and dt < 30.0, f"max norm drift {worst:.2e} in {dt:.1f}s"


def ballistic_baseline() -> tuple[bool, str]:
    t0 = time.perf_counter()
    alpha = fit_exponent(_walk("homogeneous", 0.5, 0.0, 0.0, 2000)).alpha
    dt = time.perf_counter() - t0
    return abs(alpha - 1.0) <= 0.02 and dt < 10.0, f"alpha={alpha:.4f} in {dt:.2f}s"


def diffusive_baseline(seeds: int = 10) -> tuple[bool, str]:
    # second coin shifted by pi in both phases: theta2 = phi2 = pi
    t0 = time.perf_counter()
    alphas, finals = [], []
    for s in range(seeds):
        ts = _walk("random", 0.5, PI, PI, 2000, seed=s)
        alphas.append(fit_exponent(ts).alpha)
        finals.append(ts.entropy[-1])
    dt = time.perf_counter() - t0
    mean = float(np.mean(alphas))
    ok = abs(mean - 0.5) <= 0.07 and min(finals) >= 0.99 and dt < 120.0
    return ok, f"mean alpha={mean:.4f}, min S_E(T)={min(finals):.4f} in {dt:.1f}s"


def corner_degeneracy(rho: float = 0.5, steps: int = 2000) -> tuple[bool, str]:
    ref = evolve(WalkConfig(sequence="homogeneous", steps=steps, coin1=CoinParams(rho, 0, 0), coin2=CoinParams(rho, 0, 0)))
    ref_a = fit_exponent(ref).alpha
    ref_e = summarize_entropy(ref).mean
    worst = 0.0
    for kind in APERIODIC:
        for mode in ("dynamic", "static"):
            cfg = SweepConfig(base=WalkConfig(sequence=kind, mode=mode, steps=steps), rho=rho, theta_step=TWO_PI, phi_step=TWO_PI)
            res = run_sweep(cfg)
            for r in res.records:
                worst = max(worst, abs(r.alpha - ref_a), abs(r.entropy_mean - ref_e))
    return worst < 1e-10, f"max deviation from single-coin walk {worst:.2e} (alpha={ref_a:.4f}, <S_E>={ref_e:.4f})"


def rho_scan_localization() -> tuple[bool, str]:
    parts, ok_any = [], False
    for unit, (theta, phi) in RHO_SCAN_POINT.items():
        ratios = []
        for rho in (0.1, 0.2, 0.3):
            ts = _walk("fibonacci", rho, theta, phi, 2000)
            ratios.append(ts.sigma[2000] / ts.sigma[500])
        alpha9 = fit_exponent(_walk("fibonacci", 0.9, theta, phi, 2000)).alpha
        localized = max(ratios) < 1.3
        ok = localized and alpha9 > 0.9
        ok_any |= ok
        parts.append(f"{unit}: sigma ratios {np.round(ratios, 3).tolist()} alpha(0.9)={alpha9:.3f}")
    return ok_any, "; ".join(parts)


def rho_scan_entropy() -> tuple[bool, str]:
    parts, ok_any = [], False
    rhos = np.round(np.arange(1, 10) / 10, 1)
    for unit, (theta, phi) in RHO_SCAN_POINT.items():
        means = [summarize_entropy(_walk("fibonacci", r, theta, phi, 2000)).mean for r in rhos]
        monotone = all(b >= a - 0.02 for a, b in zip(means, means[1:]))
        saturated = min(means[6:]) >= 0.99
        ok_any |= monotone and saturated
        parts.append(f"{unit}: <S_E> {np.round(means, 4).tolist()}")
    return ok_any, "; ".join(parts)


def _coarse_fraction(sequence, mode, steps=1500, rho=0.2):
    cfg = SweepConfig(base=WalkConfig(sequence=sequence, mode=mode, steps=steps), rho=rho, theta_step=0.1 * PI, phi_step=0.1 * PI)
    return run_sweep(cfg)


def thue_morse_dominance() -> tuple[bool, str]:
    res = _coarse_fraction("thue-morse", "dynamic")
    (frac,) = summarize_fractions(res, [(np.nextafter(0.70, 1.0), None)])
    return frac >= 0.85 and res.shape == (21, 21), f"{frac:.3f} of {res.shape[0]}x{res.shape[1]} points with alpha > 0.70"


def static_rudin_shapiro_localization() -> tuple[bool, str]:
    res = _coarse_fraction("rudin-shapiro", "static")
    (frac,) = summarize_fractions(res, [(None, 0.30)])
    return frac >= 0.80 and res.shape == (21, 21), f"{frac:.3f} of {res.shape[0]}x{res.shape[1]} points with alpha < 0.30"


def maximal_entanglement_spots() -> tuple[bool, str]:
    spots = [("fibonacci", 0.03 * PI, 1.46 * PI), ("rudin-shapiro", 0.0, 0.08 * PI)]
    ok, parts = True, []
    for kind, theta, phi in spots:
        ts = _walk(kind, 0.8, theta, phi, 2000)
        tail = ts.entropy[1501:]
        ok &= bool(tail.min() >= 0.99)
        parts.append(f"{kind}: min S_E over t>1500 = {tail.min():.4f} (mean {tail.mean():.4f}, {np.mean(tail < 0.99):.1%} below 0.99)")
    return ok, "; ".join(parts)


def sweep_determinism() -> tuple[bool, str]:
    cfg = SweepConfig(base=WalkConfig(sequence="fibonacci", steps=400), rho=0.5, theta_step=0.5 * PI, phi_step=0.5 * PI)
    outs = [run_sweep(replace(cfg, workers=w)).to_csv() for w in (1, 4)]
    return outs[0] == outs[1], f"{cfg.shape[0]}x{cfg.shape[1]} grid, workers 1 vs 4 identical={outs[0] == outs[1]}"


CRITERIA = [
    Criterion(1, "sequence exactness", sequences_exact),
    Criterion(2, "oracle equivalence", oracle_equivalence),
    Criterion(3, "unitarity at scale", norm_at_scale),
    Criterion(4, "ballistic baseline", ballistic_baseline),
    Criterion(5, "diffusive + maximal-entanglement baseline", diffusive_baseline),
    Criterion(6, "corner degeneracy", corner_degeneracy),
    Criterion(7, "dynamic Fibonacci localization at (0.67, 1.49)", rho_scan_localization),
    Criterion(8, "entropy-vs-rho saturation at (0.67, 1.49)", rho_scan_entropy),
    Criterion(9, "Thue-Morse dominance on a coarse grid", thue_morse_dominance),
    Criterion(10, "static Rudin-Shapiro localization on a coarse grid", static_rudin_shapiro_localization),
    Criterion(11, "maximal-entanglement spot checks", maximal_entanglement_spots),
    Criterion(12, "sweep determinism", sweep_determinism),
]
