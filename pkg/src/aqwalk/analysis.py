"""Spreading exponent and time-averaged entropy from a TimeSeries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import TimeSeries

__all__ = [
    "DegenerateDataError",
    "FitResult",
    "EntropySummary",
    "default_fit_window",
    "default_avg_window",
    "fit_exponent",
    "summarize_entropy",
]

# Protocol at T=5000: fit over the last 4500 steps, average over the last 2500.
FIT_FRACTION = 0.9
AVG_FRACTION = 0.5


class DegenerateDataError(ValueError):
    pass


@dataclass(frozen=True)
class FitResult:
    alpha: float
    intercept: float
    window: tuple[int, int]


@dataclass(frozen=True)
class EntropySummary:
    mean: float
    std: float
    window: tuple[int, int]


def default_fit_window(steps: int) -> tuple[int, int]:
    """Inclusive step range covering the last 90% of the run."""
    n = max(int(round(FIT_FRACTION * steps)), 2)
    return max(steps - n + 1, 1), steps


def default_avg_window(steps: int) -> tuple[int, int]:
    """Inclusive step range covering the last 50% of the run."""
    n = max(int(round(AVG_FRACTION * steps)), 1)
    return max(steps - n + 1, 1), steps


def _window(series_len: int, window, default) -> tuple[int, int]:
    lo, hi = default if window is None else (int(window[0]), int(window[1]))
    if lo < 0 or hi >= series_len or lo > hi:
        raise ValueError(f"window {lo}..{hi} outside the series (t = 0..{series_len - 1})")
    return lo, hi


def fit_exponent(series: TimeSeries | np.ndarray, window=None) -> FitResult:
    """Least-squares slope of ln(sigma) against ln(t) over an inclusive step window.

    `series` may be a TimeSeries or a bare array indexed by t.
    """
    sigma = np.asarray(series.sigma if isinstance(series, TimeSeries) else series, dtype=np.float64)
    lo, hi = _window(sigma.size, window, default_fit_window(sigma.size - 1))
    if hi - lo + 1 < 2:
        raise ValueError("fit window needs at least two points")
    if lo < 1:
        raise DegenerateDataError("ln t undefined at t = 0")
    s = sigma[lo : hi + 1]
    if not np.all(s > 0):
        raise DegenerateDataError(f"sigma vanishes inside window {lo}..{hi}")
    x = np.log(np.arange(lo, hi + 1, dtype=np.float64))
    y = np.log(s)
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    slope = float(np.dot(dx, y - ym) / np.dot(dx, dx))
    return FitResult(slope, float(ym - slope * xm), (lo, hi))


def summarize_entropy(series: TimeSeries | np.ndarray, window=None) -> EntropySummary:
    """Mean and population standard deviation of S_E over an inclusive window."""
    ent = np.asarray(series.entropy if isinstance(series, TimeSeries) else series, dtype=np.float64)
    if ent.size == 0:
        raise ValueError("empty entropy series")
    lo, hi = _window(ent.size, window, default_avg_window(ent.size - 1))
    vals = ent[lo : hi + 1]
    mean = float(vals.mean())
    std = float(math.sqrt(max(float(np.mean((vals - mean) ** 2)), 0.0)))
    return EntropySummary(mean, std, (lo, hi))
