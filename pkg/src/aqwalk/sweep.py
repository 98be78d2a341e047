"""(theta, phi) grid sweeps of the second coin at fixed rho.

Every grid point is an independent evolution; results are gathered into
their row-major slot so the output never depends on scheduling. With a
checkpoint path, finished points are appended to ``<path>`` as they complete
and a later run with the same configuration skips them.
"""

from __future__ import annotations

import io
import json
import logging
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace

import numpy as np

from . import __version__, kernels
from .analysis import default_avg_window, default_fit_window, fit_exponent, summarize_entropy
from .coin import TWO_PI, CoinParams
from .engine import WalkConfig, evolve

__all__ = [
    "SweepConfig",
    "SweepRecord",
    "SweepResult",
    "grid_axis",
    "run_point",
    "run_sweep",
    "summarize_fractions",
]

log = logging.getLogger(__name__)

DEFAULT_STEP = 0.01 * math.pi


def grid_axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive grid lo, lo+step, ..., hi (hi kept when it is hit up to rounding)."""
    if not step > 0:
        raise ValueError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    vals = lo + step * np.arange(n)
    vals[np.abs(vals - hi) < 1e-9] = hi
    return np.clip(vals, 0.0, TWO_PI)


@dataclass(frozen=True)
class SweepConfig:
    base: WalkConfig = WalkConfig()
    rho: float = 0.5
    theta1: float = 0.0
    phi1: float = 0.0
    theta_range: tuple[float, float] = (0.0, TWO_PI)
    phi_range: tuple[float, float] = (0.0, TWO_PI)
    theta_step: float = DEFAULT_STEP
    phi_step: float = DEFAULT_STEP
    fit_window: tuple[int, int] | None = None
    avg_window: tuple[int, int] | None = None
    workers: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        CoinParams(self.rho, self.theta1, self.phi1)
        for lo, hi in (self.theta_range, self.phi_range):
            if not 0.0 <= lo <= hi <= TWO_PI:
                raise ValueError(f"angle range [{lo}, {hi}] must lie inside [0, 2pi]")

    @property
    def thetas(self) -> np.ndarray:
        return grid_axis(*self.theta_range, self.theta_step)

    @property
    def phis(self) -> np.ndarray:
        return grid_axis(*self.phi_range, self.phi_step)

    @property
    def shape(self) -> tuple[int, int]:
        return self.thetas.size, self.phis.size

    def windows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        T = self.base.steps
        fit = tuple(self.fit_window) if self.fit_window else default_fit_window(T)
        avg = tuple(self.avg_window) if self.avg_window else default_avg_window(T)
        return fit, avg

    def metadata(self) -> dict:
        """Everything that determines the output bytes (worker count excluded)."""
        fit, avg = self.windows()
        b = self.base
        return {
            "sequence": b.sequence.value,
            "mode": b.mode.value,
            "steps": b.steps,
            "seed": b.seed,
            "static_indexing": b.static_indexing.value,
            "initial": [[z.real, z.imag] for z in b.initial],
            "rho": self.rho,
            "theta1": self.theta1,
            "phi1": self.phi1,
            "theta_range": list(self.theta_range),
            "phi_range": list(self.phi_range),
            "theta_step": self.theta_step,
            "phi_step": self.phi_step,
            "fit_window": list(fit),
            "avg_window": list(avg),
            "backend": kernels.BACKEND,
            "version": __version__,
        }


@dataclass(frozen=True)
class SweepRecord:
    theta: float
    phi: float
    alpha: float
    entropy_mean: float
    entropy_std: float
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class SweepResult:
    records: list[SweepRecord]
    metadata: dict
    shape: tuple[int, int]

    def grid(self, quantity: str) -> np.ndarray:
        vals = np.array([getattr(r, quantity) for r in self.records], dtype=np.float64)
        return vals.reshape(self.shape)

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.metadata.items():
            buf.write(f"# {key}={json.dumps(value)}\n")
        buf.write("theta,phi,alpha,entropy_mean,entropy_std,status\n")
        for r in self.records:
            buf.write(
                f"{r.theta:.12g},{r.phi:.12g},{_fmt(r.alpha)},{_fmt(r.entropy_mean)},"
                f"{_fmt(r.entropy_std)},{r.status}\n"
            )
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "metadata": self.metadata,
            "shape": list(self.shape),
            "records": [
                {
                    "theta": float(f"{r.theta:.12g}"),
                    "phi": float(f"{r.phi:.12g}"),
                    "alpha": _json_num(r.alpha),
                    "entropy_mean": _json_num(r.entropy_mean),
                    "entropy_std": _json_num(r.entropy_std),
                    "status": r.status,
                }
                for r in self.records
            ],
        }
        return json.dumps(payload, indent=1) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SweepResult":
        meta = {}
        records = []
        header_seen = False
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = json.loads(value)
            elif not header_seen:
                header_seen = True
            elif line.strip():
                th, ph, a, m, s, status = line.split(",", 5)
                records.append(SweepRecord(float(th), float(ph), float(a), float(m), float(s), status))
        thetas = sorted({r.theta for r in records})
        return cls(records, meta, (len(thetas), len(records) // max(len(thetas), 1)))


def _fmt(x: float) -> str:
    return repr(float(x))


def _json_num(x: float):
    return None if not math.isfinite(x) else float(x)


def run_point(config: SweepConfig, theta: float, phi: float) -> SweepRecord:
    """Evolve one grid point; failures become a flagged record instead of raising."""
    fit, avg = config.windows()
    try:
        coin1 = CoinParams(config.rho, config.theta1, config.phi1)
        coin2 = CoinParams(config.rho, theta, phi)
        ts = evolve(replace(config.base, coin1=coin1, coin2=coin2))
        a = fit_exponent(ts, fit)
        e = summarize_entropy(ts, avg)
        return SweepRecord(float(theta), float(phi), a.alpha, e.mean, e.std)
    except Exception as exc:  # noqa: BLE001 - recorded, sweep continues
        reason = f"error: {type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
        return SweepRecord(float(theta), float(phi), math.nan, math.nan, math.nan, reason)


def _checkpoint_header(config: SweepConfig) -> str:
    return "#resume " + json.dumps(config.metadata(), sort_keys=True) + "\n"


def _load_checkpoint(path: str, config: SweepConfig) -> dict[int, SweepRecord]:
    done: dict[int, SweepRecord] = {}
    if not os.path.exists(path):
        return done
    with open(path) as fh:
        header = fh.readline()
        if header != _checkpoint_header(config):
            raise ValueError(f"checkpoint {path} was written for a different sweep configuration")
        for line in fh:
            if not line.endswith("\n"):
                break  # torn final line from an interrupted write
            idx, th, ph, a, m, s, status = line.rstrip("\n").split(",", 6)
            done[int(idx)] = SweepRecord(float(th), float(ph), float(a), float(m), float(s), status)
    return done


def run_sweep(config: SweepConfig, checkpoint: str | None = None, resume: bool = False, progress=None) -> SweepResult:
    """Run every grid point of `config`.

    `checkpoint` names a file receiving completed points as they finish; with
    `resume` an existing checkpoint for the same configuration is reused.
    `progress(done, total)` is called from the collecting thread.
    """
    thetas, phis = config.thetas, config.phis
    points = [(th, ph) for th in thetas for ph in phis]
    total = len(points)
    slots: list[SweepRecord | None] = [None] * total

    done = _load_checkpoint(checkpoint, config) if (checkpoint and resume) else {}
    for idx, rec in done.items():
        if 0 <= idx < total:
            slots[idx] = rec
    todo = [i for i in range(total) if slots[i] is None]
    if done:
        log.info("resuming sweep: %d of %d points already done", total - len(todo), total)

    fh = None
    if checkpoint:
        if done:
            fh = open(checkpoint, "a")
        else:
            fh = open(checkpoint, "w")
            fh.write(_checkpoint_header(config))
            fh.flush()
    lock = threading.Lock()

    def record(idx: int, rec: SweepRecord):
        slots[idx] = rec
        if fh is not None:
            with lock:
                fh.write(
                    f"{idx},{_fmt(rec.theta)},{_fmt(rec.phi)},{_fmt(rec.alpha)},"
                    f"{_fmt(rec.entropy_mean)},{_fmt(rec.entropy_std)},{rec.status}\n"
                )
                fh.flush()

    try:
        finished = total - len(todo)
        if config.workers == 1:
            for idx in todo:
                record(idx, run_point(config, *points[idx]))
                finished += 1
                if progress:
                    progress(finished, total)
        else:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                futures = {pool.submit(run_point, config, *points[i]): i for i in todo}
                for fut in as_completed(futures):
                    record(futures[fut], fut.result())
                    finished += 1
                    if progress:
                        progress(finished, total)
    finally:
        if fh is not None:
            fh.close()

    return SweepResult(list(slots), config.metadata(), (thetas.size, phis.size))


def summarize_fractions(result: SweepResult, bins, quantity: str = "alpha") -> list[float]:
    """Fraction of successful records whose `quantity` falls in each half-open bin [lo, hi).

    `None` in a bound means unbounded on that side.
    """
    if not result.records:
        raise ValueError("empty sweep result")
    norm = []
    for lo, hi in bins:
        lo = -math.inf if lo is None else float(lo)
        hi = math.inf if hi is None else float(hi)
        if not lo < hi:
            raise ValueError(f"empty bin [{lo}, {hi})")
        norm.append((lo, hi))
    ordered = sorted(norm)
    for (_, hi_a), (lo_b, _) in zip(ordered, ordered[1:]):
        if lo_b < hi_a:
            raise ValueError("bins overlap")
    vals = np.array([getattr(r, quantity) for r in result.records if r.ok], dtype=np.float64)
    if vals.size == 0:
        raise ValueError("no successful records")
    return [float(np.mean((vals >= lo) & (vals < hi))) for lo, hi in norm]
