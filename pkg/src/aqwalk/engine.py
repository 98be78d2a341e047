"""Walk evolution and per-step observables.

One step is ``U = S (I x C)``: every site's spinor is multiplied by the coin
selected for that site (or that step), then up amplitudes hop to x+1 and down
amplitudes to x-1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .coin import CoinParams, build_coin
from .sequences import BinaryWord, SequenceKind, make_word

__all__ = [
    "WalkMode",
    "StaticIndexing",
    "WalkState",
    "WalkConfig",
    "SpinReducedState",
    "TimeSeries",
    "DEFAULT_INITIAL",
    "step",
    "step_back",
    "evolve",
    "std_dev",
    "reduced_spin_state",
    "entropy",
    "required_word_length",
    "coin_selection",
]

DEFAULT_INITIAL = (1.0 / math.sqrt(2.0), 1j / math.sqrt(2.0))


class WalkMode(str, enum.Enum):
    DYNAMIC = "dynamic"
    STATIC = "static"


class StaticIndexing(str, enum.Enum):
    # site x uses word[x + T]
    OFFSET = "offset"
    # site x uses word[|x|]
    MIRROR = "mirror"


@dataclass
class WalkState:
    """Amplitudes on a finite window of the line; index i is position i - offset."""

    up: np.ndarray
    down: np.ndarray
    t: int = 0
    offset: int = 0

    def __post_init__(self):
        self.up = np.asarray(self.up, dtype=np.complex128)
        self.down = np.asarray(self.down, dtype=np.complex128)
        if self.up.shape != self.down.shape or self.up.ndim != 1:
            raise ValueError("up and down must be 1-D arrays of equal length")

    @classmethod
    def localized(cls, spinor=DEFAULT_INITIAL, capacity: int = 0) -> "WalkState":
        """Spinor at the origin, with room for `capacity` steps either side."""
        n = 2 * capacity + 1
        up = np.zeros(n, dtype=np.complex128)
        down = np.zeros(n, dtype=np.complex128)
        up[capacity] = spinor[0]
        down[capacity] = spinor[1]
        return cls(up, down, 0, capacity)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.up.size) - self.offset

    def probabilities(self) -> np.ndarray:
        return np.abs(self.up) ** 2 + np.abs(self.down) ** 2

    def norm(self) -> float:
        return float(self.probabilities().sum())

    def amplitude(self, x: int) -> tuple[complex, complex]:
        i = x + self.offset
        return complex(self.up[i]), complex(self.down[i])

    def snapshot(self) -> "WalkState":
        """Independent read-only copy."""
        up = self.up.copy()
        down = self.down.copy()
        up.setflags(write=False)
        down.setflags(write=False)
        return WalkState(up, down, self.t, self.offset)


@dataclass(frozen=True)
class WalkConfig:
    sequence: SequenceKind = SequenceKind.FIBONACCI
    mode: WalkMode = WalkMode.DYNAMIC
    steps: int = 5000
    coin1: CoinParams = CoinParams()
    coin2: CoinParams = CoinParams()
    initial: tuple = DEFAULT_INITIAL
    seed: int = 0
    static_indexing: StaticIndexing = StaticIndexing.OFFSET
    # explicit word overriding `sequence`/`seed`
    word: BinaryWord | None = None

    def __post_init__(self):
        object.__setattr__(self, "sequence", SequenceKind.parse(self.sequence))
        object.__setattr__(self, "mode", WalkMode(self.mode))
        object.__setattr__(self, "static_indexing", StaticIndexing(self.static_indexing))
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        a, b = (complex(v) for v in self.initial)
        if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-12:
            raise ValueError("initial spinor must have unit norm")
        object.__setattr__(self, "initial", (a, b))

    def with_coins(self, coin1: CoinParams, coin2: CoinParams) -> "WalkConfig":
        return replace(self, coin1=coin1, coin2=coin2)


@dataclass(frozen=True)
class SpinReducedState:
    alpha: float
    beta: float
    gamma: complex
    lambda_plus: float
    lambda_minus: float


@dataclass
class TimeSeries:
    """Observables indexed by step: ``sigma[t]`` and ``entropy[t]`` for t = 0..T."""

    sigma: np.ndarray
    entropy: np.ndarray
    snapshots: dict = field(default_factory=dict)
    final_state: WalkState | None = None

    @property
    def steps(self) -> int:
        return len(self.sigma) - 1

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.sigma))


def required_word_length(config: WalkConfig) -> int:
    if config.mode is WalkMode.DYNAMIC:
        return config.steps
    if config.static_indexing is StaticIndexing.MIRROR:
        return config.steps + 1
    return 2 * config.steps + 1


def coin_selection(config: WalkConfig, word: BinaryWord):
    """Return (per-step selector, per-site selector) arrays for the kernels."""
    T = config.steps
    n_sites = 2 * T + 1
    sym = word.symbols
    if config.mode is WalkMode.DYNAMIC:
        return np.ascontiguousarray(sym[:T]), np.zeros(n_sites, dtype=np.uint8)
    x = np.arange(n_sites) - T
    if config.static_indexing is StaticIndexing.MIRROR:
        sites = sym[np.abs(x)]
    else:
        sites = sym[x + T]
    return np.zeros(T, dtype=np.uint8), np.ascontiguousarray(sites)


def _resolve_word(config: WalkConfig) -> BinaryWord:
    need = required_word_length(config)
    word = config.word
    if word is None:
        return make_word(config.sequence, need, config.seed)
    if len(word) < need:
        raise ValueError(f"word has length {len(word)}, need at least {need}")
    return word


def evolve(config: WalkConfig, snapshot_steps=(), backend=None) -> TimeSeries:
    """Run `config.steps` steps from the localized initial spinor.

    `snapshot_steps` lists times at which P(x) is recorded. `backend` may be
    "numba" or "numpy" to bypass the module default.
    """
    word = _resolve_word(config)
    time_sel, site_sel = coin_selection(config, word)
    coins = np.stack([build_coin(config.coin1), build_coin(config.coin2)])
    T = config.steps
    run = kernels.run_steps
    if backend == "numpy":
        run = kernels.run_steps_numpy
    elif backend == "numba":
        run = kernels.run_steps_numba

    state = WalkState.localized(config.initial, T)
    sigma = np.zeros(T + 1)
    ent = np.zeros(T + 1)
    ent[0] = entropy(reduced_spin_state(state))
    static = config.mode is WalkMode.STATIC

    stops = sorted({int(s) for s in snapshot_steps if 0 <= int(s) <= T} | {T})
    snapshots = {}
    t = 0
    for stop in stops:
        if stop > t:
            run(state.up, state.down, T, t, stop, coins, time_sel, site_sel, static, sigma, ent)
            t = stop
        state.t = t
        if stop in snapshot_steps:
            snapshots[stop] = state.probabilities()
    return TimeSeries(sigma, ent, snapshots, state)


def _apply_coins(up, down, coins):
    c = np.asarray(coins, dtype=np.complex128)
    if c.shape == (2, 2):
        return c[0, 0] * up + c[0, 1] * down, c[1, 0] * up + c[1, 1] * down
    if c.shape != (up.size, 2, 2):
        raise ValueError(f"coin selector must have shape (2, 2) or ({up.size}, 2, 2), got {c.shape}")
    return c[:, 0, 0] * up + c[:, 0, 1] * down, c[:, 1, 0] * up + c[:, 1, 1] * down


def step(state: WalkState, coins) -> WalkState:
    """Apply one coin-then-shift step and return the new state.

    `coins` is a single 2x2 coin or an array of per-site coins aligned with
    the state arrays.
    """
    cu, cd = _apply_coins(state.up, state.down, coins)
    if cu[-1] != 0 or cd[0] != 0:
        raise ValueError("amplitude would leave the lattice window")
    up = np.zeros_like(cu)
    down = np.zeros_like(cd)
    up[1:] = cu[:-1]
    down[:-1] = cd[1:]
    return WalkState(up, down, state.t + 1, state.offset)


def step_back(state: WalkState, coins) -> WalkState:
    """Inverse of `step` with the same coins."""
    if state.up[0] != 0 or state.down[-1] != 0:
        raise ValueError("amplitude would leave the lattice window")
    up = np.zeros_like(state.up)
    down = np.zeros_like(state.down)
    up[:-1] = state.up[1:]
    down[1:] = state.down[:-1]
    c = np.asarray(coins, dtype=np.complex128)
    adj = np.conj(np.swapaxes(c, -1, -2))
    u, d = _apply_coins(up, down, adj)
    return WalkState(u, d, state.t - 1, state.offset)


def std_dev(state: WalkState) -> float:
    p = state.probabilities()
    x = state.positions.astype(np.float64)
    norm = p.sum()
    mean = (x * p).sum() / norm
    var = (x * x * p).sum() / norm - mean * mean
    return math.sqrt(var) if var > 0.0 else 0.0


def reduced_spin_state(state: WalkState) -> SpinReducedState:
    alpha = float(np.sum(np.abs(state.up) ** 2))
    beta = float(np.sum(np.abs(state.down) ** 2))
    gamma = complex(np.sum(state.up * np.conj(state.down)))
    disc = max(0.25 - alpha * (1.0 - alpha) + abs(gamma) ** 2, 0.0)
    root = math.sqrt(disc)
    lp = min(max(0.5 + root, 0.0), 1.0)
    lm = min(max(0.5 - root, 0.0), 1.0)
    return SpinReducedState(alpha, beta, gamma, lp, lm)


def entropy(reduced: SpinReducedState) -> float:
    """Von Neumann entropy of the spin, in bits."""
    s = 0.0
    for lam in (reduced.lambda_plus, reduced.lambda_minus):
        if lam > 0.0:
            s -= lam * math.log2(lam)
    return s
