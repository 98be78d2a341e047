"""Discrete-time quantum walks with two coins arranged by aperiodic binary words."""

__version__ = "0.1.0"

from .analysis import EntropySummary, FitResult, fit_exponent, summarize_entropy
from .coin import CoinParams, build_coin, hadamard
from .engine import (
    SpinReducedState,
    StaticIndexing,
    TimeSeries,
    WalkConfig,
    WalkMode,
    WalkState,
    entropy,
    evolve,
    reduced_spin_state,
    std_dev,
    step,
)
from .sequences import (
    BinaryWord,
    SequenceKind,
    fibonacci_word,
    homogeneous_word,
    make_word,
    random_word,
    rudin_shapiro_word,
    thue_morse_word,
)
from .sweep import SweepConfig, SweepResult, run_sweep, summarize_fractions
