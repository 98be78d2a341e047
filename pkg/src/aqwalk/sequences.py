"""Binary aperiodic words that decide which of the two coins is applied.

All generators return a prefix of the requested length of the infinite word,
with symbols in {0, 1}. Symbol 0 selects the first coin and 1 the second.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SequenceKind",
    "BinaryWord",
    "fibonacci_word",
    "thue_morse_word",
    "rudin_shapiro_word",
    "homogeneous_word",
    "random_word",
    "make_word",
]


class SequenceKind(str, enum.Enum):
    FIBONACCI = "fibonacci"
    THUE_MORSE = "thue-morse"
    RUDIN_SHAPIRO = "rudin-shapiro"
    HOMOGENEOUS = "homogeneous"
    RANDOM = "random"

    @classmethod
    def parse(cls, value: "str | SequenceKind") -> "SequenceKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown sequence kind {value!r}")


@dataclass(frozen=True)
class BinaryWord:
    """Read-only prefix of a binary word."""

    symbols: np.ndarray
    kind: SequenceKind

    def __post_init__(self):
        sym = np.ascontiguousarray(self.symbols, dtype=np.uint8)
        if sym.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if sym.size and sym.max() > 1:
            raise ValueError("symbols must be 0 or 1")
        sym.setflags(write=False)
        object.__setattr__(self, "symbols", sym)

    def __len__(self) -> int:
        return self.symbols.size

    def __getitem__(self, idx):
        return self.symbols[idx]

    def as_signs(self) -> np.ndarray:
        """Return the word in +1/-1 notation (0 -> +1, 1 -> -1)."""
        return 1 - 2 * self.symbols.astype(np.int64)

    def __str__(self) -> str:
        return " ".join(str(int(s)) for s in self.symbols)


def _check_length(length) -> int:
    if isinstance(length, bool) or int(length) != length:
        raise ValueError(f"length must be an integer, got {length!r}")
    length = int(length)
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    return length


def _popcount_parity(n: np.ndarray) -> np.ndarray:
    """Parity of the number of set bits of each (non-negative) entry."""
    n = n.astype(np.uint64, copy=True)
    parity = np.zeros(n.shape, dtype=np.uint64)
    while n.any():
        parity ^= n & np.uint64(1)
        n >>= np.uint64(1)
    return parity.astype(np.uint8)


def fibonacci_word(length: int) -> BinaryWord:
    """First `length` symbols of the Fibonacci word 0100101001001...

    Built by concatenation ``S(n+1) = S(n) S(n-1)`` starting from ``0`` and
    ``01``, stopping once the prefix is long enough.
    """
    length = _check_length(length)
    prev = np.array([0], dtype=np.uint8)
    cur = np.array([0, 1], dtype=np.uint8)
    if length == 1:
        return BinaryWord(prev, SequenceKind.FIBONACCI)
    while cur.size < length:
        prev, cur = cur, np.concatenate([cur, prev])
    return BinaryWord(cur[:length], SequenceKind.FIBONACCI)


def thue_morse_word(length: int) -> BinaryWord:
    """Thue-Morse prefix: symbol n is the parity of the binary digit sum of n."""
    length = _check_length(length)
    n = np.arange(length, dtype=np.uint64)
    return BinaryWord(_popcount_parity(n), SequenceKind.THUE_MORSE)


def rudin_shapiro_word(length: int) -> BinaryWord:
    """Rudin-Shapiro prefix in binary form.

    Symbol n is the parity of the number of adjacent ``11`` pairs in the
    binary expansion of n, so 0 stands for the value +1 and 1 for -1.
    """
    length = _check_length(length)
    n = np.arange(length, dtype=np.uint64)
    pairs = n & (n >> np.uint64(1))
    return BinaryWord(_popcount_parity(pairs), SequenceKind.RUDIN_SHAPIRO)


def homogeneous_word(length: int) -> BinaryWord:
    length = _check_length(length)
    return BinaryWord(np.zeros(length, dtype=np.uint8), SequenceKind.HOMOGENEOUS)


def random_word(length: int, seed: int) -> BinaryWord:
    """Fair coin-flip word, reproducible from `seed`."""
    length = _check_length(length)
    rng = np.random.default_rng(seed)
    return BinaryWord(rng.integers(0, 2, size=length, dtype=np.uint8), SequenceKind.RANDOM)


def make_word(kind: "SequenceKind | str", length: int, seed: int = 0) -> BinaryWord:
    kind = SequenceKind.parse(kind)
    if kind is SequenceKind.FIBONACCI:
        return fibonacci_word(length)
    if kind is SequenceKind.THUE_MORSE:
        return thue_morse_word(length)
    if kind is SequenceKind.RUDIN_SHAPIRO:
        return rudin_shapiro_word(length)
    if kind is SequenceKind.HOMOGENEOUS:
        return homogeneous_word(length)
    return random_word(length, seed)
