"""Generic two-by-two coin

    C(rho, theta, phi) = [[sqrt(rho),                 sqrt(1-rho) e^{i theta}],
                          [sqrt(1-rho) e^{i phi},    -sqrt(rho) e^{i(theta+phi)}]]

acting on the (up, down) spin basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["CoinParams", "build_coin", "hadamard", "is_unitary", "TWO_PI"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CoinParams:
    rho: float = 0.5
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("rho", "theta", "phi"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if not 0.0 <= self.theta <= TWO_PI:
            raise ValueError(f"theta must lie in [0, 2pi], got {self.theta}")
        if not 0.0 <= self.phi <= TWO_PI:
            raise ValueError(f"phi must lie in [0, 2pi], got {self.phi}")

    @classmethod
    def from_pi_units(cls, rho: float, theta: float, phi: float) -> "CoinParams":
        """Angles given as multiples of pi."""
        return cls(rho, theta * math.pi, phi * math.pi)


def build_coin(params: CoinParams) -> np.ndarray:
    """Return the 2x2 complex128 coin matrix for `params`."""
    if not isinstance(params, CoinParams):
        params = CoinParams(*params)
    a = math.sqrt(params.rho)
    b = math.sqrt(1.0 - params.rho)
    return np.array(
        [
            [a, b * np.exp(1j * params.theta)],
            [b * np.exp(1j * params.phi), -a * np.exp(1j * (params.theta + params.phi))],
        ],
        dtype=np.complex128,
    )


def hadamard() -> np.ndarray:
    return build_coin(CoinParams(0.5, 0.0, 0.0))


def is_unitary(matrix: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(matrix)
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), rtol=0.0, atol=atol))
