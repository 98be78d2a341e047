"""Dense reference evolution for small walks.

Builds the full 2(2T+1)-dimensional step unitary S (I x C) explicitly and
computes observables from their definitions (the spin entropy via the
eigenvalues of the partially traced density matrix). Only meant for cross
checking `engine.evolve` on tiny lattices.
"""

from __future__ import annotations

import numpy as np

from .coin import build_coin
from .engine import (
    StaticIndexing,
    TimeSeries,
    WalkConfig,
    WalkMode,
    WalkState,
    required_word_length,
)
from .sequences import make_word

MAX_ORACLE_STEPS = 12


def shift_matrix(n_sites: int) -> np.ndarray:
    """|x+1><x| (x) |up><up| + |x-1><x| (x) |down><down| on a ring of n_sites.

    Basis index is 2*i + s with s = 0 for up, 1 for down. The ring closure is
    never reached by a walk that fits the window; it only keeps S unitary.
    """
    dim = 2 * n_sites
    S = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(n_sites):
        S[2 * ((i + 1) % n_sites), 2 * i] = 1.0
        S[2 * ((i - 1) % n_sites) + 1, 2 * i + 1] = 1.0
    return S


def coin_layer(site_coins: list[np.ndarray]) -> np.ndarray:
    """Block-diagonal I (x) C with a possibly different coin per site."""
    n = len(site_coins)
    M = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for i, c in enumerate(site_coins):
        M[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = c
    return M


def step_unitary(config: WalkConfig, t: int, word) -> np.ndarray:
    """Dense unitary for step t (1-based)."""
    T = config.steps
    n = 2 * T + 1
    coins = (build_coin(config.coin1), build_coin(config.coin2))
    if config.mode is WalkMode.DYNAMIC:
        site_coins = [coins[word[t - 1]]] * n
    else:
        site_coins = []
        for i in range(n):
            x = i - T
            idx = abs(x) if config.static_indexing is StaticIndexing.MIRROR else x + T
            site_coins.append(coins[word[idx]])
    return shift_matrix(n) @ coin_layer(site_coins)


def _observables(psi: np.ndarray, T: int) -> tuple[float, float]:
    amps = psi.reshape(-1, 2)
    p = np.sum(np.abs(amps) ** 2, axis=1)
    x = np.arange(-T, T + 1, dtype=np.float64)
    mean = np.sum(x * p)
    sigma = float(np.sqrt(max(np.sum((x - mean) ** 2 * p), 0.0)))
    rho_c = amps.T @ amps.conj()
    lam = np.clip(np.linalg.eigvalsh(rho_c), 0.0, 1.0)
    lam = lam[lam > 0]
    return sigma, float(-np.sum(lam * np.log2(lam)))


def brute_force_evolve(config: WalkConfig) -> TimeSeries:
    T = config.steps
    if T > MAX_ORACLE_STEPS:
        raise ValueError(f"oracle limited to {MAX_ORACLE_STEPS} steps, got {T}")
    word = config.word if config.word is not None else make_word(
        config.sequence, required_word_length(config), config.seed
    )
    if len(word) < required_word_length(config):
        raise ValueError("word too short")
    n = 2 * T + 1
    psi = np.zeros(2 * n, dtype=np.complex128)
    psi[2 * T] = config.initial[0]
    psi[2 * T + 1] = config.initial[1]
    sigma = np.zeros(T + 1)
    ent = np.zeros(T + 1)
    sigma[0], ent[0] = _observables(psi, T)
    for t in range(1, T + 1):
        psi = step_unitary(config, t, word) @ psi
        sigma[t], ent[t] = _observables(psi, T)
    amps = psi.reshape(-1, 2)
    final = WalkState(amps[:, 0].copy(), amps[:, 1].copy(), T, T)
    return TimeSeries(sigma, ent, {}, final)
