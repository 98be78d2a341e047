"""Hot loops of the walk: coin + shift updates and per-step observables.

Two interchangeable implementations share one signature:

* ``run_steps_numba`` -- explicit site loop compiled with numba,
* ``run_steps_numpy`` -- strided numpy slices, one Python iteration per step.

``run_steps`` points at the numba version unless numba is missing or
``AQWALK_NO_NUMBA`` is set.

Both rely on the walk starting from a single site at the origin: at time t
only sites with x = t (mod 2) inside [-t, t] carry amplitude, so a step can
read those sites, clear them, and write the opposite-parity neighbours in
place. Arrays are indexed by ``i = x + offset``.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import HAS_NUMBA, njit

__all__ = ["HAS_NUMBA", "run_steps", "run_steps_numba", "run_steps_numpy", "binary_entropy_from_moments", "BACKEND"]

_INV_LN2 = 1.0 / math.log(2.0)


@njit(cache=True, nogil=True)
def _entropy_from_moments(alpha, gamma_abs2):
    disc = 0.25 - alpha * (1.0 - alpha) + gamma_abs2
    if disc < 0.0:
        disc = 0.0
    root = math.sqrt(disc)
    lp = min(max(0.5 + root, 0.0), 1.0)
    lm = min(max(0.5 - root, 0.0), 1.0)
    s = 0.0
    if lp > 0.0:
        s -= lp * math.log(lp)
    if lm > 0.0:
        s -= lm * math.log(lm)
    return s * _INV_LN2


def binary_entropy_from_moments(alpha: float, gamma_abs2: float) -> float:
    """Spin entropy in bits from sum |a|^2 and |sum a b*|^2."""
    return float(_entropy_from_moments(float(alpha), float(gamma_abs2)))


@njit(cache=True, nogil=True)
def run_steps_numba(up, down, offset, t0, t1, coins, time_sel, site_sel, static, sigma, entropy):
    for t in range(t0, t1):
        lo = offset - t
        hi = offset + t
        if static:
            for i in range(lo, hi + 1, 2):
                k = site_sel[i]
                u = up[i]
                d = down[i]
                up[i] = 0.0
                down[i] = 0.0
                up[i + 1] = coins[k, 0, 0] * u + coins[k, 0, 1] * d
                down[i - 1] = coins[k, 1, 0] * u + coins[k, 1, 1] * d
        else:
            k = time_sel[t]
            c00 = coins[k, 0, 0]
            c01 = coins[k, 0, 1]
            c10 = coins[k, 1, 0]
            c11 = coins[k, 1, 1]
            for i in range(lo, hi + 1, 2):
                u = up[i]
                d = down[i]
                up[i] = 0.0
                down[i] = 0.0
                up[i + 1] = c00 * u + c01 * d
                down[i - 1] = c10 * u + c11 * d

        norm = 0.0
        m1 = 0.0
        m2 = 0.0
        a2 = 0.0
        g = 0.0 + 0.0j
        for i in range(lo - 1, hi + 2, 2):
            u = up[i]
            d = down[i]
            pu = u.real * u.real + u.imag * u.imag
            p = pu + d.real * d.real + d.imag * d.imag
            x = float(i - offset)
            norm += p
            m1 += x * p
            m2 += x * x * p
            a2 += pu
            g += u * d.conjugate()
        m1 /= norm
        var = m2 / norm - m1 * m1
        sigma[t + 1] = math.sqrt(var) if var > 0.0 else 0.0
        entropy[t + 1] = _entropy_from_moments(a2, g.real * g.real + g.imag * g.imag)


def run_steps_numpy(up, down, offset, t0, t1, coins, time_sel, site_sel, static, sigma, entropy):
    if static:
        c00 = coins[site_sel, 0, 0]
        c01 = coins[site_sel, 0, 1]
        c10 = coins[site_sel, 1, 0]
        c11 = coins[site_sel, 1, 1]
    for t in range(t0, t1):
        lo = offset - t
        hi = offset + t
        occ = slice(lo, hi + 1, 2)
        u = up[occ].copy()
        d = down[occ].copy()
        up[occ] = 0.0
        down[occ] = 0.0
        if static:
            up[lo + 1 : hi + 2 : 2] = c00[occ] * u + c01[occ] * d
            down[lo - 1 : hi : 2] = c10[occ] * u + c11[occ] * d
        else:
            k = time_sel[t]
            up[lo + 1 : hi + 2 : 2] = coins[k, 0, 0] * u + coins[k, 0, 1] * d
            down[lo - 1 : hi : 2] = coins[k, 1, 0] * u + coins[k, 1, 1] * d

        new = slice(lo - 1, hi + 2, 2)
        a = up[new]
        b = down[new]
        pu = a.real**2 + a.imag**2
        p = pu + b.real**2 + b.imag**2
        x = np.arange(lo - 1 - offset, hi + 2 - offset, 2, dtype=np.float64)
        norm = p.sum()
        m1 = (x * p).sum() / norm
        var = (x * x * p).sum() / norm - m1 * m1
        sigma[t + 1] = math.sqrt(var) if var > 0.0 else 0.0
        g = np.vdot(b, a)  # sum a * conj(b)
        entropy[t + 1] = _entropy_from_moments(pu.sum(), g.real * g.real + g.imag * g.imag)


if HAS_NUMBA:
    run_steps = run_steps_numba
    BACKEND = "numba"
else:
    run_steps = run_steps_numpy
    BACKEND = "numpy"
