"""Numpy implementations of the hot loops; used when the extension is absent.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Sums run degree block by degree block in row order, like the compiled code.
"""

from __future__ import annotations

import numpy as np


def monomials(exps: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``z**alpha`` for every row ``alpha`` of ``exps``."""
    z = np.asarray(z, dtype=np.complex128)
    m, n = exps.shape
    out = np.ones(m, dtype=np.complex128)
    if m == 0:
        return out
    top = int(exps.max()) if exps.size else 0
    for j in range(n):
        powers = np.ones(top + 1, dtype=np.complex128)
        for e in range(1, top + 1):
            powers[e] = powers[e - 1] * z[j]
        out *= powers[exps[:, j]]
    return out


def abs_monomials(exps: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``rho**alpha`` for a nonnegative real polyradius ``rho``."""
    rho = np.asarray(rho, dtype=np.float64)
    m, n = exps.shape
    out = np.ones(m, dtype=np.float64)
    if m == 0:
        return out
    top = int(exps.max()) if exps.size else 0
    for j in range(n):
        powers = np.ones(top + 1, dtype=np.float64)
        for e in range(1, top + 1):
            powers[e] = powers[e - 1] * rho[j]
        out *= powers[exps[:, j]]
    return out


def block_sums(values: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Sequential sum of each degree block ``values[offsets[k]:offsets[k+1]]``."""
    nblocks = len(offsets) - 1
    out = np.zeros(nblocks, dtype=values.dtype)
    for k in range(nblocks):
        lo, hi = int(offsets[k]), int(offsets[k + 1])
        if hi > lo:
            out[k] = np.cumsum(values[lo:hi])[-1]
    return out


def taylor_shift(coeffs: np.ndarray, exps: np.ndarray, succ: np.ndarray,
                 z: np.ndarray) -> np.ndarray:
    """Coefficients of ``w -> f(z + w)`` on the same index table.

    Shifts one variable at a time: along variable ``j`` the new coefficient at
    ``gamma`` is ``sum_t C(gamma_j + t, t) z_j**t old[gamma + t e_j]``, the
    chain ``gamma + t e_j`` being followed through ``succ[j]``.
    """
    z = np.asarray(z, dtype=np.complex128)
    cur = np.array(coeffs, dtype=np.complex128, copy=True)
    m, n = exps.shape
    rows = np.arange(m)
    for j in range(n):
        if z[j] == 0:
            continue
        new = cur.copy()
        idx = rows.copy()
        live = np.ones(m, dtype=bool)
        binom = np.ones(m, dtype=np.float64)
        zt = 1.0 + 0.0j
        gj = exps[:, j].astype(np.float64)
        t = 0
        while True:
            t += 1
            nxt = np.where(live, succ[j, np.where(live, idx, 0)], -1)
            live = nxt >= 0
            if not live.any():
                break
            idx = nxt
            binom = binom * (gj + t) / t
            zt = zt * z[j]
            new[live] += binom[live] * zt * cur[idx[live]]
        cur = new
    return cur
