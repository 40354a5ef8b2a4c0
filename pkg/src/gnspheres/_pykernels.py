"""Numpy fallback for the compiled geometric-product kernels."""
from __future__ import annotations

from functools import lru_cache

import numpy as np


def blade_sign(a: int, b: int) -> int:
    swaps = (a & b).bit_count()
    a >>= 1
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def sign_table(n: int) -> np.ndarray:
    """Table S[a, b] of blade product signs, as int8."""
    m = 1 << n
    idx = np.arange(m, dtype=np.int64)
    a = idx[:, None]
    b = idx[None, :]
    swaps = _popcount(a & b)
    shifted = a >> 1
    while np.any(shifted):
        swaps = swaps + _popcount(shifted & b)
        shifted = shifted >> 1
    table = np.where(swaps % 2 == 1, -1, 1).astype(np.int8)
    table.flags.writeable = False
    return table


def _popcount(x: np.ndarray) -> np.ndarray:
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x = x >> 1
    return count


def gp_int64(ia, va, ib, vb, n: int) -> np.ndarray:
    ia = np.asarray(ia, dtype=np.int64)
    ib = np.asarray(ib, dtype=np.int64)
    va = np.asarray(va, dtype=np.int64)
    vb = np.asarray(vb, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    if ia.size == 0 or ib.size == 0:
        return out
    signs = sign_table(n)[np.ix_(ia, ib)].astype(np.int64)
    np.add.at(out, ia[:, None] ^ ib[None, :], signs * va[:, None] * vb[None, :])
    return out


def gp_float64(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = a.shape[0]
    n = m.bit_length() - 1
    ia = np.flatnonzero(a)
    ib = np.flatnonzero(b)
    if ia.size == 0 or ib.size == 0:
        return np.zeros(m)
    signs = sign_table(n)[np.ix_(ia, ib)]
    weights = signs * a[ia][:, None] * b[ib][None, :]
    return np.bincount((ia[:, None] ^ ib[None, :]).ravel(), weights=weights.ravel(), minlength=m)
