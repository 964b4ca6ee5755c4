"""Unnormalised fast Walsh-Hadamard transform.

``fwht(x)[q] = sum_p (-1)^popcount(q & p) x[p]`` along one axis.  Integer
inputs stay integer, so Gaussian-integer sequences can be transformed
exactly by transforming real and imaginary parts separately.
"""

from __future__ import annotations

import numpy as np

from .field import popcount_array


def fwht(x: np.ndarray, axis: int = -1) -> np.ndarray:
    x = np.moveaxis(np.array(x, copy=True), axis, -1)
    d = x.shape[-1]
    if d & (d - 1):
        raise ValueError(f"transform length {d} is not a power of two")
    lead = x.shape[:-1]
    h = 1
    while h < d:
        y = x.reshape(*lead, d // (2 * h), 2, h)
        a = y[..., 0, :]
        b = y[..., 1, :]
        x = np.stack((a + b, a - b), axis=-2).reshape(*lead, d)
        h *= 2
    return np.moveaxis(x, -1, axis)


def walsh_matrix(n: int) -> np.ndarray:
    """Dense ``(-1)^(q.p)`` matrix, for checks."""
    d = 1 << n
    k = np.arange(d)
    return 1 - 2 * (popcount_array(k[:, None] & k[None, :]) & 1)
