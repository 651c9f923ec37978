"""Pure-numpy Walsh-Hadamard butterflies.

Unnormalized and in place: callers own the 2^(-n/2) (states) or 2^(-n)
(spectra) scaling. Length must be a power of two; the transform is its own
inverse up to a factor of len(a).
"""
from __future__ import annotations

import numpy as np


def fwht_inplace(a: np.ndarray) -> None:
    n = a.shape[0]
    assert a.ndim == 1 and n & (n - 1) == 0
    h = 1
    while h < n:
        b = a.reshape(-1, 2, h)
        lo = b[:, 0, :].copy()
        hi = b[:, 1, :]
        b[:, 0, :] = lo + hi
        b[:, 1, :] = lo - hi
        h *= 2
