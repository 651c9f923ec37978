"""Kernel backend selection.

The unnormalized in-place Walsh-Hadamard butterfly is the hot loop under every
spectrum, overlap and projection computation. A compiled extension is used
when it imported cleanly; the numpy implementation is always available as a
fallback. Set PHASEBOOST_KERNEL=py or =cython to force a backend (forcing an
unavailable one raises at import).
"""
from __future__ import annotations

import os
from typing import Callable

import numpy as np

from . import _fwht_py


def _py_fwht(a: np.ndarray) -> None:
    _fwht_py.fwht_inplace(a)


BACKENDS: dict[str, Callable[[np.ndarray], None]] = {"py": _py_fwht}

try:
    from . import _fwht as _ext
except ImportError:
    _ext = None
else:

    def _cy_fwht(a: np.ndarray) -> None:
        if a.dtype == np.complex128:
            _ext.fwht_complex(a)
        elif a.dtype == np.float64:
            _ext.fwht_real(a)
        else:
            raise TypeError(f"unsupported dtype for compiled kernel: {a.dtype}")

    BACKENDS["cython"] = _cy_fwht


def _select() -> str:
    requested = os.environ.get("PHASEBOOST_KERNEL")
    if requested is not None:
        if requested not in BACKENDS:
            raise ImportError(
                f"PHASEBOOST_KERNEL={requested!r} but available backends are {sorted(BACKENDS)}"
            )
        return requested
    return "cython" if "cython" in BACKENDS else "py"


ACTIVE_BACKEND: str = _select()


def fwht_inplace(a: np.ndarray) -> None:
    """Unnormalized Walsh-Hadamard transform of a contiguous 1-D array, in place."""
    BACKENDS[ACTIVE_BACKEND](a)


def set_backend(name: str) -> None:
    """Switch the active backend (used by benchmarks and backend-parity tests)."""
    global ACTIVE_BACKEND
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(BACKENDS)}")
    ACTIVE_BACKEND = name


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(BACKENDS))
