"""Vector arithmetic shared by the scoring models.

Circular convolution/correlation, circulant matrices and the DFT pair.
Indices are 0-based and wrap modulo ``n``.  The forward transform is
unnormalized and the inverse carries the ``1/n`` factor, so that
``idft(x) == conj(F).T @ x / n``.

``circ`` and the ``*_direct`` kernels materialize O(n^2) work and exist as
reference implementations; model scoring never calls them.
"""

from __future__ import annotations

import functools

import numpy as np


class DimensionError(ValueError):
    """Operands have incompatible lengths."""


def as_real(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_complex(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _same_length(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[-1] != y.shape[-1]:
        raise DimensionError(f"length mismatch: {x.shape[-1]} vs {y.shape[-1]}")


def circ(v) -> np.ndarray:
    """Circulant matrix with ``C[i, j] = v[(i - j) mod n]``."""
    v = as_real(v, "v")
    n = v.size
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return v[idx]


def dft(x) -> np.ndarray:
    """Unnormalized forward DFT along the last axis (any length)."""
    return np.fft.fft(np.asarray(x), axis=-1)


def idft(x) -> np.ndarray:
    """Inverse DFT with the 1/n factor, along the last axis."""
    return np.fft.ifft(np.asarray(x), axis=-1)


def dft_matrix(n: int) -> np.ndarray:
    """Dense Fourier matrix ``F[j, k] = exp(-2*pi*i*j*k/n)``."""
    if n < 1:
        raise DimensionError("n must be positive")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n)


def cconv(x, y) -> np.ndarray:
    """Circular convolution via FFT; real inputs give a real result."""
    x = as_real(x, "x")
    y = as_real(y, "y")
    _same_length(x, y)
    return np.fft.ifft(np.fft.fft(x) * np.fft.fft(y)).real


def ccorr(x, y) -> np.ndarray:
    """Circular correlation ``[x * y]_i = sum_j x[(j - i) mod n] y[j]`` via FFT."""
    x = as_real(x, "x")
    y = as_real(y, "y")
    _same_length(x, y)
    return np.fft.ifft(np.conj(np.fft.fft(x)) * np.fft.fft(y)).real


@functools.lru_cache(maxsize=16)
def _shift_index(n: int) -> np.ndarray:
    # idx[i, j] = (i - j) mod n
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    idx.setflags(write=False)
    return idx


def cconv_direct(x, y) -> np.ndarray:
    x = as_real(x, "x")
    y = as_real(y, "y")
    _same_length(x, y)
    return x[_shift_index(x.size)] @ y


def ccorr_direct(x, y) -> np.ndarray:
    x = as_real(x, "x")
    y = as_real(y, "y")
    _same_length(x, y)
    return x[_shift_index(x.size).T] @ y


def tri_prod(w, a, b):
    """Sum of componentwise products ``sum_i w_i a_i b_i`` (complex-valued)."""
    w = np.asarray(w)
    a = np.asarray(a)
    b = np.asarray(b)
    if not (w.shape == a.shape == b.shape):
        raise DimensionError(f"shape mismatch: {w.shape}, {a.shape}, {b.shape}")
    return complex(np.sum(w * a * b))
