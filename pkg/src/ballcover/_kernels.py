"""Exact squared Euclidean distance transforms (lower-envelope form).

The core primitive is the 2D envelope transform
``out[p] = min_q (|p - q|^2 + seed[q])`` over cell indices, computed by
separable 1D parabola envelopes. With a 0/INF seed it is the exact
squared Euclidean distance transform; with ``-d^2`` seeds it yields the
power distance to a set of balls (used for opening-membership tests).

Two backends compute the same exact result:

* ``numba`` — JIT-compiled envelope scans (the hot path).
* ``fallback`` — scipy's exact EDT for plain 0/INF seeds plus a Python
  envelope scan for weighted seeds (slow on large grids; the scan is
  sequential per row and cannot be vectorized without losing exactness).

Selection: set BALLCOVER_BACKEND to "numba" or "fallback"; default
"auto" uses numba when importable.
"""

from __future__ import annotations

import os

import numpy as np

_INF = 1e30


def _envelope_row(row, out, v, z):
    w = row.shape[0]
    k = 0
    v[0] = 0
    z[0] = -_INF
    z[1] = _INF
    for q in range(1, w):
        s = ((row[q] + q * q) - (row[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
        while s <= z[k]:
            k -= 1
            s = ((row[q] + q * q) - (row[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = _INF
    k = 0
    for q in range(w):
        while z[k + 1] < q:
            k += 1
        d = q - v[k]
        out[q] = d * d + row[v[k]]


def _envelope2d_py(seed: np.ndarray) -> np.ndarray:
    h, w = seed.shape
    tmp = np.empty((w, h), dtype=np.float64)
    col = np.empty(h, dtype=np.float64)
    v = np.empty(max(h, w), dtype=np.int64)
    z = np.empty(max(h, w) + 1, dtype=np.float64)
    for j in range(w):
        col[:] = seed[:, j]
        _envelope_row(col, tmp[j], v, z)
    out = np.empty((h, w), dtype=np.float64)
    row = np.empty(w, dtype=np.float64)
    for i in range(h):
        row[:] = tmp[:, i]
        _envelope_row(row, out[i], v, z)
    np.minimum(out, _INF, out=out)
    return out


def _edt_sq_scipy(target: np.ndarray) -> np.ndarray:
    from scipy import ndimage

    if not target.any():
        return np.full(target.shape, _INF)
    d = ndimage.distance_transform_edt(~target)
    # exact squared cell distances are integers; undo the sqrt rounding
    return np.rint(d * d).astype(np.float64)


def _build_numba():
    from numba import njit

    envelope_row = njit(cache=True)(_envelope_row)

    @njit(cache=True)
    def envelope2d(seed):
        h, w = seed.shape
        tmp = np.empty((w, h), dtype=np.float64)
        col = np.empty(h, dtype=np.float64)
        v = np.empty(max(h, w), dtype=np.int64)
        z = np.empty(max(h, w) + 1, dtype=np.float64)
        for j in range(w):
            for i in range(h):
                col[i] = seed[i, j]
            envelope_row(col, tmp[j], v, z)
        out = np.empty((h, w), dtype=np.float64)
        row = np.empty(w, dtype=np.float64)
        for i in range(h):
            for j in range(w):
                row[j] = tmp[j, i]
            envelope_row(row, out[i], v, z)
        for i in range(h):
            for j in range(w):
                if out[i, j] > _INF:
                    out[i, j] = _INF
        return out

    return envelope2d


def _select_backend():
    choice = os.environ.get("BALLCOVER_BACKEND", "auto").lower()
    if choice not in ("auto", "numba", "fallback"):
        raise ValueError(f"BALLCOVER_BACKEND must be auto/numba/fallback, got {choice!r}")
    if choice in ("auto", "numba"):
        try:
            return _build_numba(), "numba"
        except ImportError:
            if choice == "numba":
                raise
    return None, "fallback"


_envelope_numba, BACKEND = _select_backend()


def envelope2d(seed: np.ndarray) -> np.ndarray:
    """min_q (|p-q|^2 + seed[q]) over all cells q, in cell units."""
    s = np.ascontiguousarray(seed, dtype=np.float64)
    if s.ndim != 2:
        raise ValueError("seed must be a 2D array")
    if _envelope_numba is not None:
        return _envelope_numba(s)
    return _envelope2d_py(s)


def edt_squared_cells(target: np.ndarray) -> np.ndarray:
    """Exact squared distance (cell units) to the nearest True cell.

    Cells unreachable from any True cell carry a large sentinel; test with
    ``is_unreachable``.
    """
    t = np.ascontiguousarray(target, dtype=np.bool_)
    if t.ndim != 2:
        raise ValueError("target must be a 2D boolean array")
    if _envelope_numba is None:
        return _edt_sq_scipy(t)
    return _envelope_numba(np.where(t, 0.0, _INF))


def power_transform(weights_sq: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """min over source cells q of |p-q|^2 - weights_sq[q] (cell units).

    Negative output at p means p lies strictly inside the ball of squared
    radius weights_sq[q] around some source q.
    """
    seed = np.where(sources, -np.asarray(weights_sq, dtype=np.float64), _INF)
    return envelope2d(seed)


def is_unreachable(sq: np.ndarray) -> np.ndarray:
    return sq >= _INF * 0.5
