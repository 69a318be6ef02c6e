"""Finite-difference stencils on uniform grids."""
from __future__ import annotations

import numpy as np


def gradient(f: np.ndarray, h: float, order: int = 2) -> np.ndarray:
    """First derivative; central in the interior, one-sided at the ends.

    ``order=2`` uses three-point stencils, ``order=4`` five-point stencils
    (biased near the ends).
    """
    f = np.asarray(f)
    if f.shape[0] < 3:
        raise ValueError("need at least 3 samples")
    g = np.empty_like(f, dtype=np.result_type(f, float))
    g[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    g[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    if order == 4:
        if f.shape[0] < 5:
            raise ValueError("order 4 needs at least 5 samples")
        g[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
        g[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
        g[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
        g[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
        g[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    elif order != 2:
        raise ValueError(f"unsupported order {order}")
    return g


def second_derivative(f: np.ndarray, h: float, periodic: bool = False) -> np.ndarray:
    f = np.asarray(f)
    if periodic:
        return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / (h * h)
    if f.shape[0] < 4:
        raise ValueError("need at least 4 samples")
    d = np.empty_like(f, dtype=np.result_type(f, float))
    d[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (h * h)
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h)
    d[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / (h * h)
    return d


def uniform_spacing(x: np.ndarray, rtol: float = 1e-12) -> float:
    """Return the spacing of ``x`` or raise if it is not uniform."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("grid must be 1D with at least 2 points")
    dx = np.diff(x)
    h = (x[-1] - x[0]) / (x.size - 1)
    if h <= 0 or np.max(np.abs(dx - h)) > rtol * max(abs(h), np.max(np.abs(x))):
        raise ValueError("grid spacing is not uniform")
    return float(h)
