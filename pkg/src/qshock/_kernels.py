"""Hot loops, with numba and pure-numpy implementations.

The numba path is used when numba imports cleanly and the environment
variable ``QSHOCK_DISABLE_NUMBA`` is unset or ``0``.  Both implementations
stay importable (``*_numpy`` / ``*_numba``) so they can be compared.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("QSHOCK_DISABLE_NUMBA", "0") not in ("", "0", "false", "False")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

_PAIR_CHUNK = 1024


def earliest_crossing_numpy(b: np.ndarray, s: np.ndarray, t_max: float):
    """Earliest intersection of the lines ``b[i] + s[i] t`` in ``(0, t_max]``.

    Returns ``(t, i, j)`` with ``i < j``, or ``(inf, -1, -1)`` when no pair
    crosses in the window.  Parallel and coincident lines are skipped.
    """
    b = np.asarray(b, dtype=float)
    s = np.asarray(s, dtype=float)
    n = b.size
    best, bi, bj = np.inf, -1, -1
    for lo in range(0, n, _PAIR_CHUNK):
        hi = min(n, lo + _PAIR_CHUNK)
        db = b[None, :] - b[lo:hi, None]
        ds = s[lo:hi, None] - s[None, :]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            t = db / ds
        rows = np.arange(lo, hi)[:, None]
        cols = np.arange(n)[None, :]
        ok = (cols > rows) & (ds != 0.0) & (t > 0.0) & (t <= t_max)
        if not ok.any():
            continue
        t = np.where(ok, t, np.inf)
        flat = int(np.argmin(t))
        r, c = divmod(flat, n)
        if t[r, c] < best:
            best, bi, bj = float(t[r, c]), lo + r, c
    return best, bi, bj


def unwrap_from_numpy(phase: np.ndarray, start: int, max_jump: float):
    """Continuous phase built outward from ``start``.

    Returns ``(unwrapped, bad_index)``; ``bad_index`` is -1 unless some
    wrapped neighbour increment exceeds ``max_jump`` in magnitude.
    """
    phase = np.asarray(phase, dtype=float)
    inc = np.angle(np.exp(1j * np.diff(phase)))
    bad = np.flatnonzero(np.abs(inc) > max_jump)
    out = np.empty_like(phase)
    out[start] = phase[start]
    out[start + 1:] = phase[start] + np.cumsum(inc[start:])
    out[:start] = phase[start] - np.cumsum(inc[:start][::-1])[::-1]
    return out, (int(bad[0]) if bad.size else -1)


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def earliest_crossing_numba(b, s, t_max):
        n = b.size
        best = np.inf
        bi = -1
        bj = -1
        for i in range(n):
            bi_ = b[i]
            si = s[i]
            for j in range(i + 1, n):
                ds = si - s[j]
                if ds == 0.0:
                    continue
                t = (b[j] - bi_) / ds
                if t > 0.0 and t <= t_max and t < best:
                    best = t
                    bi = i
                    bj = j
        return best, bi, bj

    @numba.njit(cache=True)
    def unwrap_from_numba(phase, start, max_jump):
        n = phase.size
        out = np.empty(n)
        out[start] = phase[start]
        bad = -1
        two_pi = 2.0 * np.pi
        for i in range(start + 1, n):
            d = phase[i] - phase[i - 1]
            d = d - two_pi * np.floor((d + np.pi) / two_pi)
            if abs(d) > max_jump and (bad < 0 or i - 1 < bad):
                bad = i - 1
            out[i] = out[i - 1] + d
        for i in range(start - 1, -1, -1):
            d = phase[i + 1] - phase[i]
            d = d - two_pi * np.floor((d + np.pi) / two_pi)
            if abs(d) > max_jump and (bad < 0 or i < bad):
                bad = i
            out[i] = out[i + 1] - d
        return out, bad

else:  # pragma: no cover
    earliest_crossing_numba = None
    unwrap_from_numba = None


if BACKEND == "numba":
    def earliest_crossing(b, s, t_max):
        t, i, j = earliest_crossing_numba(
            np.ascontiguousarray(b, dtype=np.float64),
            np.ascontiguousarray(s, dtype=np.float64),
            float(t_max),
        )
        return float(t), int(i), int(j)

    def unwrap_from(phase, start, max_jump):
        out, bad = unwrap_from_numba(
            np.ascontiguousarray(phase, dtype=np.float64), int(start), float(max_jump)
        )
        return out, int(bad)
else:
    earliest_crossing = earliest_crossing_numpy
    unwrap_from = unwrap_from_numpy
