"""Compare the numba and pure-numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--lines 2000] [--points 1000000] [--repeat 5]

Both backends are imported from the same module, so the env flag is not
needed here; results are checked for agreement before timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qshock import _kernels
from qshock import characteristics as ch
from qshock.gaussian_packet import PacketParams


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def crossing_inputs(n_lines):
    p = PacketParams()
    x0 = np.linspace(-2.0, 2.0, int(np.sqrt(n_lines)))
    t0 = np.linspace(0.0, 2.0, max(2, n_lines // x0.size))
    X0, T0 = (a.ravel() for a in np.meshgrid(x0, t0, indexing="ij"))
    anchor, slope = ch.line_coefficients(p, X0, T0, 1)
    return anchor - slope * T0, slope, ch.default_t_max(p)


def unwrap_inputs(n_points):
    x = np.linspace(-10.0, 10.0, n_points)
    phase = 0.5 * x**2 + 3.0 * x
    wrapped = np.angle(np.exp(1j * phase))
    return wrapped, n_points // 2, 0.9 * np.pi


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lines", type=int, default=2000)
    ap.add_argument("--points", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    b, s, t_max = crossing_inputs(args.lines)
    ref = _kernels.earliest_crossing_numpy(b, s, t_max)
    got = _kernels.earliest_crossing_numba(b, s, t_max)  # also triggers compilation
    assert got[1:] == ref[1:] and abs(got[0] - ref[0]) <= 1e-12 * abs(ref[0]), (got, ref)

    phase, start, jump = unwrap_inputs(args.points)
    uref, bad_ref = _kernels.unwrap_from_numpy(phase, start, jump)
    ugot, bad_got = _kernels.unwrap_from_numba(phase, start, jump)
    # increments are reduced by different formulas, so only rounding-level agreement
    assert bad_ref == bad_got and np.max(np.abs(uref - ugot)) < 1e-6, np.max(np.abs(uref - ugot))

    rows = [
        (f"earliest_crossing ({b.size} lines, {b.size * (b.size - 1) // 2} pairs)",
         best_of(lambda: _kernels.earliest_crossing_numpy(b, s, t_max), args.repeat),
         best_of(lambda: _kernels.earliest_crossing_numba(b, s, t_max), args.repeat)),
        (f"unwrap_from ({phase.size} samples)",
         best_of(lambda: _kernels.unwrap_from_numpy(phase, start, jump), args.repeat),
         best_of(lambda: _kernels.unwrap_from_numba(phase, start, jump), args.repeat)),
    ]
    print(f"{'kernel':<52}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, t_np, t_nb in rows:
        print(f"{name:<52}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
