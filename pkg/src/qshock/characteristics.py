"""Characteristic lines of the Gaussian packet and shock-formation detection.

A line is launched from the Bohm trajectory of the element that starts at
``x0``: at launch time ``t0`` it is anchored at ``x(t0)`` with slope
``u(x(t0), t0) +/- hbar / (2 m sigma(t0))``.  Two conventions for the time
argument are supported:

``paper``
    ``X(t; t0) = x(t0) + slope * (t + t0)``, the default convention.
``corrected``
    ``X(t; t0) = x(t0) + slope * (t - t0)``, the usual construction in which
    the line passes through its anchor at ``t = t0``.

A shock forms where neighbouring lines meet, i.e. where ``dX/dt0 = 0``.
:func:`shock_condition_root` solves that condition numerically,
:func:`first_crossing` intersects discrete lines by brute force, and
:func:`shock_time_paper` / :func:`shock_position_paper` evaluate reference
closed forms literally.  They are not dimensionally consistent and only agree
with the numerics for ``m = sigma0 = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import _kernels
from . import gaussian_packet as gp
from .errors import DegenerateLaunch, NoCrossing, NoRootInHorizon

MODES = ("paper", "corrected")
METHODS = ("paper-formula", "condition-root", "pairwise-crossing")
SCAN_SAMPLES = 1024
BISECT_RTOL = 1e-10


def family_sign(family) -> int:
    if family in (1, "+", "plus", "p"):
        return 1
    if family in (-1, "-", "minus", "m"):
        return -1
    raise ValueError(f"family must be + or -, got {family!r}")


def family_name(sign: int) -> str:
    return "plus" if sign > 0 else "minus"


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class CharacteristicLine:
    t0: float
    x_anchor: float
    slope: float
    family: int
    mode: str = "paper"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.mode == "paper":
            return self.x_anchor + self.slope * (t + self.t0)
        return self.x_anchor + self.slope * (t - self.t0)

    @property
    def intercept(self) -> float:
        """Value at ``t = 0``, so that ``X(t) = intercept + slope * t``."""
        return float(self(0.0))


def line_coefficients(params: gp.PacketParams, x0, t0, family):
    """Vectorized anchors and slopes for launch points ``(x0, t0)``."""
    sign = family_sign(family)
    anchor = gp.trajectory(params, x0, t0)
    slope = gp.velocity(params, anchor, t0) + sign * gp.sound_speed(params, t0)
    return anchor, slope


def _intercepts(anchor, slope, t0, mode):
    if mode == "paper":
        return anchor + slope * t0
    return anchor - slope * t0


def build_line(params: gp.PacketParams, x0: float, t0: float, family, mode: str = "paper"):
    _check_mode(mode)
    anchor, slope = line_coefficients(params, x0, t0, family)
    return CharacteristicLine(
        t0=float(t0),
        x_anchor=float(anchor),
        slope=float(slope),
        family=family_sign(family),
        mode=mode,
    )


@dataclass(frozen=True)
class ShockEvent:
    t_s: float
    x_s: float
    family: int
    method: str
    params: gp.PacketParams
    x0: float
    mode: str = "paper"
    detail: dict = field(default_factory=dict, compare=False)


def default_t_max(params: gp.PacketParams) -> float:
    return 100.0 * params.time_scale


def default_t0_step(params: gp.PacketParams) -> float:
    return 1e-5 * max(1.0, params.sigma0**2 * params.m / params.hbar)


def launch_derivative(params, x0, family, mode="paper", t0=0.0, delta=None):
    """``dX/dt0`` at fixed ``t`` by a central difference in the launch time.

    Returns a callable of ``t`` (vectorized).
    """
    _check_mode(mode)
    delta = default_t0_step(params) if delta is None else float(delta)
    t0s = np.array([t0 - delta, t0 + delta])
    anchor, slope = line_coefficients(params, x0, t0s, family)
    b = _intercepts(anchor, slope, t0s, mode)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return ((b[1] - b[0]) + (slope[1] - slope[0]) * t) / (2.0 * delta)

    return deriv


def shock_condition_root(
    params: gp.PacketParams,
    x0: float,
    family,
    mode: str = "paper",
    t_max: float | None = None,
    delta: float | None = None,
) -> ShockEvent:
    """Earliest ``t`` in ``(0, t_max]`` where neighbouring lines launched at
    ``t0 = 0`` from ``x0`` intersect.

    The scan uses ``SCAN_SAMPLES`` log-spaced times; the first sign change is
    refined by bisection.
    """
    if x0 == 0:
        raise DegenerateLaunch("x0 = 0 launches the self-similar centre line")
    t_max = default_t_max(params) if t_max is None else float(t_max)
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    deriv = launch_derivative(params, x0, family, mode, delta=delta)
    ts = t_max * np.logspace(-12.0, 0.0, SCAN_SAMPLES)
    d = deriv(ts)
    sign = np.sign(d)
    hits = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    zeros = np.flatnonzero(d == 0.0)
    if zeros.size and (not hits.size or zeros[0] <= hits[0]) and np.any(d != 0.0):
        t_s = float(ts[zeros[0]])
    elif hits.size:
        k = hits[0]
        t_s = optimize.bisect(
            lambda t: float(deriv(t)), ts[k], ts[k + 1], xtol=1e-300, rtol=BISECT_RTOL
        )
    else:
        raise NoRootInHorizon(
            f"dX/dt0 has no sign change for t in (0, {t_max:g}] "
            f"(x0={x0:g}, family={family_name(family_sign(family))}, mode={mode})"
        )
    line = build_line(params, x0, 0.0, family, mode)
    return ShockEvent(
        t_s=t_s,
        x_s=float(line(t_s)),
        family=family_sign(family),
        method="condition-root",
        params=params,
        x0=float(x0),
        mode=mode,
        detail={"t_max": t_max},
    )


def shock_time_symbolic(params: gp.PacketParams, x0: float, family, mode: str = "paper") -> float:
    """Root of ``dX/dt0 = 0`` at ``t0 = 0`` from analytic launch derivatives.

    At ``t0 = 0``: ``x'(0) = u0``, ``lambda(0) = u0 +/- hbar/(2 m sigma0)`` and
    ``lambda'(0) = hbar^2 x0 / (4 m^2 sigma0^4)``.  The reference condition
    ``x' + lambda' (t + t0) - lambda = 0`` coincides with the ``corrected``
    mode at ``t0 = 0``.  Returns ``nan`` when ``lambda'(0) = 0``.
    """
    _check_mode(mode)
    sign = family_sign(family)
    hbar, m, s0, u0 = params.hbar, params.m, params.sigma0, params.u0
    if params.dispersive:
        lam = u0 + sign * hbar / (2.0 * m * s0)
        dlam = hbar**2 * x0 / (4.0 * m**2 * s0**4)
    else:
        lam, dlam = u0, 0.0
    if dlam == 0:
        return float("nan")
    if mode == "paper":
        return -(u0 + lam) / dlam
    return (lam - u0) / dlam


def shock_time_paper(params: gp.PacketParams, x0: float, family) -> float:
    if x0 == 0:
        raise DegenerateLaunch("closed-form shock time diverges at x0 = 0")
    sign = family_sign(family)
    hbar, m, s0 = params.hbar, params.m, params.sigma0
    root = np.sqrt(hbar**2 / (16.0 * s0**3))
    return float(-8.0 * m**2 * s0**4 / (hbar**2 * x0) * (params.u0 + sign * root))


def shock_position_paper(params: gp.PacketParams, t_s: float, family) -> float:
    sign = family_sign(family)
    root = np.sqrt(params.hbar**2 / (4.0 * params.sigma0**3))
    return float((params.u0 + sign * root) * t_s)


def paper_formula_event(params: gp.PacketParams, x0: float, family) -> ShockEvent:
    t_s = shock_time_paper(params, x0, family)
    return ShockEvent(
        t_s=t_s,
        x_s=shock_position_paper(params, t_s, family),
        family=family_sign(family),
        method="paper-formula",
        params=params,
        x0=float(x0),
        mode="paper",
    )


def shock_special_u0_zero(params: gp.PacketParams, x0: float) -> tuple[float, float]:
    """Reference special case for a packet at rest in the lab frame.

    Returns ``(t_s, x_s)`` from ``t_s = sqrt(4 m^2 sigma0^13 / (hbar^2 x0^2))``
    and ``x_s = sqrt(m^2 sigma0^10 / x0^2)``.  It is not the ``u0 -> 0`` limit
    of :func:`shock_time_paper`; it is reported literally.
    """
    if x0 == 0:
        raise DegenerateLaunch("special-case shock time diverges at x0 = 0")
    m, s0, hbar = params.m, params.sigma0, params.hbar
    t_s = np.sqrt(4.0 * m**2 * s0**13 / (hbar**2 * x0**2))
    x_s = np.sqrt(m**2 * s0**10 / x0**2)
    return float(t_s), float(x_s)


def default_launch_t0(params: gp.PacketParams, points: int = 5) -> np.ndarray:
    """Launch times clustered around ``t0 = 0`` for the brute-force oracle."""
    w = 1e-6 * params.time_scale
    return np.linspace(-w, w, points)


def _launch_lines(params, x0s, t0s, family, mode):
    anchor, slope = line_coefficients(params, x0s, t0s, family)
    return _intercepts(anchor, slope, t0s, mode), slope


def first_crossing(
    params: gp.PacketParams,
    launch_x0,
    family,
    mode: str = "paper",
    t_max: float | None = None,
    launch_t0=None,
    rounds: int = 2,
    density: int = 8,
) -> ShockEvent:
    """Earliest pairwise intersection of discrete characteristic lines.

    Launch points are all combinations of ``launch_x0`` and ``launch_t0``
    (default: a narrow cluster around ``t0 = 0``).  Every pair of lines is
    intersected exactly; the earliest crossing in ``(0, t_max]`` is then
    refined ``rounds`` times by inserting ``density``-times more launch points
    between the two minimizing launch points.
    """
    _check_mode(mode)
    t_max = default_t_max(params) if t_max is None else float(t_max)
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    x0s = np.atleast_1d(np.asarray(launch_x0, dtype=float))
    t0s = default_launch_t0(params) if launch_t0 is None else np.atleast_1d(
        np.asarray(launch_t0, dtype=float)
    )
    X0, T0 = (a.ravel() for a in np.meshgrid(x0s, t0s, indexing="ij"))
    if X0.size < 2:
        raise ValueError("need at least two launch points")

    b, s = _launch_lines(params, X0, T0, family, mode)
    t_s, i, j = _kernels.earliest_crossing(b, s, t_max)
    if not np.isfinite(t_s):
        raise NoCrossing(f"no pair of lines crosses in (0, {t_max:g}]")
    pair = ((X0[i], T0[i]), (X0[j], T0[j]))
    x_s = b[i] + s[i] * t_s

    for _ in range(rounds):
        frac = np.linspace(0.0, 1.0, density + 1)
        rx = pair[0][0] + frac * (pair[1][0] - pair[0][0])
        rt = pair[0][1] + frac * (pair[1][1] - pair[0][1])
        rb, rs = _launch_lines(params, rx, rt, family, mode)
        t_new, i, j = _kernels.earliest_crossing(rb, rs, t_max)
        if not np.isfinite(t_new) or t_new > t_s:
            break
        t_s = t_new
        x_s = rb[i] + rs[i] * t_s
        pair = ((rx[i], rt[i]), (rx[j], rt[j]))

    return ShockEvent(
        t_s=float(t_s),
        x_s=float(x_s),
        family=family_sign(family),
        method="pairwise-crossing",
        params=params,
        x0=float(pair[0][0]),
        mode=mode,
        detail={"pair": pair, "t_max": t_max},
    )


def line_ensemble(params: gp.PacketParams, launch_x0, launch_t0, families=(1, -1), mode="paper"):
    """Rows ``(x0, t0, family, anchor, slope)`` for every launch point and family."""
    rows = []
    for fam in families:
        for x0 in launch_x0:
            for t0 in launch_t0:
                line = build_line(params, x0, t0, fam, mode)
                rows.append((float(x0), float(t0), line.family, line.x_anchor, line.slope))
    return rows
