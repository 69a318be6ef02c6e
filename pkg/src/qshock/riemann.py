"""Riemann invariants ``u +/- F(rho)`` of the quasilinear system.

``F(rho) = integral of sqrt(Q_rho / rho) d rho`` from a reference density.
``Q_rho`` must be supplied as a function of ``rho`` alone; for a wave packet
that only holds on a frozen time slice, so every chart records its time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from . import gaussian_packet as gp
from .characteristics import CharacteristicLine
from .errors import NegativeRadicand
from .quasilinear import FieldProfile, q_rho_all

QUAD_EPSABS = 1e-10
CHART_NODES = 2048


def gaussian_q_rho_relation(params: gp.PacketParams, t: float) -> Callable:
    """``Q_rho(rho) = hbar^2 / (4 m^2 sigma(t)^2 rho)`` on the slice at ``t``."""
    if not params.dispersive:
        return lambda rho: np.zeros_like(np.asarray(rho, dtype=float))
    c2 = float(gp.sound_speed(params, t)) ** 2
    return lambda rho: c2 / np.asarray(rho, dtype=float)


def profile_q_rho_relation(profile: FieldProfile, order: int = 4) -> Callable:
    """``Q_rho(rho)`` interpolated from the pointwise ratio on a sampled profile.

    Uses the samples to the right of the density maximum, where ``rho(x)`` is
    monotone, and interpolates ``rho * Q_rho`` in ``log rho``.
    """
    values, ok = q_rho_all(profile, order=order)
    peak = int(np.argmax(profile.rho))
    ok[: peak + 1] = False
    ok &= profile.rho > 0
    rho = profile.rho[ok]
    g = rho * values[ok]
    order_ = np.argsort(rho)
    log_rho = np.log(rho[order_])
    keep = np.concatenate([[True], np.diff(log_rho) > 0])
    interp = PchipInterpolator(log_rho[keep], g[order_][keep], extrapolate=False)
    lo, hi = float(np.exp(log_rho[keep][0])), float(np.exp(log_rho[keep][-1]))

    def relation(r):
        r = np.asarray(r, dtype=float)
        if np.any(r < lo * (1 - 1e-12)) or np.any(r > hi * (1 + 1e-12)):
            raise ValueError(f"rho outside the sampled range [{lo:g}, {hi:g}]")
        return interp(np.clip(np.log(r), log_rho[keep][0], log_rho[keep][-1])) / r

    relation.rho_range = (lo, hi)
    return relation


def _integrand(relation):
    # in s = log(rho): sqrt(Q_rho / rho) d rho = sqrt(Q_rho * rho) ds
    def f(s):
        r = np.exp(s)
        q = float(relation(r))
        if q < 0:
            raise NegativeRadicand(f"Q_rho/rho = {q / r:g} < 0 at rho = {r:g}")
        return np.sqrt(q * r)

    return f


def big_f(relation: Callable, rho, rho_ref: float):
    """``F(rho)`` with ``F(rho_ref) = 0`` by adaptive quadrature."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr <= 0) or rho_ref <= 0:
        raise ValueError("densities must be positive")
    f = _integrand(relation)
    s_ref = np.log(rho_ref)
    out = np.empty(rho_arr.shape)
    for idx, r in np.ndenumerate(rho_arr):
        if r == rho_ref:
            out[idx] = 0.0
            continue
        val, _ = integrate.quad(f, s_ref, np.log(r), epsabs=QUAD_EPSABS, epsrel=1e-12, limit=200)
        out[idx] = val
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class InvariantChart:
    """Tabulated ``F`` on a frozen slice, with the wave speed used for ``x +/- lam t``."""

    rho_ref: float
    rho_nodes: np.ndarray
    F_nodes: np.ndarray
    lam: float
    t: float
    relation: Callable

    def __call__(self, rho):
        """Interpolated ``F``; monotone cubic in ``log rho``."""
        interp = PchipInterpolator(np.log(self.rho_nodes), self.F_nodes, extrapolate=False)
        out = interp(np.log(np.asarray(rho, dtype=float)))
        if np.any(np.isnan(out)):
            raise ValueError("rho outside the tabulated range")
        return out

    def exact(self, rho):
        return big_f(self.relation, rho, self.rho_ref)


def build_chart(
    relation: Callable,
    rho_ref: float,
    rho_min: float,
    lam: float,
    t: float = 0.0,
    nodes: int = CHART_NODES,
) -> InvariantChart:
    if not 0 < rho_min < rho_ref:
        raise ValueError("need 0 < rho_min < rho_ref")
    rho_nodes = np.geomspace(rho_min, rho_ref, nodes)
    rho_nodes[-1] = rho_ref
    f = _integrand(relation)
    s = np.log(rho_nodes)
    pieces = np.empty(nodes - 1)
    for k in range(nodes - 1):
        pieces[k], _ = integrate.quad(f, s[k + 1], s[k], epsabs=QUAD_EPSABS / nodes, epsrel=1e-12)
    # accumulate from rho_ref downward so F(rho_ref) is exactly zero
    F_nodes = np.zeros(nodes)
    F_nodes[:-1] = np.cumsum(pieces[::-1])[::-1]
    return InvariantChart(
        rho_ref=float(rho_ref),
        rho_nodes=rho_nodes,
        F_nodes=F_nodes,
        lam=float(lam),
        t=float(t),
        relation=relation,
    )


def gaussian_chart(
    params: gp.PacketParams,
    t: float,
    family=1,
    rho_ratio_min: float = 1e-3,
    lam: float | None = None,
    nodes: int = CHART_NODES,
) -> InvariantChart:
    """Chart for the normalized packet frozen at ``t``.

    ``rho_ref`` is the peak density; the default wave speed is the
    characteristic speed of the chosen family at the packet centre.
    """
    from .characteristics import family_sign

    rho_ref = float(gp.density(params, params.u0 * t, t, normalized=True))
    if lam is None:
        lam = params.u0 + family_sign(family) * float(gp.sound_speed(params, t))
    return build_chart(
        gaussian_q_rho_relation(params, t),
        rho_ref,
        rho_ratio_min * rho_ref,
        lam,
        t=t,
        nodes=nodes,
    )


def invariants(u, F):
    """``(A, B) = (u + F, u - F)``."""
    u = np.asarray(u, dtype=float)
    F = np.asarray(F, dtype=float)
    return u + F, u - F


def from_invariants(A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return 0.5 * (A + B), 0.5 * (A - B)


@dataclass(frozen=True)
class TravelingWave:
    """``u = A(x + lam t) + B(x - lam t)``, ``F = A(x + lam t) - B(x - lam t)``.

    This is the literal superposition.  Inverting the invariants
    themselves gives half of each; :meth:`consistency` reports the ratio.
    """

    A: Callable
    B: Callable
    lam: float

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        a = self.A(x + self.lam * t)
        b = self.B(x - self.lam * t)
        return a + b, a - b

    def from_invariant_inversion(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        return from_invariants(self.A(x + self.lam * t), self.B(x - self.lam * t))

    def consistency(self, x, t) -> dict:
        u, F = self(x, t)
        u_inv, F_inv = self.from_invariant_inversion(x, t)
        with np.errstate(divide="ignore", invalid="ignore"):
            ru = np.where(u_inv != 0, u / u_inv, np.nan)
            rF = np.where(F_inv != 0, F / F_inv, np.nan)
        return {
            "u_ratio_min": float(np.nanmin(ru)) if np.any(np.isfinite(ru)) else float("nan"),
            "u_ratio_max": float(np.nanmax(ru)) if np.any(np.isfinite(ru)) else float("nan"),
            "F_ratio_min": float(np.nanmin(rF)) if np.any(np.isfinite(rF)) else float("nan"),
            "F_ratio_max": float(np.nanmax(rF)) if np.any(np.isfinite(rF)) else float("nan"),
            "max_abs_u_gap": float(np.max(np.abs(u - u_inv))),
            "max_abs_F_gap": float(np.max(np.abs(F - F_inv))),
        }


def traveling_solution(A: Callable, B: Callable, lam: float) -> TravelingWave:
    return TravelingWave(A=A, B=B, lam=float(lam))


def invariant_along(
    params: gp.PacketParams,
    line: CharacteristicLine,
    t_samples,
    chart: InvariantChart | None = None,
):
    """``u + F`` (plus family) or ``u - F`` (minus family) sampled along ``line``."""
    t_samples = np.asarray(t_samples, dtype=float)
    if t_samples.ndim != 1 or t_samples.size < 1 or np.any(np.diff(t_samples) <= 0):
        raise ValueError("t_samples must be strictly increasing")
    if chart is None:
        chart = gaussian_chart(params, line.t0, family=line.family)
    x = line(t_samples)
    u = gp.velocity(params, x, t_samples)
    rho = gp.density(params, x, t_samples, normalized=True)
    F = np.atleast_1d(big_f(chart.relation, rho, chart.rho_ref))
    return u + line.family * F


def invariant_drift(
    params: gp.PacketParams,
    line: CharacteristicLine,
    t_samples,
    chart: InvariantChart | None = None,
) -> float:
    """Largest departure of the family's invariant from its first sample."""
    values = invariant_along(params, line, t_samples, chart)
    return float(np.max(np.abs(values - values[0])))
