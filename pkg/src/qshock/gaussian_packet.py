r"""Closed forms for the free Gaussian wave packet.

All functions broadcast over numpy arrays in ``x`` and ``t``.

Notes on the closed forms this module follows:

* The amplitude carries a ``(2 pi sigma^2)^(-3/4)`` prefactor even though the
  packet is one dimensional.  :func:`fields` evaluates it as written; pass
  ``normalized=True`` to get the 1D normalization ``(2 pi sigma^2)^(-1/4)``,
  which integrates to one over the real line.  Only the normalized density
  conserves probability in time.
* The plane-wave part of the phase is read as ``m * u0 * (x - u0 t / 2)``.
* The reference quantum potential has ``3 - y^2 / 2 sigma^2`` in the
  bracket, the value a 3D Laplacian produces.  The 1D Bohm potential
  ``-(hbar^2 / 2 m^2 R) R''`` has ``1`` instead; ``one_dimensional=True``
  selects it.  The two differ by the uniform offset
  ``hbar^2 / (2 m^2 sigma^2)``, so the force is the same for both.
* The quantum force is ``-dQ/dx = hbar^2 (x - u0 t) / (4 m^2 sigma^4)``.  The
  same expression is sometimes quoted with ``m`` instead of ``m^2`` in the
  denominator; the two agree only for ``m = 1``.  This module uses the form
  consistent with the quantum potential.

Setting ``dispersive=False`` on :class:`PacketParams` switches the quantum
potential off: the spread stays at ``sigma0``, every element moves at ``u0``
and ``Q`` vanishes identically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class PacketParams:
    hbar: float = 1.0
    m: float = 1.0
    sigma0: float = 1.0
    u0: float = 10.0
    k: float | None = None
    dispersive: bool = True

    def __post_init__(self):
        for name in ("hbar", "m", "sigma0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not math.isfinite(self.u0):
            raise ValueError(f"u0 must be finite, got {self.u0!r}")
        if self.k is not None and not math.isfinite(self.k):
            raise ValueError(f"k must be finite, got {self.k!r}")

    @property
    def wavenumber(self) -> float:
        """Carrier wavenumber; defaults to ``m u0 / hbar``."""
        if self.k is None:
            return self.m * self.u0 / self.hbar
        return self.k

    @property
    def time_scale(self) -> float:
        """Spreading time ``2 m sigma0^2 / hbar``."""
        return 2.0 * self.m * self.sigma0**2 / self.hbar

    def with_(self, **changes) -> "PacketParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class PacketFields:
    R: np.ndarray
    S: np.ndarray
    rho: np.ndarray
    sigma: np.ndarray


def _growth(params: PacketParams, t):
    """sqrt(1 + (hbar t / 2 m sigma0^2)^2), or 1 without dispersion."""
    t = np.asarray(t, dtype=float)
    if not params.dispersive:
        return np.ones_like(t)
    return np.hypot(1.0, t / params.time_scale)


def spread(params: PacketParams, t):
    return params.sigma0 * _growth(params, t)


def fields(params: PacketParams, x, t, normalized: bool = False) -> PacketFields:
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    hbar, m, s0, u0 = params.hbar, params.m, params.sigma0, params.u0
    sigma = spread(params, t)
    var = sigma**2
    y = x - u0 * t
    power = 0.25 if normalized else 0.75
    R = (2.0 * np.pi * var) ** (-power) * np.exp(-(y**2) / (4.0 * var))
    if params.dispersive:
        S = (
            -1.5 * hbar * np.arctan(t / params.time_scale)
            + m * u0 * (x - 0.5 * u0 * t)
            + y**2 * hbar**2 * t / (8.0 * m * s0**2 * var)
        )
    else:
        S = m * u0 * (x - 0.5 * u0 * t) + 0.0 * y
    return PacketFields(R=R, S=S, rho=R * R, sigma=np.broadcast_to(sigma, R.shape))


def density(params: PacketParams, x, t, normalized: bool = False):
    return fields(params, x, t, normalized=normalized).rho


def wavefunction(params: PacketParams, x, t=0.0, normalized: bool = True):
    """``R exp(i S / hbar)`` with the plane-wave phase set by ``params.wavenumber``.

    For the default ``k = m u0 / hbar`` this is exactly the amplitude/phase pair
    returned by :func:`fields`.
    """
    f = fields(params, x, t, normalized=normalized)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    carrier = params.hbar * params.wavenumber - params.m * params.u0
    phase = (f.S + carrier * (x - 0.5 * params.u0 * t)) / params.hbar
    return f.R * np.exp(1j * phase)


def quantum_potential(params: PacketParams, x, t, one_dimensional: bool = False):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if not params.dispersive:
        return np.zeros(np.broadcast(x, t).shape)
    var = spread(params, t) ** 2
    y = x - params.u0 * t
    scale = params.hbar**2 / (4.0 * params.m**2 * var)
    return scale * ((1.0 if one_dimensional else 3.0) - y**2 / (2.0 * var))


def quantum_force(params: PacketParams, x, t):
    """``-dQ/dx`` evaluated analytically."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if not params.dispersive:
        return np.zeros(np.broadcast(x, t).shape)
    var = spread(params, t) ** 2
    y = x - params.u0 * t
    return params.hbar**2 * y / (4.0 * params.m**2 * var**2)


def velocity(params: PacketParams, x, t):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if not params.dispersive:
        return np.full(np.broadcast(x, t).shape, float(params.u0))
    var = spread(params, t) ** 2
    gain = params.hbar**2 * t / (4.0 * params.m**2 * params.sigma0**2 * var)
    return params.u0 + gain * (x - params.u0 * t)


def trajectory(params: PacketParams, x0, t):
    """Bohm trajectory of the element that starts at ``x0``."""
    x0 = np.asarray(x0, dtype=float)
    t = np.asarray(t, dtype=float)
    return params.u0 * t + x0 * _growth(params, t)


def sound_speed(params: PacketParams, t):
    """``sqrt(rho Q_rho) = hbar / (2 m sigma(t))`` for the Gaussian."""
    t = np.asarray(t, dtype=float)
    if not params.dispersive:
        return np.zeros_like(t)
    return params.hbar / (2.0 * params.m * spread(params, t))
