"""Quasilinear (rho, u) form of the 1D Madelung equations.

The system is ``w_t + A(w) w_x = 0`` with ``w = (rho, u)`` and

    A = [[u,     rho],
         [Q_rho, u  ]]

whose eigenvalues ``u +/- sqrt(rho Q_rho)`` are the characteristic speeds.

``Q`` for a wave packet depends on ``x`` and ``t`` rather than on ``rho``
alone, so ``Q_rho`` is taken pointwise as ``(dQ/dx) / (drho/dx)`` along a
sampled profile: the chain-rule value wherever ``rho(x)`` is locally
invertible.  This is a modelling choice of this package.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gaussian_packet as gp
from .errors import (
    DegenerateGradient,
    EigvecUndefined,
    EllipticRegime,
    GridMismatch,
)
from .stencils import gradient, uniform_spacing

GRAD_EPS = 1e-12


@dataclass(frozen=True)
class FieldProfile:
    """Hydrodynamic state sampled on a uniform grid at time ``t``."""

    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    Q: np.ndarray
    t: float = 0.0
    h: float = field(init=False, repr=False)

    def __post_init__(self):
        arrays = {}
        for name in ("x", "rho", "u", "Q"):
            a = np.asarray(getattr(self, name), dtype=float)
            if a.ndim != 1:
                raise ValueError(f"{name} must be one dimensional")
            arrays[name] = a
        n = arrays["x"].size
        if n < 8:
            raise ValueError(f"profile needs at least 8 samples, got {n}")
        if any(a.size != n for a in arrays.values()):
            raise ValueError("x, rho, u and Q must have equal length")
        if np.any(arrays["rho"] < 0):
            raise ValueError("rho must be non-negative")
        for name, a in arrays.items():
            object.__setattr__(self, name, a)
        object.__setattr__(self, "h", uniform_spacing(arrays["x"]))

    def __len__(self):
        return self.x.size


def gaussian_profile(
    params: gp.PacketParams,
    t: float,
    n: int = 4096,
    half_width: float = 8.0,
    normalized: bool = True,
) -> FieldProfile:
    """Sample the closed-form packet on ``u0 t +/- half_width * sigma(t)``."""
    sigma = float(gp.spread(params, t))
    c = params.u0 * t
    x = np.linspace(c - half_width * sigma, c + half_width * sigma, n)
    return FieldProfile(
        x=x,
        rho=gp.density(params, x, t, normalized=normalized),
        u=gp.velocity(params, x, t),
        Q=gp.quantum_potential(params, x, t),
        t=float(t),
    )


def q_rho_all(profile: FieldProfile, order: int = 2):
    """Pointwise ``Q_rho`` at every grid point plus the validity mask.

    The mask is False at the two end points and wherever ``|drho/dx|`` falls
    below ``GRAD_EPS * max|drho/dx|``; values there are NaN.
    """
    drho = gradient(profile.rho, profile.h, order=order)
    dQ = gradient(profile.Q, profile.h, order=order)
    threshold = GRAD_EPS * np.max(np.abs(drho))
    ok = np.abs(drho) > threshold
    ok[0] = ok[-1] = False
    out = np.full(profile.x.shape, np.nan)
    out[ok] = dQ[ok] / drho[ok]
    return out, ok


def q_rho(profile: FieldProfile, i: int, order: int = 2) -> float:
    n = len(profile)
    if not 1 <= i <= n - 2:
        raise IndexError(f"index {i} outside the interior 1..{n - 2}")
    values, ok = q_rho_all(profile, order=order)
    if not ok[i]:
        raise DegenerateGradient(f"|drho/dx| below threshold at index {i}")
    return float(values[i])


@dataclass(frozen=True)
class EigenStructure:
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    eigvec_plus: np.ndarray
    eigvec_minus: np.ndarray
    q_rho: np.ndarray


def coefficient_matrix(rho, u, q_rho) -> np.ndarray:
    """The matrix ``A`` of the quasilinear system, shape ``(..., 2, 2)``."""
    rho, u, q_rho = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (rho, u, q_rho)))
    A = np.empty(rho.shape + (2, 2))
    A[..., 0, 0] = u
    A[..., 0, 1] = rho
    A[..., 1, 0] = q_rho
    A[..., 1, 1] = u
    return A


def eigenvalues(rho, u, q_rho):
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    q_rho = np.asarray(q_rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho must be non-negative")
    disc = rho * q_rho
    if np.any(disc < 0):
        worst = float(np.min(disc))
        raise EllipticRegime(f"rho*Q_rho = {worst:g} < 0: complex characteristic speeds", worst)
    c = np.sqrt(disc)
    return u + c, u - c


def eigenstructure(rho, u, q_rho) -> EigenStructure:
    """Eigenpairs of ``A``; eigenvectors are scaled to second component 1."""
    lam_p, lam_m = eigenvalues(rho, u, q_rho)
    q_rho = np.asarray(q_rho, dtype=float)
    if np.any(q_rho == 0):
        raise EigvecUndefined(
            "Q_rho = 0: eigenvector first component diverges", lam_p, lam_m
        )
    a = np.sqrt(np.asarray(rho, dtype=float) / q_rho)
    ones = np.ones_like(a)
    return EigenStructure(
        lambda_plus=lam_p,
        lambda_minus=lam_m,
        eigvec_plus=np.stack([a, ones], axis=-1),
        eigvec_minus=np.stack([-a, ones], axis=-1),
        q_rho=q_rho,
    )


def madelung_residual(
    before: FieldProfile,
    now: FieldProfile,
    after: FieldProfile,
    m: float = 1.0,
    V=None,
) -> tuple[float, float]:
    """L-infinity norms of the continuity and Euler residuals at ``now.t``.

    Time derivatives are central over the three slices, which must be equally
    spaced in time and share one grid.  ``V`` is an optional potential sampled
    on that grid; it enters the momentum balance as ``-dV/dx / m``.
    """
    for p in (before, after):
        if p.x.shape != now.x.shape or np.any(p.x != now.x):
            raise GridMismatch("time slices are sampled on different grids")
    dt1 = now.t - before.t
    dt2 = after.t - now.t
    if dt1 <= 0 or dt2 <= 0:
        raise ValueError("slices must be strictly increasing in time")
    if abs(dt1 - dt2) > 1e-9 * max(dt1, dt2):
        raise ValueError("slices must be equally spaced in time")
    dt = 0.5 * (dt1 + dt2)
    h = now.h

    rho_t = (after.rho - before.rho) / (2.0 * dt)
    continuity = rho_t + gradient(now.rho * now.u, h)

    potential = now.Q.copy()
    if V is not None:
        V = np.asarray(V, dtype=float)
        if V.shape != now.x.shape:
            raise GridMismatch("potential samples do not match the grid")
        potential = potential + V / m
    u_t = (after.u - before.u) / (2.0 * dt)
    euler = u_t + now.u * gradient(now.u, h) + gradient(potential, h)
    return float(np.max(np.abs(continuity))), float(np.max(np.abs(euler)))
