"""Split-step Fourier evolution of the 1D Schrodinger equation.

This is the independent ground truth for the closed forms: evolve Gaussian
initial data numerically, pull hydrodynamic fields back out of ``psi`` and
compare them with :mod:`qshock.gaussian_packet`.

The grid is periodic, ``x_j = x_min + j h`` with ``h = (x_max - x_min) / n``.
Instead of absorbing boundaries the evolution checks that ``|psi|`` stays
below ``GUARD_LEVEL`` in a guard band of ``GUARD_FRACTION`` of the domain at
each edge, and raises :class:`~qshock.errors.BoundaryLeak` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from . import gaussian_packet as gp
from .errors import BelowDensityFloor, BoundaryLeak, PhaseUnwrapAmbiguity
from .quasilinear import FieldProfile
from .stencils import gradient

GUARD_FRACTION = 0.05
GUARD_LEVEL = 1e-12
RHO_FLOOR = 1e-12
MAX_PHASE_JUMP = 0.9 * np.pi


@dataclass(frozen=True)
class WaveState:
    psi: np.ndarray
    x_min: float
    x_max: float
    n: int
    t: float = 0.0
    steps: int = 0

    def __post_init__(self):
        n = int(self.n)
        if n < 256 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 256, got {n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        psi = np.asarray(self.psi, dtype=complex)
        if psi.shape != (n,):
            raise ValueError("psi must have n samples")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "n", n)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(self.n)

    @property
    def rho(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    def norm(self) -> float:
        return float(np.sum(self.rho) * self.h)


def initial_state(params: gp.PacketParams, x_min: float, x_max: float, n: int) -> WaveState:
    """Gaussian packet at ``t = 0``, normalized to unit discrete norm."""
    state = WaveState(np.zeros(n, dtype=complex), x_min, x_max, n)
    psi = gp.wavefunction(params, state.x, 0.0, normalized=True)
    psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2) * state.h)
    return replace(state, psi=psi)


def _guard_slices(n: int):
    g = max(1, int(np.ceil(GUARD_FRACTION * n)))
    return slice(0, g), slice(n - g, n)


def check_guard(psi: np.ndarray, t: float = 0.0) -> None:
    left, right = _guard_slices(psi.size)
    edge = max(np.max(np.abs(psi[left])), np.max(np.abs(psi[right])))
    if edge >= GUARD_LEVEL:
        raise BoundaryLeak(f"|psi| = {edge:.3g} in the guard band at t = {t:g}; enlarge the domain")


def evolve(
    state: WaveState,
    params: gp.PacketParams,
    dt: float,
    steps: int,
    V=None,
    guard: bool = True,
) -> WaveState:
    """Strang-split evolution: half potential, full kinetic, half potential."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    steps = int(steps)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    hbar, m = params.hbar, params.m
    k = 2.0 * np.pi * np.fft.fftfreq(state.n, d=state.h)
    kinetic = np.exp(-0.5j * hbar * k**2 * dt / m)
    half_potential = None
    if V is not None:
        V = np.asarray(V, dtype=float)
        if V.shape != (state.n,):
            raise ValueError("V must be sampled on the state grid")
        half_potential = np.exp(-0.5j * V * dt / hbar)

    psi = state.psi.copy()
    if guard:
        check_guard(psi, state.t)
    for step in range(steps):
        if half_potential is not None:
            psi *= half_potential
        psi = np.fft.ifft(np.fft.fft(psi) * kinetic)
        if half_potential is not None:
            psi *= half_potential
        if guard:
            check_guard(psi, state.t + (step + 1) * dt)
    return replace(state, psi=psi, t=state.t + steps * dt, steps=state.steps + steps)


def evolve_to(state: WaveState, params: gp.PacketParams, t: float, dt: float, V=None, guard=True):
    """Evolve to time ``t`` using the largest step ``<= dt`` that lands on it."""
    span = t - state.t
    if span < 0:
        raise ValueError("cannot evolve backwards")
    if span == 0:
        if guard:
            check_guard(state.psi, state.t)
        return state
    steps = int(np.ceil(span / dt - 1e-9))
    return evolve(state, params, span / steps, steps, V=V, guard=guard)


def _density_region(rho: np.ndarray, rho_floor_rel: float):
    peak = int(np.argmax(rho))
    above = rho > rho_floor_rel * rho[peak]
    lo = peak
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = peak
    while hi < rho.size - 1 and above[hi + 1]:
        hi += 1
    return lo, hi + 1, peak


@dataclass(frozen=True)
class Extraction:
    """Fields pulled out of a wave state, on the index range ``[lo, hi)``."""

    profile: FieldProfile
    S: np.ndarray
    lo: int
    hi: int


def _spectral_second_derivative(f: np.ndarray, h: float) -> np.ndarray:
    k = 2.0 * np.pi * np.fft.fftfreq(f.size, d=h)
    return np.fft.ifft(-(k**2) * np.fft.fft(f)).real


def extract(
    state: WaveState,
    params: gp.PacketParams,
    window: tuple[float, float] | None = None,
    rho_floor_rel: float = RHO_FLOOR,
) -> Extraction:
    rho = state.rho
    x = state.x
    if window is None:
        lo, hi, peak = _density_region(rho, rho_floor_rel)
    else:
        idx = np.flatnonzero((x >= window[0]) & (x <= window[1]))
        if idx.size < 8:
            raise ValueError("window holds fewer than 8 grid points")
        lo, hi = int(idx[0]), int(idx[-1]) + 1
        if np.any(rho[lo:hi] <= rho_floor_rel * rho.max()):
            raise BelowDensityFloor("window reaches below the density floor")
        peak = lo + int(np.argmax(rho[lo:hi]))
    if hi - lo < 8:
        raise BelowDensityFloor("fewer than 8 samples above the density floor")

    phase = np.angle(state.psi[lo:hi])
    unwrapped, bad = _kernels.unwrap_from(phase, peak - lo, MAX_PHASE_JUMP)
    if bad >= 0:
        raise PhaseUnwrapAmbiguity(
            f"phase jump beyond 0.9*pi between x = {x[lo + bad]:g} and the next sample; refine the grid"
        )
    hbar, m = params.hbar, params.m
    S = hbar * unwrapped
    u = gradient(S, state.h) / m
    R = np.sqrt(rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        Q_full = -(hbar**2) / (2.0 * m**2) * _spectral_second_derivative(R, state.h) / R
    profile = FieldProfile(x=x[lo:hi], rho=rho[lo:hi], u=u, Q=Q_full[lo:hi], t=state.t)
    return Extraction(profile=profile, S=S, lo=lo, hi=hi)


def extract_fields(
    state: WaveState,
    params: gp.PacketParams,
    window: tuple[float, float] | None = None,
    rho_floor_rel: float = RHO_FLOOR,
) -> FieldProfile:
    """``rho``, ``u`` and ``Q`` from ``psi`` where the density is above the floor."""
    return extract(state, params, window, rho_floor_rel).profile


@dataclass(frozen=True)
class ErrorReport:
    rho_linf: float
    rho_l2: float
    u_linf: float
    u_l2: float
    Q_linf: float
    Q_l2: float
    norm_drift: float
    meta: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in
               ("rho_linf", "rho_l2", "u_linf", "u_l2", "Q_linf", "Q_l2", "norm_drift")}
        out["meta"] = dict(self.meta)
        return out


def compare_to_analytic(
    state: WaveState,
    params: gp.PacketParams,
    rho_rel: float = 1e-6,
) -> ErrorReport:
    """Field-wise errors against the normalized closed-form packet.

    ``rho`` is compared on the whole grid; ``u`` and ``Q`` on the region where
    ``rho > rho_rel * max(rho)``.  ``Q`` is compared with the 1D Bohm
    potential, which is what extraction from ``psi`` measures.
    """
    x, h, t = state.x, state.h, state.t
    rho = state.rho
    rho_exact = gp.density(params, x, t, normalized=True)
    ext = extract(state, params, rho_floor_rel=rho_rel)
    sl = slice(ext.lo, ext.hi)
    u_err = ext.profile.u - gp.velocity(params, x[sl], t)
    Q_err = ext.profile.Q - gp.quantum_potential(params, x[sl], t, one_dimensional=True)

    def l2(e):
        return float(np.sqrt(np.sum(e**2) * h))

    return ErrorReport(
        rho_linf=float(np.max(np.abs(rho - rho_exact))),
        rho_l2=l2(rho - rho_exact),
        u_linf=float(np.max(np.abs(u_err))),
        u_l2=l2(u_err),
        Q_linf=float(np.max(np.abs(Q_err))),
        Q_l2=l2(Q_err),
        norm_drift=abs(state.norm() - 1.0),
        meta={
            "n": state.n,
            "x_min": state.x_min,
            "x_max": state.x_max,
            "t": t,
            "steps": state.steps,
            "k": params.wavenumber,
            "rho_rel": rho_rel,
            "compare_lo": float(x[ext.lo]),
            "compare_hi": float(x[ext.hi - 1]),
        },
    )


def snapshot_columns(state: WaveState, params: gp.PacketParams) -> dict:
    """Columns ``x, re, im, rho, u, Q``; ``u`` and ``Q`` are NaN below the floor."""
    ext = extract(state, params)
    u = np.full(state.n, np.nan)
    Q = np.full(state.n, np.nan)
    u[ext.lo:ext.hi] = ext.profile.u
    Q[ext.lo:ext.hi] = ext.profile.Q
    return {
        "x": state.x,
        "re": state.psi.real,
        "im": state.psi.imag,
        "rho": state.rho,
        "u": u,
        "Q": Q,
    }
