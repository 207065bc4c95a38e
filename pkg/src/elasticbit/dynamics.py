"""Time-domain integration of the driven two-granule chain.

The drive is the real signal ``force_scale * Re(F_k exp(i w t))`` applied as
a prescribed displacement of the outer contact.  Two force laws are
available: the exact Hertz contact ``k_nl [x + sigma0]_+^{3/2}`` and its
linearization ``k_l x``.  Integration is fixed-step classical RK4 so the
sample grid is deterministic.

Steady amplitudes are recovered by projecting the tail of a trajectory
onto the drive tone, which gives an oracle for the frequency-domain
results that shares no code with them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .exceptions import NonFinite, NotConverged
from .model import SystemParams
from .steadystate import DriveSpec, SteadyAmplitudes

__all__ = [
    "TimeSeries",
    "IntegratorConfig",
    "hertz_force",
    "hertz_energy",
    "default_dt",
    "transient_cut",
    "integrate",
    "extract_steady",
]

LINEAR = 0
NONLINEAR = 1
_MODELS = {"linear": LINEAR, "nonlinear": NONLINEAR}


@dataclass
class TimeSeries:
    """Uniformly sampled trajectory; ``samples`` columns are ``t, u1, v1, u2, v2``."""

    dt: float
    samples: np.ndarray

    @property
    def t(self):
        return self.samples[:, 0]

    @property
    def u1(self):
        return self.samples[:, 1]

    @property
    def v1(self):
        return self.samples[:, 2]

    @property
    def u2(self):
        return self.samples[:, 3]

    @property
    def v2(self):
        return self.samples[:, 4]

    def __len__(self):
        return self.samples.shape[0]


@dataclass(frozen=True)
class IntegratorConfig:
    model: str = "linear"
    dt: float = 0.005
    t_end: float = 100.0
    initial: tuple = field(default=(0.0, 0.0, 0.0, 0.0))
    force_scale: float = 1.0

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {sorted(_MODELS)}, got {self.model!r}")
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.t_end >= self.dt:
            raise ValueError(f"t_end must be >= dt, got t_end={self.t_end}, dt={self.dt}")
        if len(self.initial) != 4:
            raise ValueError("initial state is (u1, v1, u2, v2)")

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.t_end / self.dt + 1e-9))


def hertz_force(x, sigma0, k_nl):
    """Contact force ``k_nl * max(x + sigma0, 0)**1.5``; zero once contact is lost."""
    return k_nl * np.maximum(np.asarray(x, dtype=float) + sigma0, 0.0) ** 1.5


def hertz_energy(p: SystemParams, u1, v1, u2, v2):
    """Kinetic plus contact energy of the undriven chain, relative to rest."""
    if not p.has_hertz:
        raise ValueError("hertz_energy needs k_nl and sigma0")
    c = 0.4 * p.k_nl

    def pot(x):
        return c * np.maximum(np.asarray(x) + p.sigma0, 0.0) ** 2.5

    rest = 3.0 * c * p.sigma0**2.5
    kinetic = 0.5 * p.m * (np.asarray(v1) ** 2 + np.asarray(v2) ** 2)
    return kinetic + pot(-np.asarray(u1)) + pot(np.asarray(u1) - u2) + pot(u2) - rest


def default_dt(omega_d):
    return min(0.005, 2.0 * math.pi / omega_d / 200.0)


def transient_cut(p: SystemParams, decay=1e3):
    """Time after which a free transient has decayed by ``decay``."""
    if not p.eta > 0:
        return math.inf
    return 2.0 * p.m / p.eta * math.log(decay)


@numba.njit(cache=True)
def _accel(model, y, t, prm, out):
    m, k, eta, knl, s0, w, f1r, f1i, f2r, f2i = (
        prm[0], prm[1], prm[2], prm[3], prm[4], prm[5], prm[6], prm[7], prm[8], prm[9],
    )
    c = math.cos(w * t)
    s = math.sin(w * t)
    r1 = f1r * c - f1i * s
    r2 = f2r * c - f2i * s
    u1, v1, u2, v2 = y[0], y[1], y[2], y[3]
    if model == 0:
        fl = k * (r1 - u1)
        fm = k * (u1 - u2)
        fr = k * (u2 - r2)
    else:
        fl = knl * max(r1 - u1 + s0, 0.0) ** 1.5
        fm = knl * max(u1 - u2 + s0, 0.0) ** 1.5
        fr = knl * max(u2 - r2 + s0, 0.0) ** 1.5
    out[0] = v1
    out[1] = (fl - fm - eta * v1) / m
    out[2] = v2
    out[3] = (-fr + fm - eta * v2) / m


@numba.njit(cache=True)
def _rk4(model, y0, dt, n_steps, prm):
    out = np.empty((n_steps + 1, 5))
    y = y0.copy()
    k1 = np.empty(4)
    k2 = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    tmp = np.empty(4)
    out[0, 0] = 0.0
    out[0, 1:] = y
    for n in range(n_steps):
        t = n * dt
        _accel(model, y, t, prm, k1)
        for i in range(4):
            tmp[i] = y[i] + 0.5 * dt * k1[i]
        _accel(model, tmp, t + 0.5 * dt, prm, k2)
        for i in range(4):
            tmp[i] = y[i] + 0.5 * dt * k2[i]
        _accel(model, tmp, t + 0.5 * dt, prm, k3)
        for i in range(4):
            tmp[i] = y[i] + dt * k3[i]
        _accel(model, tmp, t + dt, prm, k4)
        bad = False
        for i in range(4):
            y[i] += dt * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0
            if not math.isfinite(y[i]):
                bad = True
        out[n + 1, 0] = (n + 1) * dt
        out[n + 1, 1:] = y
        if bad:
            return out, n + 1
    return out, -1


def integrate(p: SystemParams, drive: DriveSpec, cfg: IntegratorConfig) -> TimeSeries:
    """Integrate the chain from ``cfg.initial`` up to ``cfg.t_end``.

    Returns ``floor(t_end / dt) + 1`` samples starting at ``t = 0``.

    Raises
    ------
    NonFinite
        If the state overflows; the message gives the first bad time.
    """
    model = _MODELS[cfg.model]
    if model == NONLINEAR and not p.has_hertz:
        raise ValueError("nonlinear model needs k_nl and sigma0 in SystemParams")
    f1, f2 = drive.forces
    f1, f2 = cfg.force_scale * f1, cfg.force_scale * f2
    prm = np.array(
        [
            p.m, p.k_l, p.eta,
            p.k_nl or 0.0, p.sigma0 or 0.0,
            drive.omega_d, f1.real, f1.imag, f2.real, f2.imag,
        ],
        dtype=float,
    )
    y0 = np.asarray(cfg.initial, dtype=float)
    samples, bad = _rk4(model, y0, float(cfg.dt), cfg.n_steps, prm)
    if bad >= 0:
        t_bad = bad * cfg.dt
        raise NonFinite(f"non-finite state at t={t_bad:.6g}", t=t_bad)
    return TimeSeries(cfg.dt, samples)


def _project(t, u, omega_d):
    # least-squares fit of offset + tone; equals the Fourier projection on whole periods
    basis = np.column_stack([np.ones_like(t), np.cos(omega_d * t), np.sin(omega_d * t)])
    coef, *_ = np.linalg.lstsq(basis, u, rcond=None)
    return complex(coef[1], -coef[2])


def _tail_amplitudes(ts: TimeSeries, omega_d, n_cycles):
    t_start = ts.t[-1] - n_cycles * 2.0 * math.pi / omega_d
    sel = ts.t >= t_start - 1e-12
    t = ts.t[sel]
    return np.array([_project(t, ts.u1[sel], omega_d), _project(t, ts.u2[sel], omega_d)])


def extract_steady(ts: TimeSeries, omega_d, n_cycles=20, rtol=1e-3, t_min=0.0) -> SteadyAmplitudes:
    """Complex amplitudes of both granules at the drive tone.

    The final ``n_cycles`` drive periods are projected onto
    ``exp(i omega_d t)``; the same is done with one extra period, and if
    the two disagree by more than ``rtol`` (relative to the larger
    amplitude) the series is judged not yet steady.

    Raises
    ------
    NotConverged
        With the measured relative drift.
    """
    if n_cycles < 5:
        raise ValueError(f"n_cycles must be >= 5, got {n_cycles}")
    period = 2.0 * math.pi / omega_d
    if ts.t[-1] - (n_cycles + 1) * period < t_min - 1e-12:
        raise ValueError(
            f"series too short: need {n_cycles + 1} periods after t={t_min:g}, "
            f"ends at t={ts.t[-1]:g}"
        )
    amps = _tail_amplitudes(ts, omega_d, n_cycles)
    check = _tail_amplitudes(ts, omega_d, n_cycles + 1)
    scale = np.max(np.abs(amps))
    drift = float(np.max(np.abs(amps - check)) / scale) if scale > 0 else 0.0
    if drift > rtol:
        raise NotConverged(f"steady amplitudes drift by {drift:.3g} (> {rtol:g})", drift=drift)
    return SteadyAmplitudes(complex(amps[0]), complex(amps[1]))
