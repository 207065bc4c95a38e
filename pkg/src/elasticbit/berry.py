"""Berry phase of the elastic bit over closed loops of the driver phase.

For fixed ``(omega_d, eps)`` the phase offset ``delta`` is stepped through
``N`` points spanning (-pi, pi].  The steady modal states along the loop
keep a constant polar angle while the azimuth winds once, and the loop
phase is accumulated from nearest-neighbour overlaps (a Wilson loop):

    gamma_N = -sum_j arg <psi_j | psi_{j+1}>,   indices mod N

which is gauge invariant and converges to the closed form
``-(1/2) dphi (1 - cos theta)``.  Reported phases are principal values.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .angles import TWO_PI, wrap
from .exceptions import ElasticBitError
from .model import EigenPair, SystemParams, eigenfrequencies
from .steadystate import (
    POLE_TOL,
    SQRT2,
    ModalState,
    _check_not_singular,
    _solve,
    drive_amplitudes,
)

__all__ = [
    "LoopSpec",
    "BerryLoopResult",
    "SweepResult",
    "berry_connection",
    "loop_deltas",
    "loop_states",
    "wilson_phase",
    "berry_phase_loop",
    "berry_phase_analytic",
    "loop_phase_profile",
    "berry_sweep",
    "transition_eps",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoopSpec:
    eps: float
    omega_d: float
    n_steps: int = 4096

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps}")
        if not self.omega_d > 0:
            raise ValueError(f"omega_d must be > 0, got {self.omega_d}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 8:
            raise ValueError(f"n_steps must be an integer >= 8, got {self.n_steps}")


@dataclass(frozen=True)
class BerryLoopResult:
    gamma_discrete: float
    gamma_analytic: float
    theta: float
    winding: int
    n_steps: int


def berry_connection(s0: ModalState, s1: ModalState) -> complex:
    """Overlap ``<s0|s1> = conj(alpha0) alpha1 + conj(beta0) beta1``."""
    return complex(np.conj(s0.alpha) * s1.alpha + np.conj(s0.beta) * s1.beta)


def loop_deltas(n_steps):
    """``n_steps`` equally spaced phase offsets ending at pi; -pi is identified with pi."""
    return -math.pi + TWO_PI * np.arange(1, n_steps + 1) / n_steps


def loop_states(p: SystemParams, omega_d, eps, deltas):
    """Normalized modal states on a ``(eps, delta)`` grid.

    ``eps`` may be an array; the result has shape ``eps.shape + deltas.shape + (2,)``.
    No gauge is fixed: each state carries whatever phase the steady
    response gives it.
    """
    _check_not_singular(p, omega_d)
    eps = np.asarray(eps, dtype=float)
    f1, f2 = drive_amplitudes(eps[..., None], np.asarray(deltas, dtype=float))
    a1, a2 = _solve(p, f1, f2, omega_d)
    psi = np.stack([(a1 + a2) / SQRT2, (a1 - a2) / SQRT2], axis=-1)
    norm = np.linalg.norm(psi, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise ElasticBitError("zero modal state on loop")
    return psi / norm


def wilson_phase(psi):
    """Discrete loop phase of an ordered cycle of states (last axis = components)."""
    overlaps = np.sum(np.conj(psi) * np.roll(psi, -1, axis=-2), axis=-1)
    return wrap(-np.sum(np.angle(overlaps), axis=-1))


def _theta_phi(psi):
    ra, rb = np.abs(psi[..., 0]), np.abs(psi[..., 1])
    theta = 2.0 * np.arctan2(rb, ra)
    phi = np.angle(psi[..., 1]) - np.angle(psi[..., 0])
    pole = (theta < POLE_TOL) | (np.pi - theta < POLE_TOL)
    return theta, np.where(pole, 0.0, phi)


def _winding(phi):
    steps = np.diff(phi, axis=-1, append=phi[..., :1])
    return np.rint(np.sum(wrap(steps), axis=-1) / TWO_PI).astype(int)


def berry_phase_analytic(theta, dphi):
    """Closed-form loop phase ``wrap(-dphi (1 - cos theta) / 2)``."""
    if np.any(np.asarray(theta) < 0) or np.any(np.asarray(theta) > math.pi):
        raise ValueError("theta must lie in [0, pi]")
    return wrap(-0.5 * np.asarray(dphi) * (1.0 - np.cos(theta)))


def berry_phase_loop(p: SystemParams, loop: LoopSpec) -> BerryLoopResult:
    """Discrete and closed-form Berry phase for one ``delta`` loop."""
    psi = loop_states(p, loop.omega_d, loop.eps, loop_deltas(loop.n_steps))
    theta, phi = _theta_phi(psi)
    winding = int(_winding(phi))
    th = float(theta[0])
    return BerryLoopResult(
        gamma_discrete=float(wilson_phase(psi)),
        gamma_analytic=float(berry_phase_analytic(th, TWO_PI * winding)),
        theta=th,
        winding=winding,
        n_steps=int(loop.n_steps),
    )


def loop_phase_profile(p: SystemParams, omega_d, eps_grid, n_steps=512):
    """Discrete ``|gamma|`` for many mixing ratios at one frequency (vectorized)."""
    eps_grid = np.atleast_1d(np.asarray(eps_grid, dtype=float))
    psi = loop_states(p, omega_d, eps_grid, loop_deltas(n_steps))
    return np.abs(wilson_phase(psi))


@dataclass
class SweepResult:
    """Berry phase surface; ``gamma_abs[i, j]`` belongs to ``(omegas[i], eps[j])``.

    Cells that could not be evaluated hold NaN and a message in ``errors``.
    """

    omegas: np.ndarray
    eps: np.ndarray
    gamma_abs: np.ndarray
    errors: dict

    def rows(self):
        for i, w in enumerate(self.omegas):
            for j, e in enumerate(self.eps):
                yield float(w), float(e), float(self.gamma_abs[i, j])


def _sweep_row(args):
    p, omega, eps, n_steps = args
    try:
        return loop_phase_profile(p, omega, eps, n_steps), None
    except ElasticBitError as exc:
        return np.full(len(eps), np.nan), str(exc)


def berry_sweep(p: SystemParams, omegas, eps_grid, n_steps=512, jobs=1) -> SweepResult:
    """Evaluate ``|gamma|`` on an ``omega x eps`` grid.

    Frequencies must lie strictly between the two eigenfrequencies.
    Failing rows are recorded as NaN instead of aborting.  ``jobs > 1``
    evaluates rows in a process pool; the output order never depends on
    the worker count.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    eps = np.atleast_1d(np.asarray(eps_grid, dtype=float))
    if omegas.size == 0 or eps.size == 0:
        raise ValueError("sweep grids must be nonempty")
    eig = eigenfrequencies(p)
    bad = omegas[(omegas <= eig.omega01) | (omegas >= eig.omega02)]
    if bad.size:
        raise ValueError(
            f"sweep frequencies must lie in ({eig.omega01}, {eig.omega02}); got {bad.tolist()}"
        )
    if np.any((eps < 0) | (eps > 1)):
        raise ValueError("eps grid must lie in [0, 1]")
    tasks = [(p, float(w), eps, int(n_steps)) for w in omegas]
    jobs = jobs or os.cpu_count() or 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_sweep_row, tasks))
    else:
        results = [_sweep_row(t) for t in tasks]
    surface = np.vstack([r[0] for r in results])
    errors = {}
    for i, (_, msg) in enumerate(results):
        if msg is not None:
            log.warning("sweep row omega=%g failed: %s", omegas[i], msg)
            for j in range(eps.size):
                errors[(i, j)] = msg
    return SweepResult(omegas, eps, surface, errors)


def transition_eps(omega_d, eig: EigenPair):
    """Mixing ratio at which the loop phase reaches pi (small-damping limit).

    ``(w^2 - w01^2) / (w02^2 - w01^2)``; for ``k_l = m`` this is the familiar
    ``(2 w^2 + w01^2 - w02^2) / 4``.
    """
    if not eig.omega01 < omega_d < eig.omega02:
        raise ValueError(
            f"omega_d must lie strictly between {eig.omega01} and {eig.omega02}, got {omega_d}"
        )
    lo, hi = eig.omega01**2, eig.omega02**2
    return (omega_d**2 - lo) / (hi - lo)
