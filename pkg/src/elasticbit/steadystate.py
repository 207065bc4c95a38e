"""Frequency-domain response of the driven linearized system.

Pipeline: driver settings ``(eps, delta, omega_d)`` -> complex force
amplitudes ``F1, F2`` -> complex granule amplitudes ``A1, A2`` -> normalized
modal coefficients ``(alpha, beta)`` over the in-phase / out-of-phase
eigenvectors ``E1 = (1, 1)/sqrt(2)``, ``E2 = (1, -1)/sqrt(2)`` -> Bloch
angles ``(theta, phi)``.

The azimuth is ``phi = arg(beta) - arg(alpha)``, so the state is
``cos(theta/2) |E1> + exp(i phi) sin(theta/2) |E2>`` up to global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import wrap
from .exceptions import SingularDrive, ZeroState
from .model import SystemParams, eigenfrequencies

__all__ = [
    "DriveSpec",
    "SteadyAmplitudes",
    "ModalState",
    "BlochAngles",
    "POLE_TOL",
    "drive_amplitudes",
    "steady_amplitudes",
    "amplitude_residual",
    "modal_coefficients",
    "bloch_angles",
    "state_from_angles",
    "bloch_state",
    "drive_for_bloch",
]

SQRT2 = math.sqrt(2.0)
# theta closer than this to 0 or pi is treated as a pole (phi := 0)
POLE_TOL = 1e-12


@dataclass(frozen=True)
class DriveSpec:
    """Driver triple: mixing ratio ``eps``, phase offset ``delta``, frequency."""

    eps: float
    delta: float
    omega_d: float

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps}")
        if not -math.pi <= self.delta <= math.pi:
            raise ValueError(f"delta must lie in [-pi, pi], got {self.delta}")
        if not self.omega_d > 0:
            raise ValueError(f"omega_d must be > 0, got {self.omega_d}")

    @property
    def forces(self):
        return drive_amplitudes(self.eps, self.delta)


@dataclass(frozen=True)
class SteadyAmplitudes:
    a1: complex
    a2: complex


@dataclass(frozen=True)
class ModalState:
    """Normalized coefficients on ``E1`` (alpha) and ``E2`` (beta).

    ``norm`` keeps the magnitude before normalization, so
    ``norm * (alpha, beta)`` recovers the raw modal projections.
    """

    alpha: complex
    beta: complex
    norm: float = 1.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float


def drive_amplitudes(eps, delta):
    """Complex force amplitudes ``F1 = eps + (1-eps) e^{i delta}``, ``F2 = eps - (1-eps) e^{i delta}``."""
    rot = (1.0 - eps) * np.exp(1j * np.asarray(delta))
    f1, f2 = eps + rot, eps - rot
    if np.ndim(f1) == 0:
        return complex(f1), complex(f2)
    return f1, f2


def _check_not_singular(p: SystemParams, omega_d):
    if p.eta == 0:
        eig = eigenfrequencies(p)
        for w0 in (eig.omega01, eig.omega02):
            if math.isclose(omega_d, w0, rel_tol=1e-12):
                raise SingularDrive(
                    f"undamped drive at eigenfrequency omega_d={omega_d!r}; "
                    "set eta > 0 or move omega_d off resonance"
                )


def _solve(p: SystemParams, f1, f2, omega_d):
    # closed-form solution of the 2x2 complex system, broadcasting over arrays
    d = -p.m * omega_d**2 + 2.0 * p.k_l + 1j * p.eta * omega_d
    den = d * d - p.k_l**2
    if np.any(den == 0):
        raise SingularDrive(f"vanishing response denominator at omega_d={omega_d!r}")
    a1 = (f1 * p.k_l * d + f2 * p.k_l**2) / den
    a2 = (f1 * p.k_l**2 + f2 * p.k_l * d) / den
    return a1, a2


def steady_amplitudes(p: SystemParams, drive: DriveSpec) -> SteadyAmplitudes:
    """Complex steady-state displacement amplitudes of both granules.

    Raises
    ------
    SingularDrive
        If ``eta == 0`` and ``omega_d`` is an eigenfrequency.
    """
    _check_not_singular(p, drive.omega_d)
    f1, f2 = drive.forces
    a1, a2 = _solve(p, f1, f2, drive.omega_d)
    return SteadyAmplitudes(complex(a1), complex(a2))


def amplitude_residual(p: SystemParams, drive: DriveSpec, amps: SteadyAmplitudes):
    """Relative residual of the two simultaneous amplitude equations."""
    f1, f2 = drive.forces
    w = drive.omega_d
    d = -p.m * w**2 + 2.0 * p.k_l + 1j * p.eta * w
    r1 = d * amps.a1 - p.k_l * amps.a2 - p.k_l * f1
    r2 = -p.k_l * amps.a1 + d * amps.a2 - p.k_l * f2
    scale = max(abs(amps.a1), abs(amps.a2), 1.0)
    return max(abs(r1), abs(r2)) / scale


def modal_coefficients(amps: SteadyAmplitudes) -> ModalState:
    """Project amplitudes on the eigenvectors and normalize.

    Raises
    ------
    ZeroState
        If both amplitudes are zero.
    """
    alpha = (amps.a1 + amps.a2) / SQRT2
    beta = (amps.a1 - amps.a2) / SQRT2
    norm = math.hypot(abs(alpha), abs(beta))
    if norm == 0 or not math.isfinite(norm):
        raise ZeroState("cannot normalize: both granule amplitudes are zero")
    return ModalState(alpha / norm, beta / norm, norm)


def bloch_angles(state: ModalState) -> BlochAngles:
    """Polar and azimuthal angle of a modal state.

    ``theta = 2 acos|alpha|`` evaluated as ``2 atan2(|beta|, |alpha|)``
    for accuracy near the poles.
    """
    ra, rb = abs(state.alpha), abs(state.beta)
    theta = 2.0 * math.atan2(rb, ra)
    if theta < POLE_TOL or math.pi - theta < POLE_TOL:
        phi = 0.0
    else:
        phi = wrap(np.angle(state.beta) - np.angle(state.alpha))
    return BlochAngles(theta, phi)


def state_from_angles(theta, phi) -> ModalState:
    """Canonical state ``(cos(theta/2), e^{i phi} sin(theta/2))``."""
    return ModalState(
        complex(math.cos(theta / 2.0)),
        complex(np.exp(1j * phi) * math.sin(theta / 2.0)),
    )


def bloch_state(p: SystemParams, drive: DriveSpec):
    """Full forward map; returns ``(ModalState, BlochAngles)``."""
    state = modal_coefficients(steady_amplitudes(p, drive))
    return state, bloch_angles(state)


def drive_for_bloch(angles: BlochAngles, p: SystemParams, omega_d):
    """Driver settings ``(eps, delta)`` that realize the given Bloch angles.

    Inverts the forward map in closed form using the modal response
    factors ``d1 = -m w^2 + k + i eta w`` and ``d2 = -m w^2 + 3k + i eta w``.
    At ``theta = 0`` the convention ``(1, 0)`` is returned.
    """
    if not omega_d > 0 or not math.isfinite(omega_d):
        raise ValueError(f"omega_d must be finite and > 0, got {omega_d}")
    _check_not_singular(p, omega_d)
    theta, phi = angles.theta, angles.phi
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    d1 = -p.m * omega_d**2 + p.k_l + 1j * p.eta * omega_d
    d2 = -p.m * omega_d**2 + 3.0 * p.k_l + 1j * p.eta * omega_d
    if theta < POLE_TOL:
        return 1.0, 0.0
    offset = np.angle(d2) - np.angle(d1)
    if math.pi - theta < POLE_TOL:
        return 0.0, wrap(offset)
    q = abs(d1) / abs(d2)
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    eps = q * c / (q * c + s)
    return eps, wrap(phi + offset)
