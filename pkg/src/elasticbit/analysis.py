"""Granule-level diagnostics that track the loop phase.

Amplitude localization, mass-mass and mass-driver phase differences,
and a three-way zone label relative to the transition mixing ratio.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .angles import wrap
from .berry import transition_eps
from .exceptions import UndefinedPhase
from .model import SystemParams, eigenfrequencies
from .steadystate import (
    DriveSpec,
    SteadyAmplitudes,
    _check_not_singular,
    _solve,
    drive_amplitudes,
    steady_amplitudes,
)

__all__ = [
    "PhasePair",
    "Zone",
    "DEFAULT_ZONE_TOL",
    "mass_amplitude_curves",
    "phase_differences",
    "response_table",
    "classify_zone",
]

DEFAULT_ZONE_TOL = 0.01
# relative magnitude below which a phasor is treated as zero
_ZERO_REL = 1e-12


@dataclass(frozen=True)
class PhasePair:
    phi_m1_m2: float
    phi_m1_d1: float


class Zone(enum.Enum):
    BELOW = "BelowTransition"
    TRANSITION = "Transition"
    ABOVE = "AboveTransition"


def _arg(z, scale, what):
    if abs(z) <= _ZERO_REL * scale:
        raise UndefinedPhase(f"phase of {what} is undefined: magnitude {abs(z):.3g} is zero")
    return float(np.angle(z))


def mass_amplitude_curves(p: SystemParams, omega_d, eps, deltas) -> np.ndarray:
    """Rows ``(delta, |A1|, |A2|)`` for every phase offset in ``deltas``."""
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    if deltas.size == 0:
        raise ValueError("delta grid must be nonempty")
    _check_not_singular(p, omega_d)
    f1, f2 = drive_amplitudes(eps, deltas)
    a1, a2 = _solve(p, f1, f2, omega_d)
    return np.column_stack([deltas, np.abs(a1), np.abs(a2)])


def phase_differences(amps: SteadyAmplitudes, f1: complex) -> PhasePair:
    """Principal-value phase of mass 1 relative to mass 2 and to driver 1.

    Raises
    ------
    UndefinedPhase
        If ``A1``, ``A2`` or ``F1`` vanishes.
    """
    scale = max(abs(amps.a1), abs(amps.a2))
    arg1 = _arg(amps.a1, scale, "A1")
    arg2 = _arg(amps.a2, scale, "A2")
    argf = _arg(f1, max(abs(f1), 1.0), "F1")
    return PhasePair(wrap(arg1 - arg2), wrap(arg1 - argf))


def response_table(p: SystemParams, omega_d, eps, deltas) -> np.ndarray:
    """Rows ``(delta, |A1|, |A2|, phi_m1_m2, phi_m1_d1)``.

    Undefined phases (a vanishing phasor) are reported as NaN.
    """
    out = []
    for row in mass_amplitude_curves(p, omega_d, eps, deltas):
        delta = float(row[0])
        f1, f2 = drive_amplitudes(eps, delta)
        a1, a2 = _solve(p, f1, f2, omega_d)
        amps = SteadyAmplitudes(complex(a1), complex(a2))
        scale = max(abs(a1), abs(a2))
        try:
            mm = wrap(_arg(a1, scale, "A1") - _arg(a2, scale, "A2"))
        except UndefinedPhase:
            mm = math.nan
        try:
            md = phase_differences(amps, f1).phi_m1_d1
        except UndefinedPhase:
            md = math.nan
        out.append((delta, row[1], row[2], mm, md))
    return np.array(out, dtype=float).reshape(-1, 5)


def classify_zone(p: SystemParams, omega_d, eps, tol=DEFAULT_ZONE_TOL) -> Zone:
    """Zone of ``eps`` relative to the transition ratio at ``omega_d``.

    Above the transition the two granules move in phase at ``delta = -pi``;
    below it they move out of phase.  Within ``tol`` of the transition, or
    whenever the phase evidence disagrees with the side of the transition,
    the label is ``Zone.TRANSITION``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    eig = eigenfrequencies(p)
    eps_star = transition_eps(omega_d, eig)
    try:
        a = steady_amplitudes(p, DriveSpec(eps, -math.pi, omega_d))
        scale = max(abs(a.a1), abs(a.a2))
        endpoint = abs(wrap(_arg(a.a1, scale, "A1") - _arg(a.a2, scale, "A2")))
    except UndefinedPhase:
        return Zone.TRANSITION
    if eps > eps_star + tol and endpoint < math.pi / 2:
        return Zone.ABOVE
    if eps < eps_star - tol and endpoint > math.pi / 2:
        return Zone.BELOW
    return Zone.TRANSITION
