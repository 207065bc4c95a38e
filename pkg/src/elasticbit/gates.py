"""Quantum-analog single elastic-bit gates.

Gate matrices act on the granule displacement vector ``(u1, u2)``.  The
eigenvectors ``E1 = (1, 1)/sqrt(2)`` and ``E2 = (1, -1)/sqrt(2)`` are the
computational basis, so in this representation the bit flip is
``diag(1, -1)`` and the phase flip is the swap matrix.  ``V`` (the
Hadamard matrix, self-inverse) converts between displacement and modal
coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .model import SystemParams
from .steadystate import ModalState, bloch_angles, drive_for_bloch

__all__ = [
    "V",
    "GateKind",
    "PhaseShift",
    "gate_matrix",
    "modal_matrix",
    "is_unitary",
    "apply_gate",
    "gate_as_drive",
]

V = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class PhaseShift:
    """Relative phase ``phi0`` added between E1 and E2."""

    phi0: float

    def __post_init__(self):
        if not -math.pi < self.phi0 <= math.pi:
            raise ValueError(f"phase shift must lie in (-pi, pi], got {self.phi0}")


GateKind = Union[str, PhaseShift]

_FIXED = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[1, 0], [0, -1]], dtype=complex),
    "Y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "Z": np.array([[0, 1], [1, 0]], dtype=complex),
    "H": V.copy(),
}
_PHASE_ALIASES = {"S": math.pi / 2.0, "T": math.pi / 4.0}


def gate_matrix(gate: GateKind) -> np.ndarray:
    """Unitary of ``gate`` in the displacement basis.

    ``gate`` is one of ``"I", "X", "Y", "Z", "H", "S", "T"`` or a
    :class:`PhaseShift`.  S and T are ``PhaseShift(pi/2)`` and
    ``PhaseShift(pi/4)``, built as ``V diag(1, e^{i phi0}) V``.
    """
    if isinstance(gate, PhaseShift):
        phi0 = gate.phi0
    else:
        key = str(gate).upper()
        if key in _FIXED:
            return _FIXED[key].copy()
        if key not in _PHASE_ALIASES:
            raise ValueError(f"unknown gate {gate!r}")
        phi0 = _PHASE_ALIASES[key]
    return V @ np.diag([1.0, np.exp(1j * phi0)]) @ V


def modal_matrix(gate: GateKind) -> np.ndarray:
    """Unitary of ``gate`` acting on modal coefficients ``(alpha, beta)``."""
    return V @ gate_matrix(gate) @ V


def is_unitary(u, atol=1e-12) -> bool:
    u = np.asarray(u)
    return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=atol))


def apply_gate(gate: GateKind, state: ModalState) -> ModalState:
    """Act with ``gate`` on a modal state; the result is renormalized."""
    out = modal_matrix(gate) @ state.vector
    norm = float(np.linalg.norm(out))
    out = out / norm
    return ModalState(complex(out[0]), complex(out[1]), state.norm)


def gate_as_drive(gate: GateKind, state: ModalState, p: SystemParams, omega_d):
    """Driver settings ``(eps, delta)`` that produce the post-gate state at ``omega_d``."""
    if not p.eta > 0:
        raise ValueError("gate realization needs eta > 0")
    return drive_for_bloch(bloch_angles(apply_gate(gate, state)), p, omega_d)
