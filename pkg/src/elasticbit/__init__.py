"""Classical elastic bit: a harmonically driven pair of Hertzian granules.

The in-phase and out-of-phase modes of the linearized pair play the role
of a qubit basis.  The package computes steady-state responses, Bloch
angles, quantum-analog gate actions, and the Berry phase of closed loops
in driver space, with a time-domain integrator as an independent check.
"""

from .analysis import Zone, classify_zone, mass_amplitude_curves, phase_differences
from .berry import (
    BerryLoopResult,
    LoopSpec,
    berry_connection,
    berry_phase_analytic,
    berry_phase_loop,
    berry_sweep,
    transition_eps,
)
from .dynamics import IntegratorConfig, TimeSeries, extract_steady, hertz_force, integrate
from .estimators import BerryPhaseTransformer, ElasticBit
from .exceptions import (
    ElasticBitError,
    NonFinite,
    NotConverged,
    SingularDrive,
    UndefinedPhase,
    ZeroState,
)
from .gates import PhaseShift, apply_gate, gate_as_drive, gate_matrix
from .model import (
    EigenPair,
    LinearizedStiffness,
    MaterialSpec,
    SystemParams,
    eigenfrequencies,
    hertz_params,
    linearize,
    stiffness_matrix,
)
from .steadystate import (
    BlochAngles,
    DriveSpec,
    ModalState,
    SteadyAmplitudes,
    bloch_angles,
    bloch_state,
    drive_amplitudes,
    drive_for_bloch,
    modal_coefficients,
    steady_amplitudes,
)

__version__ = "0.1.0"
