import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elasticbit.angles import circular_distance, winding_number, wrap
from elasticbit.exceptions import SingularDrive, ZeroState
from elasticbit.model import SystemParams, eigenfrequencies
from elasticbit.steadystate import (
    BlochAngles,
    DriveSpec,
    ModalState,
    SteadyAmplitudes,
    amplitude_residual,
    bloch_angles,
    bloch_state,
    drive_amplitudes,
    drive_for_bloch,
    modal_coefficients,
    state_from_angles,
    steady_amplitudes,
)

SQRT2 = math.sqrt(2.0)


def solve_direct(p, drive):
    """Independent route: numerical solve of the 2x2 complex amplitude system."""
    f1, f2 = drive.forces
    w = drive.omega_d
    d = -p.m * w**2 + 2 * p.k_l + 1j * p.eta * w
    K = np.array([[d, -p.k_l], [-p.k_l, d]])
    return np.linalg.solve(K, p.k_l * np.array([f1, f2]))


def test_wrap_half_open():
    assert wrap(math.pi) == pytest.approx(math.pi)
    assert wrap(-math.pi) == pytest.approx(math.pi)
    assert wrap(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    np.testing.assert_allclose(wrap(np.array([0.0, 2 * math.pi, -0.1])), [0.0, 0.0, -0.1], atol=1e-15)


def test_winding_number_of_circle():
    ph = np.linspace(-math.pi, math.pi, 50, endpoint=False)
    assert winding_number(ph) == pytest.approx(1.0)
    assert winding_number(-ph) == pytest.approx(-1.0)


@pytest.mark.parametrize(
    "eps,delta,expected",
    [
        (1.0, 0.7, (1.0, 1.0)),
        (0.5, 0.0, (1.0, 0.0)),
        (0.5, math.pi, (0.0, 1.0)),
    ],
)
def test_drive_amplitudes_examples(eps, delta, expected):
    f1, f2 = drive_amplitudes(eps, delta)
    assert f1 == pytest.approx(expected[0], abs=1e-15)
    assert f2 == pytest.approx(expected[1], abs=1e-15)


@given(st.floats(0, 1), st.floats(-math.pi, math.pi))
def test_drive_amplitude_sum_and_difference(eps, delta):
    f1, f2 = drive_amplitudes(eps, delta)
    assert abs((f1 + f2) - 2 * eps) < 1e-15
    assert abs((f1 - f2) - 2 * (1 - eps) * np.exp(1j * delta)) < 1e-15


def test_drivespec_validation():
    with pytest.raises(ValueError):
        DriveSpec(1.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        DriveSpec(0.5, 4.0, 1.0)
    with pytest.raises(ValueError):
        DriveSpec(0.5, 0.0, 0.0)


def test_localized_amplitudes(params):
    a = steady_amplitudes(params, DriveSpec(0.5, math.pi, SQRT2))
    assert a.a1 == pytest.approx(-0.999982, abs=1e-6)
    assert a.a2 == pytest.approx(-0.0042425j, abs=1e-7)
    assert abs(a.a2) / abs(a.a1) == pytest.approx(0.00424, abs=1e-5)
    b = steady_amplitudes(params, DriveSpec(0.5, 0.0, SQRT2))
    assert abs(b.a1) == pytest.approx(0.00424, abs=1e-5)
    assert abs(b.a2) == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("delta", [-math.pi, -1.0, 0.0, 2.5])
@pytest.mark.parametrize("omega", [0.3, 1.0, SQRT2, 2.2])
def test_equal_forces_give_equal_amplitudes(params, delta, omega):
    a = steady_amplitudes(params, DriveSpec(1.0, delta, omega))
    assert a.a1 == a.a2


def test_matches_direct_solve_and_residual(params, rng):
    for _ in range(10_000):
        p = SystemParams(m=rng.uniform(0.2, 5), k_l=rng.uniform(0.2, 5), eta=rng.uniform(1e-4, 0.5))
        d = DriveSpec(rng.uniform(0, 1), rng.uniform(-math.pi, math.pi), rng.uniform(0.05, 6))
        a = steady_amplitudes(p, d)
        assert amplitude_residual(p, d, a) < 1e-10
    ref = solve_direct(p, d)
    np.testing.assert_allclose([a.a1, a.a2], ref, rtol=1e-10)


def test_singular_drive():
    p = SystemParams(eta=0.0)
    eig = eigenfrequencies(p)
    for w in (eig.omega01, eig.omega02):
        with pytest.raises(SingularDrive):
            steady_amplitudes(p, DriveSpec(0.5, 0.0, w))
    steady_amplitudes(p, DriveSpec(0.5, 0.0, 1.2))


def test_modal_pure_states():
    c = 0.3 - 0.4j
    s = modal_coefficients(SteadyAmplitudes(c, c))
    assert s.alpha == pytest.approx(c / abs(c))
    assert s.beta == 0
    assert bloch_angles(s).theta == 0
    s = modal_coefficients(SteadyAmplitudes(c, -c))
    assert s.alpha == 0
    assert s.beta == pytest.approx(c / abs(c))
    assert bloch_angles(s).theta == pytest.approx(math.pi, abs=1e-15)


def test_modal_zero_state():
    with pytest.raises(ZeroState):
        modal_coefficients(SteadyAmplitudes(0j, 0j))


def test_modal_norm_reconstructs_projection(params):
    a = steady_amplitudes(params, DriveSpec(0.3, 1.1, 1.25))
    s = modal_coefficients(a)
    np.testing.assert_allclose(
        s.norm * s.vector, [(a.a1 + a.a2) / SQRT2, (a.a1 - a.a2) / SQRT2], rtol=1e-12
    )


def test_modal_equal_superposition_at_mid_band(params):
    s = modal_coefficients(steady_amplitudes(params, DriveSpec(0.5, math.pi, SQRT2)))
    assert abs(s.alpha) == pytest.approx(1 / SQRT2, abs=1e-9)
    assert abs(s.beta) == pytest.approx(1 / SQRT2, abs=1e-9)


def test_bloch_angles_examples(params):
    assert bloch_angles(ModalState(1, 0)) == BlochAngles(0.0, 0.0)
    ang = bloch_angles(ModalState(1 / SQRT2, 1j / SQRT2))
    assert ang.theta == pytest.approx(math.pi / 2, abs=1e-15)
    assert ang.phi == pytest.approx(math.pi / 2, abs=1e-15)
    _, ang = bloch_state(params, DriveSpec(0.5, 0.0, SQRT2))
    assert ang.theta == pytest.approx(math.pi / 2, abs=1e-9)
    offset = 2 * math.atan(params.eta * SQRT2)
    assert circular_distance(ang.phi, math.pi - offset) < 1e-4
    assert offset == pytest.approx(0.00849, abs=1e-5)


def test_bloch_pole_sets_phi_zero():
    s = ModalState(0j, np.exp(0.7j))
    assert bloch_angles(s) == BlochAngles(math.pi, 0.0)


@settings(max_examples=200)
@given(st.floats(0, 1), st.floats(-math.pi, math.pi), st.floats(0.1, 3.0))
def test_normalization(eps, delta, omega):
    s, _ = bloch_state(SystemParams(), DriveSpec(eps, delta, omega))
    assert abs(abs(s.alpha) ** 2 + abs(s.beta) ** 2 - 1) < 1e-12


@pytest.mark.parametrize("eps", [0.0, 0.1, 0.5, 0.77, 1.0])
@pytest.mark.parametrize("omega", [0.5, 1.2, SQRT2, 1.6, 2.5])
def test_theta_independent_of_delta(params, eps, omega):
    thetas = [
        bloch_state(params, DriveSpec(eps, d, omega))[1].theta
        for d in np.linspace(-math.pi, math.pi, 1001)
    ]
    assert np.max(np.abs(np.array(thetas) - thetas[500])) < 1e-12


@pytest.mark.parametrize("eps", [0.05, 0.3, 0.5, 0.9])
@pytest.mark.parametrize("omega", [0.7, 1.2, SQRT2, 2.0])
def test_phi_winds_once(params, eps, omega):
    phis = [
        bloch_state(params, DriveSpec(eps, d, omega))[1].phi
        for d in np.linspace(-math.pi, math.pi, 721)
    ]
    total = np.sum(wrap(np.diff(phis)))
    assert total == pytest.approx(2 * math.pi, abs=1e-9)


def test_resonant_scaling():
    eig = eigenfrequencies(SystemParams())
    n1 = modal_coefficients(
        steady_amplitudes(SystemParams(eta=0.003), DriveSpec(1.0, 0.0, eig.omega01))
    ).norm
    n2 = modal_coefficients(
        steady_amplitudes(SystemParams(eta=0.006), DriveSpec(1.0, 0.0, eig.omega01))
    ).norm
    assert n1 / n2 == pytest.approx(2.0, rel=1e-9)


def test_state_from_angles_roundtrip(rng):
    for _ in range(100):
        th, ph = rng.uniform(1e-3, math.pi - 1e-3), rng.uniform(-math.pi, math.pi)
        ang = bloch_angles(state_from_angles(th, ph))
        assert ang.theta == pytest.approx(th, abs=1e-12)
        assert circular_distance(ang.phi, ph) < 1e-12


def test_drive_for_bloch_poles(params):
    assert drive_for_bloch(BlochAngles(0.0, 1.3), params, SQRT2) == (1.0, 0.0)
    eps, _ = drive_for_bloch(BlochAngles(math.pi, 0.0), params, SQRT2)
    assert eps == 0.0


def test_drive_for_bloch_recovers_drive(params):
    _, ang = bloch_state(params, DriveSpec(0.5, math.pi / 2, SQRT2))
    eps, delta = drive_for_bloch(ang, params, SQRT2)
    assert eps == pytest.approx(0.5, abs=1e-9)
    assert delta == pytest.approx(math.pi / 2, abs=1e-9)


def test_drive_for_bloch_round_trip(params, rng):
    for _ in range(100):
        target = BlochAngles(rng.uniform(0.01, math.pi - 0.01), rng.uniform(-math.pi, math.pi))
        omega = rng.uniform(0.2, 3.0)
        eps, delta = drive_for_bloch(target, params, omega)
        _, got = bloch_state(params, DriveSpec(eps, delta, omega))
        assert got.theta == pytest.approx(target.theta, abs=1e-9)
        assert circular_distance(got.phi, target.phi) < 1e-9


def test_drive_for_bloch_singular():
    p = SystemParams(eta=0.0)
    with pytest.raises(SingularDrive):
        drive_for_bloch(BlochAngles(1.0, 0.0), p, 1.0)
