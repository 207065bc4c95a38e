import math

import numpy as np
import pytest

from elasticbit.model import (
    EigenPair,
    MaterialSpec,
    SystemParams,
    eigenfrequencies,
    hertz_params,
    linearize,
    stiffness_matrix,
)


def test_hertz_params_unit_stiffness():
    k_nl, _ = hertz_params(MaterialSpec(E=3.0, nu=0.0, R=0.5, rho=1.0, sigma0=1.0))
    assert k_nl == pytest.approx(1.0, abs=1e-15)


def test_hertz_params_radius_scaling():
    a = hertz_params(MaterialSpec(E=2.0, nu=0.3, R=0.7, rho=3.0, sigma0=0.1))
    b = hertz_params(MaterialSpec(E=2.0, nu=0.3, R=1.4, rho=3.0, sigma0=0.1))
    assert b[0] / a[0] == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert b[1] / a[1] == pytest.approx(8.0, rel=1e-14)


def test_hertz_params_unit_mass():
    _, m = hertz_params(MaterialSpec(E=1.0, nu=0.0, R=0.5, rho=1.909859, sigma0=1.0))
    assert m == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(E=0.0, nu=0.2, R=1.0, rho=1.0, sigma0=1.0),
        dict(E=1.0, nu=0.5, R=1.0, rho=1.0, sigma0=1.0),
        dict(E=1.0, nu=0.2, R=-1.0, rho=1.0, sigma0=1.0),
        dict(E=1.0, nu=0.2, R=1.0, rho=0.0, sigma0=1.0),
        dict(E=1.0, nu=0.2, R=1.0, rho=1.0, sigma0=0.0),
    ],
)
def test_material_validation(kwargs):
    with pytest.raises(ValueError):
        MaterialSpec(**kwargs)


def test_linearize_values():
    lin = linearize(1.0, 4.0 / 9.0)
    assert lin.k_l == pytest.approx(1.0, rel=1e-15)
    assert lin.k2 == pytest.approx(-0.5625, rel=1e-15)
    assert lin.k3 == pytest.approx(-27.0 / 128.0, rel=1e-15)
    assert linearize(2.0, 1.0).k_l == 3.0


def test_linearize_suppression_limit():
    ratios = []
    for s0 in (1.0, 1e2, 1e4):
        lin = linearize(1.0, s0)
        ratios.append((abs(lin.k2 / lin.k_l), abs(lin.k3 / lin.k_l)))
    assert ratios[2][0] < ratios[1][0] < ratios[0][0]
    assert ratios[2][0] == pytest.approx(0.25e-4)
    assert ratios[2][1] < 1e-8


@pytest.mark.parametrize("k_nl,s0", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
def test_linearize_domain(k_nl, s0):
    with pytest.raises(ValueError):
        linearize(k_nl, s0)


@pytest.mark.parametrize("k_nl,s0", [(1.0, 4.0 / 9.0), (2.5, 0.01), (0.3, 17.0)])
def test_linear_stiffness_is_hertz_slope(k_nl, s0):
    h = 1e-6 * s0

    def force(x):
        return k_nl * (s0 + x) ** 1.5

    slope = (force(h) - force(-h)) / (2 * h)
    assert slope == pytest.approx(linearize(k_nl, s0).k_l, rel=1e-6)


def test_stiffness_matrix_examples(params):
    np.testing.assert_array_equal(stiffness_matrix(params, 0.0), [[2, -1], [-1, 2]])
    np.testing.assert_allclose(
        stiffness_matrix(params, math.sqrt(2.0)), [[0, -1], [-1, 0]], atol=1e-15
    )


@pytest.mark.parametrize("m,k", [(1.0, 1.0), (4.0, 1.0), (1.0, 2.0), (0.3, 7.0)])
def test_determinant_roots_bracketed(m, k):
    p = SystemParams(m=m, k_l=k)
    eig = eigenfrequencies(p)
    for w0 in (eig.omega01, eig.omega02):
        assert abs(np.linalg.det(stiffness_matrix(p, w0))) < 1e-12 * k**2
    # exactly one sign change per interval
    for lo, hi in ((0.0, eig.omega01), (eig.omega01, eig.omega02), (eig.omega02, 3 * eig.omega02)):
        grid = np.linspace(lo, hi, 2001)[1:-1]
        dets = np.array([np.linalg.det(stiffness_matrix(p, w)) for w in grid])
        assert np.count_nonzero(np.diff(np.sign(dets))) == 0
    w = np.concatenate([np.linspace(0, 3 * eig.omega02, 3001)])
    dets = np.array([np.linalg.det(stiffness_matrix(p, x)) for x in w])
    assert np.count_nonzero(np.diff(np.sign(dets))) == 2


@pytest.mark.parametrize(
    "m,k,expected",
    [
        (1.0, 1.0, (1.0, math.sqrt(3.0))),
        (4.0, 1.0, (0.5, math.sqrt(3.0) / 2)),
        (1.0, 2.0, (math.sqrt(2.0), math.sqrt(6.0))),
    ],
)
def test_eigenfrequencies(m, k, expected):
    e = eigenfrequencies(SystemParams(m=m, k_l=k))
    assert (e.omega01, e.omega02) == pytest.approx(expected, rel=1e-15)
    assert e.omega02 / e.omega01 == pytest.approx(math.sqrt(3.0), rel=1e-12)


def test_eigenpair_ordering():
    with pytest.raises(ValueError):
        EigenPair(2.0, 1.0)


def test_system_params_hertz_consistency():
    p = SystemParams.from_hertz(1.0, 4.0 / 9.0)
    assert p.k_l == pytest.approx(1.0)
    with pytest.raises(ValueError):
        SystemParams(k_l=2.0, k_nl=1.0, sigma0=4.0 / 9.0)
    with pytest.raises(ValueError):
        SystemParams(k_nl=1.0)
    with pytest.raises(ValueError):
        SystemParams(eta=-1.0)
    assert SystemParams(eta=0.0).eta == 0.0


def test_system_from_material():
    mat = MaterialSpec(E=3.0, nu=0.0, R=0.5, rho=1.909859, sigma0=4.0 / 9.0)
    p = SystemParams.from_material(mat)
    assert p.k_nl == pytest.approx(1.0)
    assert p.k_l == pytest.approx(1.0)
    assert p.m == pytest.approx(1.0, abs=1e-5)
