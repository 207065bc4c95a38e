"""Two-granule Hertzian system: material constants, linearization and eigenmodes.

All quantities are non-dimensional unless a :class:`MaterialSpec` is used
to derive them.  The defaults ``m = 1``, ``k_l = 1``, ``eta = 0.003`` are
the values used for every figure-level computation in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "MaterialSpec",
    "SystemParams",
    "LinearizedStiffness",
    "EigenPair",
    "hertz_params",
    "linearize",
    "stiffness_matrix",
    "eigenfrequencies",
]


@dataclass(frozen=True)
class MaterialSpec:
    """Elastic sphere properties.

    Attributes
    ----------
    E : float
        Young's modulus.
    nu : float
        Poisson ratio, ``0 <= nu < 0.5``.
    R : float
        Granule radius.
    rho : float
        Density.
    sigma0 : float
        Static pre-compression overlap.
    """

    E: float
    nu: float
    R: float
    rho: float
    sigma0: float

    def __post_init__(self):
        if not self.E > 0:
            raise ValueError(f"E must be > 0, got {self.E}")
        if not 0 <= self.nu < 0.5:
            raise ValueError(f"nu must satisfy 0 <= nu < 0.5, got {self.nu}")
        if not self.R > 0:
            raise ValueError(f"R must be > 0, got {self.R}")
        if not self.rho > 0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if not self.sigma0 > 0:
            raise ValueError(f"sigma0 must be > 0, got {self.sigma0}")


@dataclass(frozen=True)
class SystemParams:
    """Linearized system parameters.

    ``k_nl`` and ``sigma0`` are optional and only needed by the nonlinear
    integrator; when given, ``k_l`` must equal ``1.5 * k_nl * sqrt(sigma0)``.
    """

    m: float = 1.0
    k_l: float = 1.0
    eta: float = 0.003
    k_nl: Optional[float] = None
    sigma0: Optional[float] = None

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass m must be > 0, got {self.m}")
        if not self.k_l > 0:
            raise ValueError(f"stiffness k_l must be > 0, got {self.k_l}")
        if not self.eta >= 0:
            raise ValueError(f"damping eta must be >= 0, got {self.eta}")
        if (self.k_nl is None) != (self.sigma0 is None):
            raise ValueError("k_nl and sigma0 must be given together")
        if self.k_nl is not None:
            if not (self.k_nl > 0 and self.sigma0 > 0):
                raise ValueError("k_nl and sigma0 must be > 0")
            expected = 1.5 * self.k_nl * math.sqrt(self.sigma0)
            if abs(expected - self.k_l) > 1e-12 * abs(expected):
                raise ValueError(
                    f"k_l={self.k_l!r} inconsistent with 1.5*k_nl*sqrt(sigma0)={expected!r}"
                )

    @classmethod
    def from_hertz(cls, k_nl, sigma0, m=1.0, eta=0.003):
        """Build parameters whose linear stiffness follows from ``k_nl, sigma0``."""
        lin = linearize(k_nl, sigma0)
        return cls(m=m, k_l=lin.k_l, eta=eta, k_nl=k_nl, sigma0=sigma0)

    @classmethod
    def from_material(cls, mat: MaterialSpec, eta=0.003):
        k_nl, m = hertz_params(mat)
        return cls.from_hertz(k_nl, mat.sigma0, m=m, eta=eta)

    @property
    def has_hertz(self) -> bool:
        return self.k_nl is not None


@dataclass(frozen=True)
class LinearizedStiffness:
    """First, second and third order coupling stiffness.

    ``k2`` and ``k3`` follow the printed Taylor coefficients ``-3/8`` and
    ``-3/48``.  They are informational only; the integrator uses the exact
    Hertz force.  Note the binomial series of ``(1 + x)**1.5`` has a
    quadratic coefficient of ``+3/8``.
    """

    k_l: float
    k2: float
    k3: float


@dataclass(frozen=True)
class EigenPair:
    omega01: float
    omega02: float

    def __post_init__(self):
        if not 0 < self.omega01 < self.omega02:
            raise ValueError("eigenfrequencies must satisfy 0 < omega01 < omega02")


def hertz_params(mat: MaterialSpec):
    """Return ``(k_nl, m)`` for Hertzian spheres of the given material.

    ``k_nl = E sqrt(2R) / (3 (1 - nu^2))`` and ``m = 4/3 pi rho R^3``.
    """
    if abs(mat.nu) >= 1:
        raise ValueError(f"Poisson ratio must satisfy |nu| < 1, got {mat.nu}")
    k_nl = mat.E * math.sqrt(2.0 * mat.R) / (3.0 * (1.0 - mat.nu**2))
    m = 4.0 / 3.0 * math.pi * mat.rho * mat.R**3
    return k_nl, m


def linearize(k_nl, sigma0) -> LinearizedStiffness:
    """Taylor coefficients of the Hertz law about the pre-compressed state."""
    if not k_nl > 0:
        raise ValueError(f"k_nl must be > 0, got {k_nl}")
    if not sigma0 > 0:
        raise ValueError(f"sigma0 must be > 0, got {sigma0}")
    root = math.sqrt(sigma0)
    return LinearizedStiffness(
        k_l=1.5 * k_nl * root,
        k2=-3.0 / 8.0 * k_nl / root,
        k3=-1.0 / 16.0 * k_nl / (sigma0 * root),
    )


def stiffness_matrix(p: SystemParams, omega_d) -> np.ndarray:
    """Real dynamic stiffness matrix at driving frequency ``omega_d``."""
    if omega_d < 0:
        raise ValueError(f"omega_d must be >= 0, got {omega_d}")
    diag = -p.m * omega_d**2 + 2.0 * p.k_l
    return np.array([[diag, -p.k_l], [-p.k_l, diag]])


def eigenfrequencies(p: SystemParams) -> EigenPair:
    """In-phase and out-of-phase eigenfrequencies ``sqrt(k/m)``, ``sqrt(3k/m)``."""
    return EigenPair(math.sqrt(p.k_l / p.m), math.sqrt(3.0 * p.k_l / p.m))
