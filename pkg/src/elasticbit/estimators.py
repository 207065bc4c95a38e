"""scikit-learn compatible wrappers.

``ElasticBit`` maps driver settings to Bloch angles (``transform``) and
back (``inverse_transform``); ``BerryPhaseTransformer`` maps
``(omega_d, eps)`` rows to loop phases.  Both are stateless apart from
the validated system parameters set in ``fit``, so they drop into
pipelines, ``clone`` and grid searches like any other transformer.
"""

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .berry import LoopSpec, berry_phase_loop
from .model import SystemParams, eigenfrequencies
from .steadystate import BlochAngles, DriveSpec, bloch_state, drive_for_bloch

__all__ = ["ElasticBit", "BerryPhaseTransformer"]


def _check_width(est, X, reset):
    X = check_array(X, dtype=np.float64)
    if reset:
        est.n_features_in_ = X.shape[1]
    if X.shape[1] != 2:
        raise ValueError(f"expected 2 columns, got {X.shape[1]}")
    return X


class ElasticBit(TransformerMixin, BaseEstimator):
    """Driver settings ``(eps, delta)`` to Bloch angles ``(theta, phi)`` at fixed frequency.

    Parameters
    ----------
    m, k_l, eta : float
        Granule mass, linear coupling stiffness and damping.
    omega_d : float
        Driving frequency shared by every row.

    Attributes
    ----------
    params_ : SystemParams
    eigenfrequencies_ : EigenPair
    """

    def __init__(self, m=1.0, k_l=1.0, eta=0.003, omega_d=math.sqrt(2.0)):
        self.m = m
        self.k_l = k_l
        self.eta = eta
        self.omega_d = omega_d

    def fit(self, X=None, y=None):
        self.params_ = SystemParams(m=self.m, k_l=self.k_l, eta=self.eta)
        self.eigenfrequencies_ = eigenfrequencies(self.params_)
        if not self.omega_d > 0:
            raise ValueError(f"omega_d must be > 0, got {self.omega_d}")
        if X is not None:
            _check_width(self, X, reset=True)
        else:
            self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = _check_width(self, X, reset=False)
        out = np.empty_like(X)
        for i, (eps, delta) in enumerate(X):
            _, ang = bloch_state(self.params_, DriveSpec(eps, delta, self.omega_d))
            out[i] = ang.theta, ang.phi
        return out

    def inverse_transform(self, X):
        check_is_fitted(self, "params_")
        X = _check_width(self, X, reset=False)
        out = np.empty_like(X)
        for i, (theta, phi) in enumerate(X):
            out[i] = drive_for_bloch(BlochAngles(theta, phi), self.params_, self.omega_d)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["theta", "phi"], dtype=object)


class BerryPhaseTransformer(TransformerMixin, BaseEstimator):
    """Rows ``(omega_d, eps)`` to ``(gamma_discrete, gamma_analytic, theta)``."""

    def __init__(self, m=1.0, k_l=1.0, eta=0.003, n_steps=4096):
        self.m = m
        self.k_l = k_l
        self.eta = eta
        self.n_steps = n_steps

    def fit(self, X=None, y=None):
        self.params_ = SystemParams(m=self.m, k_l=self.k_l, eta=self.eta)
        if X is not None:
            _check_width(self, X, reset=True)
        else:
            self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = _check_width(self, X, reset=False)
        out = np.empty((X.shape[0], 3))
        for i, (omega, eps) in enumerate(X):
            r = berry_phase_loop(self.params_, LoopSpec(eps, omega, self.n_steps))
            out[i] = r.gamma_discrete, r.gamma_analytic, r.theta
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["gamma_discrete", "gamma_analytic", "theta"], dtype=object)
