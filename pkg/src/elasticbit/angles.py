"""Principal-value angle helpers."""

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap(x):
    """Reduce angles to the half-open interval (-pi, pi]."""
    out = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), TWO_PI)
    return float(out) if np.ndim(out) == 0 else out


def circular_distance(a, b):
    """Smallest absolute difference between two angles, in [0, pi]."""
    return np.abs(wrap(np.asarray(a) - np.asarray(b)))


def winding_number(phases, closed=True):
    """Net number of 2*pi revolutions of an ordered phase sequence.

    Consecutive differences are taken on the nearest branch.  With
    ``closed=True`` the step from the last sample back to the first is
    included, so the result is an integer for any cyclic sequence.
    """
    phases = np.asarray(phases, dtype=float)
    steps = np.diff(phases)
    if closed:
        steps = np.append(steps, phases[0] - phases[-1])
    total = np.sum(wrap(steps))
    return total / TWO_PI
