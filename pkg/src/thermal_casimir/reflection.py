"""Reflection coefficients at imaginary frequency.

Both polarizations are real on the imaginary frequency axis.  The sign
convention keeps the ideal-metal limit at (+1, +1); only squared amplitudes
enter the plate free energy, so the convention carries no physical weight.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .constants import CONSTANTS
from .errors import DomainError


class ReflectionPair(NamedTuple):
    """TM and TE reflection amplitudes at a single (frequency, wavevector)."""

    r_tm: float
    r_te: float


def fresnel_reflection(xi, k_perp, eps, constants=CONSTANTS):
    """Fresnel reflection amplitudes of a half-space with permittivity ``eps``.

    Parameters
    ----------
    xi : float or ndarray
        Imaginary angular frequency, rad/s, strictly positive.
    k_perp : float or ndarray
        In-plane wavevector, 1/m, nonnegative.
    eps : float or ndarray
        Permittivity evaluated at ``i*xi``; must be >= 1.

    Returns
    -------
    ReflectionPair
        r_tm = (eps*q - k)/(eps*q + k), r_te = (k - q)/(k + q) with
        q = sqrt(k_perp^2 + xi^2/c^2) and k = sqrt(k_perp^2 + eps*xi^2/c^2).
    """
    xi = np.asarray(xi, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if np.any(xi <= 0.0):
        raise DomainError("fresnel_reflection requires xi > 0")
    if np.any(k_perp < 0.0):
        raise DomainError("fresnel_reflection requires k_perp >= 0")
    if np.any(eps < 1.0):
        raise DomainError("fresnel_reflection requires eps >= 1")
    w2 = (xi / constants.c) ** 2
    q = np.sqrt(k_perp**2 + w2)
    k = np.sqrt(k_perp**2 + eps * w2)
    r_tm = (eps * q - k) / (eps * q + k)
    r_te = (k - q) / (k + q)
    return ReflectionPair(r_tm, r_te)


def impedance_reflection(xi, k_perp, impedance, constants=CONSTANTS):
    """Reflection amplitudes under the Leontovich surface-impedance condition.

    Valid for small impedance; ``impedance`` outside (0, 1] is rejected
    because the boundary condition itself breaks down there.
    """
    xi = np.asarray(xi, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    impedance = np.asarray(impedance, dtype=float)
    if np.any(xi <= 0.0):
        raise DomainError("impedance_reflection requires xi > 0")
    if np.any(k_perp < 0.0):
        raise DomainError("impedance_reflection requires k_perp >= 0")
    if np.any(impedance <= 0.0) or np.any(impedance > 1.0):
        raise DomainError("surface impedance must lie in (0, 1]")
    cq = constants.c * np.sqrt(k_perp**2 + (xi / constants.c) ** 2)
    r_tm = (cq - impedance * xi) / (cq + impedance * xi)
    r_te = (xi - cq * impedance) / (xi + cq * impedance)
    return ReflectionPair(r_tm, r_te)


def zero_frequency_reflection(model, k_perp):
    """Zero-frequency reflection pair prescribed by a material response.

    The l = 0 Matsubara term is never obtained as a limit of the finite
    frequency coefficients; each material carries an explicit rule and this
    helper simply evaluates it.

    Parameters
    ----------
    model : MaterialResponse
    k_perp : float or ndarray
        In-plane wavevector, 1/m, strictly positive.
    """
    k_perp = np.asarray(k_perp, dtype=float)
    if np.any(k_perp <= 0.0):
        raise DomainError("zero_frequency_reflection requires k_perp > 0")
    return model.zero_frequency_reflection(k_perp)
