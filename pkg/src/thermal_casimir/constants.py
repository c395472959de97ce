"""Physical constants and unit conversions.

All internal computation uses SI throughout (rad/s, J, m, K).  Electron-volt
values are accepted only at API and CLI boundaries and pass through the single
conversion point :func:`ev_to_angular_frequency`.
"""

from __future__ import annotations

from dataclasses import dataclass

import scipy.constants as _codata


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA-pinned constants, immutable.

    Attributes
    ----------
    hbar : float
        Reduced Planck constant, J s.
    c : float
        Speed of light in vacuum, m/s.
    k_B : float
        Boltzmann constant, J/K.
    G : float
        Newtonian gravitational constant, m^3/(kg s^2).
    ev_to_rad_per_s : float
        Angular frequency corresponding to a photon energy of 1 eV, equal
        to e/hbar.
    """

    hbar: float = _codata.hbar
    c: float = _codata.c
    k_B: float = _codata.k
    G: float = _codata.G
    ev_to_rad_per_s: float = _codata.e / _codata.hbar


CONSTANTS = PhysicalConstants()


def ev_to_angular_frequency(energy_ev, constants=CONSTANTS):
    """Convert a photon energy in eV to an angular frequency in rad/s."""
    return energy_ev * constants.ev_to_rad_per_s


def angular_frequency_to_ev(omega, constants=CONSTANTS):
    """Convert an angular frequency in rad/s to a photon energy in eV."""
    return omega / constants.ev_to_rad_per_s
