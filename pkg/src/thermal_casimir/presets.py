"""Bundled material presets.

Metallic presets carry plasma frequency and relaxation parameter in eV and
build any of the supported prescriptions; the silicon preset is a bundled
optical table whose dispersion integral reproduces the static permittivity
11.66.  User-supplied files override presets simply by being passed instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .constants import ev_to_angular_frequency
from .errors import DomainError
from .materials import (
    ConstantEpsilon,
    Drude,
    DrudeParameters,
    IdealMetal,
    InfraredOpticsImpedance,
    OpticalTable,
    Plasma,
    SkinEffectImpedance,
    TabulatedPermittivity,
)

SI_STATIC_PERMITTIVITY = 11.66


@dataclass(frozen=True)
class MetallicPreset:
    """Drude parameters of a bundled metal, stored in eV."""

    name: str
    omega_p_ev: float
    gamma_ev: float

    @property
    def omega_p(self):
        return ev_to_angular_frequency(self.omega_p_ev)

    @property
    def gamma(self):
        return ev_to_angular_frequency(self.gamma_ev)

    def drude_parameters(self, gamma_of_T=None):
        return DrudeParameters(self.omega_p, self.gamma, gamma_of_T)


METALLIC_PRESETS = {
    "au-paper": MetallicPreset("Au-paper", 9.0, 0.035),
    "au-resistivity": MetallicPreset("Au-resistivity", 8.9, 0.0357),
}

TABLE_PRESETS = ("si-static",)


def get_metallic_preset(name):
    """Look up a metallic preset by (case-insensitive) name."""
    try:
        return METALLIC_PRESETS[name.lower()]
    except KeyError:
        known = ", ".join(p.name for p in METALLIC_PRESETS.values())
        raise DomainError(f"unknown metallic preset {name!r} (known: {known})") from None


def si_static_table():
    """Bundled synthetic silicon table with the constant-eps(0)=11.66 rule."""
    text = resources.files("thermal_casimir.data").joinpath("si_static_imeps.txt").read_text()
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    omega_ev = np.array([float(r[0]) for r in rows])
    im_eps = np.array([float(r[1]) for r in rows])
    return OpticalTable(
        omega=ev_to_angular_frequency(omega_ev),
        im_eps=im_eps,
        extrapolation=ConstantEpsilon(SI_STATIC_PERMITTIVITY),
        provenance="bundled synthetic Si oscillator table (static permittivity 11.66)",
    )


def build_model(kind, preset="Au-paper", omega_p_ev=None, gamma_ev=None, table=None,
                gamma_of_T=None):
    """Construct a material response from a prescription name and parameters.

    Parameters
    ----------
    kind : str
        One of "ideal", "drude", "plasma", "impedance-ir", "impedance-skin",
        "table".
    preset : str
        Parameter preset for metallic prescriptions, or "Si-static" for the
        bundled table.
    omega_p_ev, gamma_ev : float, optional
        Explicit overrides of the preset values, in eV.
    table : OpticalTable, optional
        Explicit table for kind="table"; overrides the preset.
    """
    if kind == "ideal":
        return IdealMetal()
    if kind == "table":
        if table is None:
            if preset.lower() != "si-static":
                raise DomainError("tabulated models need an optical table or the Si-static preset")
            table = si_static_table()
        return TabulatedPermittivity(table)

    if preset.lower() in TABLE_PRESETS:
        raise DomainError(f"preset {preset!r} provides a table, not Drude parameters")
    metal = get_metallic_preset(preset)
    omega_p = ev_to_angular_frequency(omega_p_ev) if omega_p_ev is not None else metal.omega_p
    gamma = ev_to_angular_frequency(gamma_ev) if gamma_ev is not None else metal.gamma
    if kind == "drude":
        return Drude(DrudeParameters(omega_p, gamma, gamma_of_T))
    if kind == "plasma":
        return Plasma(omega_p)
    if kind == "impedance-ir":
        return InfraredOpticsImpedance(omega_p)
    if kind == "impedance-skin":
        return SkinEffectImpedance(omega_p, gamma)
    raise DomainError(f"unknown model kind {kind!r}")
