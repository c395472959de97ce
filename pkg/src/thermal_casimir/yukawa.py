"""Yukawa-type fifth-force pressures, forces and exclusion bounds.

The hypothetical interaction adds alpha * exp(-r/lambda) to the Newtonian
point potential.  Pairwise volume integration over the test bodies is linear
in the mass densities, so layered bodies reduce to superpositions of
homogeneous ones and every supported geometry has a closed form.  Only the
alpha term is integrated: the Newtonian background is smooth in separation
and subtracted in the experiments that produce residual bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .constants import CONSTANTS
from .errors import DomainError


@dataclass(frozen=True)
class YukawaParams:
    """Strength alpha (dimensionless, any sign) and range lambda (m)."""

    alpha: float
    lam: float

    def __post_init__(self):
        if self.lam <= 0.0:
            raise DomainError("interaction range must be positive")


@dataclass(frozen=True)
class Layer:
    """One coating layer: thickness (m) and mass density (kg/m^3)."""

    thickness: float
    density: float

    def __post_init__(self):
        if self.thickness <= 0.0 or self.density <= 0.0:
            raise DomainError("layer thickness and density must be positive")


def _check_coatings(coatings):
    return tuple(
        layer if isinstance(layer, Layer) else Layer(*layer) for layer in coatings
    )


@dataclass(frozen=True)
class SemispacePlate:
    """Half-space body, optionally coated; coatings listed outermost first."""

    density: float
    coatings: Tuple[Layer, ...] = ()

    def __post_init__(self):
        if self.density <= 0.0:
            raise DomainError("density must be positive")
        object.__setattr__(self, "coatings", _check_coatings(self.coatings))


@dataclass(frozen=True)
class FiniteSlab:
    """Slab of finite thickness, optionally coated (outermost first)."""

    thickness: float
    density: float
    coatings: Tuple[Layer, ...] = ()

    def __post_init__(self):
        if self.thickness <= 0.0 or self.density <= 0.0:
            raise DomainError("slab thickness and density must be positive")
        object.__setattr__(self, "coatings", _check_coatings(self.coatings))


@dataclass(frozen=True)
class Sphere:
    """Sphere, optionally coated (outermost first); coatings thinner than R."""

    radius: float
    density: float
    coatings: Tuple[Layer, ...] = ()

    def __post_init__(self):
        if self.radius <= 0.0 or self.density <= 0.0:
            raise DomainError("sphere radius and density must be positive")
        coatings = _check_coatings(self.coatings)
        if sum(c.thickness for c in coatings) >= self.radius:
            raise DomainError("sphere coatings must be thinner than the radius")
        object.__setattr__(self, "coatings", coatings)


PlateLike = Union[SemispacePlate, FiniteSlab]


def yukawa_potential(r, m1, m2, params):
    """Point-mass potential -G m1 m2 (1 + alpha e^{-r/lambda}) / r in J."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("distance must be positive")
    value = -CONSTANTS.G * m1 * m2 * (1.0 + params.alpha * np.exp(-r / params.lam)) / r
    return value if value.ndim else float(value)


def _plate_profile_factor(body, lam):
    """Exponentially weighted density of a plate-like body.

    Phi(lambda) = (1/lambda) Int_0^inf rho(t) e^{-t/lambda} dt over the depth
    profile; equals the bulk density for a homogeneous half-space.
    """
    if isinstance(body, SemispacePlate):
        layers = list(body.coatings)
        substrate = body.density
    elif isinstance(body, FiniteSlab):
        layers = list(body.coatings) + [Layer(body.thickness, body.density)]
        substrate = 0.0
    else:
        raise DomainError("profile factor is defined for plate-like bodies only")
    depth = 0.0
    phi = 0.0
    attenuation = 1.0
    for layer in layers:
        depth += layer.thickness
        next_attenuation = np.exp(-depth / lam)
        phi += layer.density * (attenuation - next_attenuation)
        attenuation = next_attenuation
    return phi + substrate * attenuation


def _sphere_components(body):
    """Nested-sphere superposition of a coated sphere.

    Returns (radius, density step, extra gap) triples whose sum reproduces
    the layered density profile exactly.
    """
    radii = [body.radius]
    densities = []
    for layer in body.coatings:
        densities.append(layer.density)
        radii.append(radii[-1] - layer.thickness)
    densities.append(body.density)
    components = []
    previous_density = 0.0
    for radius, density in zip(radii, densities):
        components.append((radius, density - previous_density, body.radius - radius))
        previous_density = density
    return components


def _sphere_bracket(radius, lam):
    """Shape factor R - lambda + e^{-2R/lambda}(R + lambda) of a solid sphere.

    Evaluated by series for 2R/lambda << 1 where the direct expression
    cancels catastrophically.
    """
    x = 2.0 * radius / lam
    if x >= 0.5:
        return radius - lam + np.exp(-x) * (radius + lam)
    total = 0.0
    sign = 1.0
    factorial = 2.0  # 3! / 3
    power = x**3
    for n in range(3, 18):
        factorial *= n
        total += sign * power * (n - 2) / (2.0 * factorial)
        sign = -sign
        power *= x
    return lam * total


def yukawa_energy_plates(z, body_a, body_b, params):
    """Yukawa interaction energy per unit area of two plate-like bodies, J/m^2.

    E(z) = -2 pi G alpha lambda^3 e^{-z/lambda} Phi_a Phi_b.
    """
    if z <= 0.0:
        raise DomainError("separation must be positive")
    lam = params.lam
    phi = _plate_profile_factor(body_a, lam) * _plate_profile_factor(body_b, lam)
    return -2.0 * np.pi * CONSTANTS.G * params.alpha * lam**3 * np.exp(-z / lam) * phi


def yukawa_pressure_plates(z, body_a, body_b, params):
    """Yukawa pressure between two plate-like bodies, Pa; negative attracts.

    P(z) = -dE/dz = -2 pi G alpha lambda^2 e^{-z/lambda} Phi_a Phi_b.
    """
    return yukawa_energy_plates(z, body_a, body_b, params) / params.lam


def yukawa_force_sphere_plate(z, sphere, plate, params):
    """Yukawa force between a sphere and a plate-like body, N.

    Pairwise integration of the alpha term over a (possibly coated) sphere
    against the plate's depth profile, differentiated in the gap width.
    """
    if z <= 0.0:
        raise DomainError("separation must be positive")
    if not isinstance(sphere, Sphere):
        raise DomainError("first body must be a sphere")
    lam = params.lam
    phi_plate = _plate_profile_factor(plate, lam)
    total = 0.0
    for radius, delta_rho, extra_gap in _sphere_components(sphere):
        total += delta_rho * np.exp(-(z + extra_gap) / lam) * _sphere_bracket(radius, lam)
    return -4.0 * np.pi**2 * CONSTANTS.G * params.alpha * lam**3 * phi_plate * total


def sphere_plate_effective_pressure(z, sphere, plate, params):
    """Equivalent pressure -(1 / 2 pi R) dF/dz for a sphere-plate pair, Pa.

    The force scales as e^{-z/lambda}, so dF/dz = -F/lambda exactly.
    """
    force = yukawa_force_sphere_plate(z, sphere, plate, params)
    return force / (2.0 * np.pi * sphere.radius * params.lam)


@dataclass(frozen=True)
class ResidualBound:
    """Half-width of the experiment-theory confidence interval on a z grid."""

    z: np.ndarray
    delta_tot: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        delta = np.asarray(self.delta_tot, dtype=float)
        if z.ndim != 1 or z.size == 0 or z.shape != delta.shape:
            raise DomainError("residual bound needs matching z and delta columns")
        if z[0] <= 0.0 or np.any(np.diff(z) <= 0.0):
            raise DomainError("z grid must be positive and strictly increasing")
        if np.any(delta <= 0.0):
            raise DomainError("confidence half-widths must be positive")
        z = z.copy()
        delta = delta.copy()
        z.setflags(write=False)
        delta.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "delta_tot", delta)


@dataclass(frozen=True)
class ExclusionCurve:
    """Maximum allowed |alpha| per interaction range lambda."""

    lambdas: np.ndarray
    alpha_max: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        alpha = np.asarray(self.alpha_max, dtype=float)
        if lam.ndim != 1 or lam.size == 0 or lam.shape != alpha.shape:
            raise DomainError("exclusion curve needs matching lambda and alpha columns")
        lam = lam.copy()
        alpha = alpha.copy()
        lam.setflags(write=False)
        alpha.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "alpha_max", alpha)


def _hypothetical_pressure_fn(geometry):
    body_a, body_b = geometry
    a_sphere = isinstance(body_a, Sphere)
    b_sphere = isinstance(body_b, Sphere)
    if a_sphere and b_sphere:
        raise DomainError("sphere-sphere geometry is not supported")
    if not a_sphere and not b_sphere:
        return lambda z, params: yukawa_pressure_plates(z, body_a, body_b, params)
    sphere, plate = (body_a, body_b) if a_sphere else (body_b, body_a)
    return lambda z, params: sphere_plate_effective_pressure(z, sphere, plate, params)


def exclusion_bound(bound, geometry, lambdas, provenance=""):
    """Exclusion curve alpha_max(lambda) from a residual pressure bound.

    The hypothetical pressure is exactly linear in alpha, so
    alpha_max(lambda) = min over the z grid of delta_tot(z) / |P(z; alpha=1)|.
    Grid points where the unit-strength pressure vanishes are skipped; if
    every point is skipped the bound is unbounded (inf) at that lambda.

    Parameters
    ----------
    bound : ResidualBound
    geometry : (body, body)
        Two plate-like bodies, or a sphere paired with a plate-like body.
    lambdas : array_like
        Interaction ranges, m.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0 or np.any(lambdas <= 0.0):
        raise DomainError("lambda grid must be nonempty and positive")
    pressure_fn = _hypothetical_pressure_fn(geometry)
    alpha_max = np.empty(lambdas.size)
    for i, lam in enumerate(lambdas):
        params = YukawaParams(alpha=1.0, lam=float(lam))
        magnitudes = np.array([abs(pressure_fn(float(zi), params)) for zi in bound.z])
        usable = magnitudes > 0.0
        if not np.any(usable):
            alpha_max[i] = np.inf
        else:
            alpha_max[i] = np.min(bound.delta_tot[usable] / magnitudes[usable])
    return ExclusionCurve(lambdas=lambdas, alpha_max=alpha_max, provenance=provenance)
