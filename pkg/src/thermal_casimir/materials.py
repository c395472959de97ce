"""Material response models evaluated on the imaginary frequency axis.

A material response bundles a way to evaluate the dielectric permittivity
eps(i*xi) (or a Leontovich impedance Z(i*xi)) for xi > 0 together with an
explicit reflection rule for the zero-frequency Matsubara term.  The zero
frequency term is never obtained by letting xi -> 0 in the permittivity;
every variant states its own rule.

Internal units are SI.  Plasma frequencies and relaxation parameters in eV
must be converted at the boundary via :mod:`thermal_casimir.constants`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, ClassVar, Optional

import numpy as np

from .constants import CONSTANTS
from .errors import DomainError, ExtrapolationError, PrescriptionError
from .reflection import ReflectionPair, fresnel_reflection, impedance_reflection

_ZERO_XI_MESSAGE = "zero-frequency term must use the prescription rule, not eps(i*xi)"


def matsubara_frequency(index, temperature, constants=CONSTANTS):
    """Matsubara angular frequency xi_l = 2 pi k_B T l / hbar.

    Parameters
    ----------
    index : int or ndarray of int
        Matsubara index l >= 0.
    temperature : float
        Temperature in K, strictly positive.

    Returns
    -------
    float or ndarray
        Angular frequency in rad/s; exactly zero for l = 0.
    """
    index = np.asarray(index)
    if not np.issubdtype(index.dtype, np.integer):
        raise DomainError("Matsubara index must be an integer")
    if np.any(index < 0):
        raise DomainError("Matsubara index must be nonnegative")
    if temperature <= 0.0:
        raise DomainError("temperature must be positive")
    value = 2.0 * np.pi * constants.k_B * temperature / constants.hbar * index
    return value if value.ndim else float(value)


# ---------------------------------------------------------------------------
# relaxation-parameter maps gamma(T)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawGamma:
    """Relaxation parameter falling as a power of temperature.

    gamma(T) = max(floor, gamma_ref * (T / T_ref)**exponent).  The default
    exponent 5 mimics the low-temperature phonon scaling of a perfect
    lattice; a nonzero floor models residual impurity scattering.
    """

    gamma_ref: float
    reference_temperature: float = 300.0
    exponent: float = 5.0
    floor: float = 0.0

    def __post_init__(self):
        if self.gamma_ref < 0.0 or self.floor < 0.0:
            raise DomainError("relaxation parameters must be nonnegative")
        if self.reference_temperature <= 0.0 or self.exponent <= 0.0:
            raise DomainError("reference temperature and exponent must be positive")

    def __call__(self, temperature):
        t = np.asarray(temperature, dtype=float)
        value = self.gamma_ref * (t / self.reference_temperature) ** self.exponent
        out = np.maximum(value, self.floor)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class TabulatedGamma:
    """Relaxation parameter interpolated from (T, gamma) samples.

    Samples must be nonnegative and nondecreasing in T so that gamma is
    monotone nonincreasing toward T = 0; evaluation clamps outside the
    tabulated range.
    """

    temperatures: tuple
    gammas: tuple

    def __post_init__(self):
        t = np.asarray(self.temperatures, dtype=float)
        g = np.asarray(self.gammas, dtype=float)
        if t.size < 2 or t.size != g.size:
            raise DomainError("gamma table needs matching T and gamma columns, two rows minimum")
        if np.any(t < 0.0) or np.any(np.diff(t) <= 0.0):
            raise DomainError("gamma table temperatures must be nonnegative and strictly increasing")
        if np.any(g < 0.0):
            raise DomainError("gamma table values must be nonnegative")
        if np.any(np.diff(g) < 0.0):
            raise DomainError("gamma table must be nondecreasing in T")
        object.__setattr__(self, "temperatures", tuple(float(x) for x in t))
        object.__setattr__(self, "gammas", tuple(float(x) for x in g))

    def __call__(self, temperature):
        value = np.interp(np.asarray(temperature, dtype=float), self.temperatures, self.gammas)
        return value if value.ndim else float(value)


@dataclass(frozen=True)
class DrudeParameters:
    """Drude parameters with an optional temperature map for the relaxation.

    Attributes
    ----------
    omega_p : float
        Plasma frequency, rad/s.
    gamma : float
        Relaxation parameter at ``reference_temperature``, rad/s.
    gamma_of_T : callable, optional
        Map T -> gamma(T) in rad/s.  When absent, gamma is held at its
        reference value for every temperature.
    """

    omega_p: float
    gamma: float
    gamma_of_T: Optional[Callable[[float], float]] = None
    reference_temperature: float = 300.0

    def __post_init__(self):
        if self.omega_p <= 0.0:
            raise DomainError("plasma frequency must be positive")
        if self.gamma < 0.0:
            raise DomainError("relaxation parameter must be nonnegative")

    def relaxation(self, temperature=None):
        """gamma at the given temperature (reference value when no map is set)."""
        if temperature is None:
            temperature = self.reference_temperature
        if self.gamma_of_T is None:
            return self.gamma
        value = self.gamma_of_T(temperature)
        if np.any(np.asarray(value) < 0.0):
            raise DomainError("gamma_of_T returned a negative relaxation parameter")
        return value


# ---------------------------------------------------------------------------
# closed-form permittivities and impedances
# ---------------------------------------------------------------------------


def eps_drude(xi, parameters, temperature=None):
    """Drude permittivity 1 + omega_p^2 / (xi (xi + gamma(T))) at i*xi."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0.0):
        raise DomainError(_ZERO_XI_MESSAGE)
    gamma = parameters.relaxation(temperature)
    value = 1.0 + parameters.omega_p**2 / (xi * (xi + gamma))
    return value if value.ndim else float(value)


def eps_plasma(xi, omega_p):
    """Plasma permittivity 1 + omega_p^2 / xi^2 at i*xi."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0.0):
        raise DomainError(_ZERO_XI_MESSAGE)
    if omega_p <= 0.0:
        raise DomainError("plasma frequency must be positive")
    value = 1.0 + (omega_p / xi) ** 2
    return value if value.ndim else float(value)


def impedance_from_eps(xi, eps):
    """Leontovich impedance 1/sqrt(eps) where both descriptions overlap."""
    xi = np.asarray(xi, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if np.any(xi <= 0.0):
        raise DomainError("impedance requires xi > 0")
    if np.any(eps < 1.0):
        raise DomainError("impedance conversion requires eps >= 1")
    value = 1.0 / np.sqrt(eps)
    return value if value.ndim else float(value)


# ---------------------------------------------------------------------------
# tabulated optical data and the dispersion integral
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DrudeTail:
    """Continue Im eps below the grid with a Drude absorption profile."""

    omega_p: float
    gamma: float

    def __post_init__(self):
        if self.omega_p <= 0.0 or self.gamma <= 0.0:
            raise DomainError("Drude tail needs positive omega_p and gamma")


@dataclass(frozen=True)
class ConstantEpsilon:
    """No absorption below the grid; the material is a plain dielectric there.

    ``eps_static`` is the static permittivity used by the zero-frequency
    reflection rule; a consistent table integrates to the same value as
    xi -> 0.
    """

    eps_static: float

    def __post_init__(self):
        if self.eps_static < 1.0:
            raise DomainError("static permittivity must be >= 1")


@dataclass(frozen=True)
class OpticalTable:
    """Tabulated Im eps(omega) on a strictly increasing frequency grid.

    Attributes
    ----------
    omega : ndarray
        Angular frequencies, rad/s, strictly increasing and positive.
    im_eps : ndarray
        Imaginary part of the permittivity at ``omega``; nonnegative
        (passivity).
    extrapolation : DrudeTail, ConstantEpsilon or None
        Continuation of the absorption below ``omega[0]``.  ``None`` means
        the table carries no information there at all.
    provenance : str
        Free-form description of where the data came from.
    """

    omega: np.ndarray
    im_eps: np.ndarray
    extrapolation: object = None
    provenance: str = ""

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        im_eps = np.asarray(self.im_eps, dtype=float)
        if omega.ndim != 1 or omega.size < 2 or omega.shape != im_eps.shape:
            raise DomainError("optical table needs matching 1-d omega and Im eps columns")
        if omega[0] <= 0.0 or np.any(np.diff(omega) <= 0.0):
            raise DomainError("optical table frequencies must be positive and strictly increasing")
        if np.any(im_eps < 0.0):
            raise DomainError("Im eps must be nonnegative (passivity)")
        if self.extrapolation is not None and not isinstance(
            self.extrapolation, (DrudeTail, ConstantEpsilon)
        ):
            raise DomainError("unknown extrapolation rule")
        omega = omega.copy()
        im_eps = im_eps.copy()
        omega.setflags(write=False)
        im_eps.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "im_eps", im_eps)


def _gl_map(edges, order):
    """Gauss-Legendre nodes/weights on a fresh (uncached) panel sequence."""
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    weights = (half[:, None] * base_w[None, :]).ravel()
    return nodes, weights


def _grid_dispersion_integral(xi, table, rel_tol):
    """Integral of omega * Im eps / (omega^2 + xi^2) over the tabulated range.

    Performed in log frequency with the tabulated absorption interpolated
    linearly in log omega; panels are split until the result is stable to
    ``rel_tol`` for every requested xi.
    """
    u = np.log(table.omega)
    previous = None
    for level in range(5):
        pieces = np.linspace(u[:-1], u[1:], 2**level + 1, axis=1)
        edges = np.append(pieces[:, :-1].ravel(), u[-1])
        nodes_u, weights = _gl_map(edges, 8)
        omega = np.exp(nodes_u)
        absorption = np.interp(nodes_u, u, table.im_eps)
        # integrand in u: omega^2 * Im eps / (omega^2 + xi^2)
        result = np.empty(xi.size)
        for start in range(0, xi.size, 128):
            block = xi[start : start + 128, None]
            kernel = omega[None, :] ** 2 * absorption[None, :] / (omega[None, :] ** 2 + block**2)
            result[start : start + 128] = kernel @ weights
        if previous is not None:
            scale = np.maximum(np.abs(result), 1e-300)
            if np.max(np.abs(result - previous) / scale) <= rel_tol:
                return result
        previous = result
    return previous


def _drude_tail_integral(xi, rule, omega_min):
    """Closed form of the below-grid Drude absorption contribution.

    Integrand omega * ImepsD / (omega^2 + xi^2) with
    ImepsD = omega_p^2 gamma / (omega (omega^2 + gamma^2)) reduces to
    omega_p^2 gamma / ((omega^2 + gamma^2)(omega^2 + xi^2)), integrable in
    elementary terms on [0, omega_min].
    """
    g = rule.gamma
    w = omega_min
    out = np.empty(xi.shape)
    near = np.abs(xi - g) < 1e-6 * g
    x = xi[~near]
    out[~near] = (np.arctan(w / g) / g - np.arctan(w / x) / x) / (x**2 - g**2)
    if np.any(near):
        out[near] = (w / (w**2 + g**2) + np.arctan(w / g) / g) / (2.0 * g**2)
    return rule.omega_p**2 * g * out


def eps_from_table(xi, table, rel_tol=1e-6):
    """Permittivity at imaginary frequency from tabulated absorption data.

    Evaluates 1 + (2/pi) * integral of omega Im eps(omega) / (omega^2 + xi^2)
    with the below-grid integrand supplied by the table's extrapolation rule
    and no absorption assumed above the grid.

    Parameters
    ----------
    xi : float or ndarray
        Imaginary angular frequency, rad/s, strictly positive.
    table : OpticalTable
    rel_tol : float
        Relative tolerance of the panel refinement.

    Returns
    -------
    float or ndarray
        eps(i*xi) >= 1.

    Raises
    ------
    ExtrapolationError
        If the table has no extrapolation rule but the region below the grid
        would contribute more than 1% of the integral (estimated by a 1/omega
        continuation of the lowest tabulated absorption).
    """
    xi_in = np.asarray(xi, dtype=float)
    if np.any(xi_in <= 0.0):
        raise DomainError(_ZERO_XI_MESSAGE)
    xi_arr = np.ravel(xi_in).astype(float)

    grid_part = _grid_dispersion_integral(xi_arr, table, rel_tol)
    omega_min = table.omega[0]
    rule = table.extrapolation
    if isinstance(rule, DrudeTail):
        tail = _drude_tail_integral(xi_arr, rule, omega_min)
    elif isinstance(rule, ConstantEpsilon) or rule is None:
        tail = np.zeros_like(grid_part)
        if rule is None:
            # probe with a 1/omega continuation of the lowest sample
            probe = table.im_eps[0] * omega_min * np.arctan(omega_min / xi_arr) / xi_arr
            total = grid_part + probe
            mask = total > 0.0
            if np.any(probe[mask] > 0.01 * total[mask]):
                raise ExtrapolationError(
                    "extrapolation required: below-grid absorption would exceed "
                    "1% of the dispersion integral"
                )
    else:  # pragma: no cover - rejected at construction
        raise DomainError("unknown extrapolation rule")

    value = 1.0 + (2.0 / np.pi) * (grid_part + tail)
    return value.reshape(xi_in.shape) if xi_in.ndim else float(value[0])


def drude_absorption(omega, omega_p, gamma):
    """Real-axis Drude absorption Im eps = omega_p^2 gamma / (omega (omega^2 + gamma^2))."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0.0):
        raise DomainError("real-axis frequency must be positive")
    return omega_p**2 * gamma / (omega * (omega**2 + gamma**2))


def synthesize_drude_table(omega_p, gamma, omega_min, omega_max, points, extrapolation=None):
    """Optical table sampled from the closed-form Drude absorption profile."""
    omega = np.geomspace(omega_min, omega_max, points)
    if extrapolation is None:
        extrapolation = DrudeTail(omega_p, gamma)
    return OpticalTable(
        omega=omega,
        im_eps=drude_absorption(omega, omega_p, gamma),
        extrapolation=extrapolation,
        provenance=f"synthetic Drude absorption, omega_p={omega_p:.6e} rad/s, gamma={gamma:.6e} rad/s",
    )


# ---------------------------------------------------------------------------
# material response variants
# ---------------------------------------------------------------------------


class MaterialResponse:
    """Base class for the supported material prescriptions.

    Subclasses provide finite-frequency reflection amplitudes and the
    explicit zero-frequency rule.  Instances are immutable and safe to share
    across threads.
    """

    tag: ClassVar[str] = "abstract"

    def reflection(self, xi, k_perp, temperature=None):
        raise NotImplementedError

    def zero_frequency_reflection(self, k_perp):
        raise NotImplementedError

    @staticmethod
    def _ones_like(k_perp):
        return np.ones_like(np.asarray(k_perp, dtype=float))


@dataclass(frozen=True)
class IdealMetal(MaterialResponse):
    """Perfect reflector; both polarizations reflect fully at every frequency.

    At zero frequency this reproduces the Schwinger prescription (take the
    perfect-conductor limit before setting l = 0).
    """

    tag: ClassVar[str] = "ideal"

    def reflection(self, xi, k_perp, temperature=None):
        one = np.ones(np.broadcast(np.asarray(xi), np.asarray(k_perp)).shape)
        return ReflectionPair(one, one)

    def zero_frequency_reflection(self, k_perp):
        one = self._ones_like(k_perp)
        return ReflectionPair(one, one)


@dataclass(frozen=True)
class Drude(MaterialResponse):
    """Drude metal; the TE zero-frequency reflection vanishes identically."""

    parameters: DrudeParameters
    tag: ClassVar[str] = "drude"

    def eps(self, xi, temperature=None):
        return eps_drude(xi, self.parameters, temperature)

    def reflection(self, xi, k_perp, temperature=None):
        return fresnel_reflection(xi, k_perp, self.eps(xi, temperature))

    def zero_frequency_reflection(self, k_perp):
        one = self._ones_like(k_perp)
        return ReflectionPair(one, np.zeros_like(one))


@dataclass(frozen=True)
class Plasma(MaterialResponse):
    """Dissipationless plasma; the TE zero-frequency reflection stays finite."""

    omega_p: float
    tag: ClassVar[str] = "plasma"

    def __post_init__(self):
        if self.omega_p <= 0.0:
            raise DomainError("plasma frequency must be positive")

    def eps(self, xi, temperature=None):
        return eps_plasma(xi, self.omega_p)

    def reflection(self, xi, k_perp, temperature=None):
        return fresnel_reflection(xi, k_perp, self.eps(xi))

    def zero_frequency_reflection(self, k_perp):
        ck = CONSTANTS.c * np.asarray(k_perp, dtype=float)
        root = np.sqrt(ck**2 + self.omega_p**2)
        return ReflectionPair(self._ones_like(k_perp), (root - ck) / (root + ck))


@dataclass(frozen=True)
class TabulatedPermittivity(MaterialResponse):
    """Material described by tabulated optical data via the dispersion integral.

    The zero-frequency rule follows the table's extrapolation: a Drude tail
    implies the Drude rule, a constant static permittivity implies the
    dielectric Fresnel limit, and a table without extrapolation has no rule
    at all.
    """

    table: OpticalTable
    kk_rel_tol: float = 1e-6
    tag: ClassVar[str] = "table"

    def eps(self, xi, temperature=None):
        return eps_from_table(xi, self.table, self.kk_rel_tol)

    def reflection(self, xi, k_perp, temperature=None):
        return fresnel_reflection(xi, k_perp, self.eps(xi))

    def zero_frequency_reflection(self, k_perp):
        one = self._ones_like(k_perp)
        rule = self.table.extrapolation
        if isinstance(rule, DrudeTail):
            return ReflectionPair(one, np.zeros_like(one))
        if isinstance(rule, ConstantEpsilon):
            e0 = rule.eps_static
            return ReflectionPair((e0 - 1.0) / (e0 + 1.0) * one, np.zeros_like(one))
        raise PrescriptionError(
            "prescription required: tabulated data without extrapolation has "
            "no zero-frequency reflection rule"
        )


@dataclass(frozen=True)
class InfraredOpticsImpedance(MaterialResponse):
    """Leontovich impedance taken from the infrared-optics (plasma) response."""

    omega_p: float
    tag: ClassVar[str] = "impedance-ir"

    def __post_init__(self):
        if self.omega_p <= 0.0:
            raise DomainError("plasma frequency must be positive")

    def impedance(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(xi <= 0.0):
            raise DomainError(_ZERO_XI_MESSAGE)
        value = xi / np.sqrt(xi**2 + self.omega_p**2)
        return value if value.ndim else float(value)

    def reflection(self, xi, k_perp, temperature=None):
        return impedance_reflection(xi, k_perp, self.impedance(xi))

    def zero_frequency_reflection(self, k_perp):
        ck = CONSTANTS.c * np.asarray(k_perp, dtype=float)
        return ReflectionPair(
            self._ones_like(k_perp), (self.omega_p - ck) / (self.omega_p + ck)
        )


@dataclass(frozen=True)
class SkinEffectImpedance(MaterialResponse):
    """Leontovich impedance in the normal skin-effect regime.

    Z(i*xi) = sqrt(xi * gamma) / omega_p, the low-frequency limit of the
    Drude impedance.  Its zero-frequency reflection rule coincides with the
    perfect-reflector one.
    """

    omega_p: float
    gamma: float
    tag: ClassVar[str] = "impedance-skin"

    def __post_init__(self):
        if self.omega_p <= 0.0 or self.gamma <= 0.0:
            raise DomainError("skin-effect impedance needs positive omega_p and gamma")

    def impedance(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(xi <= 0.0):
            raise DomainError(_ZERO_XI_MESSAGE)
        value = np.sqrt(xi * self.gamma) / self.omega_p
        return value if value.ndim else float(value)

    def reflection(self, xi, k_perp, temperature=None):
        return impedance_reflection(xi, k_perp, self.impedance(xi))

    def zero_frequency_reflection(self, k_perp):
        one = self._ones_like(k_perp)
        return ReflectionPair(one, one.copy())
