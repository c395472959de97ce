"""Thermal Casimir free energies, proximity-force checks, Nernst diagnostics
and Yukawa fifth-force exclusion bounds."""

from .constants import CONSTANTS, PhysicalConstants, angular_frequency_to_ev, ev_to_angular_frequency
from .entropy import (
    EntropyScan,
    drude_zero_T_entropy,
    entropy,
    entropy_large_z_limit,
    nernst_verdict,
)
from .errors import ConvergenceError, DomainError, ExtrapolationError, PrescriptionError
from .geometry import (
    GeometryCase,
    exact_cylinder_force,
    ideal_plate_energy,
    ideal_plate_pressure,
    pft_error_coefficients,
    pft_force,
    pressure_from_gradient,
)
from .lifshitz import (
    DEFAULT_CONFIG,
    EvaluationConfig,
    LifshitzResult,
    classical_limit,
    free_energy,
    pressure,
)
from .materials import (
    ConstantEpsilon,
    Drude,
    DrudeParameters,
    DrudeTail,
    IdealMetal,
    InfraredOpticsImpedance,
    MaterialResponse,
    OpticalTable,
    Plasma,
    PowerLawGamma,
    SkinEffectImpedance,
    TabulatedGamma,
    TabulatedPermittivity,
    eps_drude,
    eps_from_table,
    eps_plasma,
    impedance_from_eps,
    matsubara_frequency,
    synthesize_drude_table,
)
from .reflection import ReflectionPair, fresnel_reflection, impedance_reflection, zero_frequency_reflection
from .yukawa import (
    ExclusionCurve,
    FiniteSlab,
    Layer,
    ResidualBound,
    SemispacePlate,
    Sphere,
    YukawaParams,
    exclusion_bound,
    sphere_plate_effective_pressure,
    yukawa_energy_plates,
    yukawa_force_sphere_plate,
    yukawa_potential,
    yukawa_pressure_plates,
)

__version__ = "0.1.0"
