"""Numerical range and fractional power toolkit for small complex matrices."""

from .errors import NumRadiusError
from .frac_power import (
    PowerResult,
    QuadratureOptions,
    fractional_power,
    power_quadrature,
    power_spectral,
)
from .generators import GeneratorKind, GeneratorSpec, generate
from .hunt import HuntConfig, HuntReport, hunt_counterexample
from .matrix_core import (
    cartesian_parts,
    hermitian_spectrum,
    hermitize,
    inverse,
    load_matrix,
    save_matrix,
)
from .properties import PropertyId, PropertyParams, evaluate_property
from .range_radius import (
    accretive_rotation,
    classify,
    numerical_radius,
    radius_oracle,
    range_boundary,
    sector_angle,
)
from .suite import SuiteConfig, VerificationReport, run_suite

__version__ = "0.1.0"
