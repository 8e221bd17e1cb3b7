"""Anomalous magnetic moments and Aharonov-Casher phases in the plane.

The package evaluates the dimensionless one-loop magnetic-moment form
factors of two 2+1-dimensional models (a gauge model with an optional
Chern-Simons regulator mass, and a two-spinor Yukawa model) and the
topological phases that such moments produce for spinor and scalar
particles circling line charges.
"""

from .errors import (
    AcMomentError,
    DomainError,
    EndpointMismatch,
    InfraredDivergent,
    NonConvergence,
    NonFiniteIntegrand,
    ParseError,
    PointOnPath,
    SingularPath,
    SingularPoint,
)
from .field import FieldConfig, LineCharge, dual_field, efield
from .formfactor import (
    FormFactorResult,
    ScanResult,
    ScanRow,
    SusyParams,
    YukawaParams,
    cs_mass_scan,
    ir_scan,
    reduction_check,
    reduction_integrand_deviation,
    susy_form_factor,
    susy_integrand,
    susy_q0_reference,
    yukawa_form_factor,
    yukawa_integrand,
)
from .phase import (
    GAMMA_CONVENTION_S,
    FringeShift,
    PhaseResult,
    PolylinePath,
    Species,
    ac_phase,
    fringe_shift,
    line_integral_dual,
    winding_number,
)
from .quadrature import QuadratureResult, integrate_triangle, mc_integrate_triangle

__version__ = "0.1.0"

__all__ = [
    "AcMomentError",
    "DomainError",
    "EndpointMismatch",
    "FieldConfig",
    "FormFactorResult",
    "FringeShift",
    "GAMMA_CONVENTION_S",
    "InfraredDivergent",
    "LineCharge",
    "NonConvergence",
    "NonFiniteIntegrand",
    "ParseError",
    "PhaseResult",
    "PointOnPath",
    "PolylinePath",
    "QuadratureResult",
    "ScanResult",
    "ScanRow",
    "SingularPath",
    "SingularPoint",
    "Species",
    "SusyParams",
    "YukawaParams",
    "ac_phase",
    "cs_mass_scan",
    "dual_field",
    "efield",
    "fringe_shift",
    "integrate_triangle",
    "ir_scan",
    "line_integral_dual",
    "mc_integrate_triangle",
    "reduction_check",
    "reduction_integrand_deviation",
    "susy_form_factor",
    "susy_integrand",
    "susy_q0_reference",
    "winding_number",
    "yukawa_form_factor",
    "yukawa_integrand",
    "__version__",
]
