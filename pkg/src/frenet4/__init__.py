"""Frenet apparatus, curve reconstruction and slant-helix tests for curves in R^4."""

from .curve_core import (
    CurveSample,
    FrenetApparatus,
    arclength_reparam,
    derivatives,
    frenet_apparatus,
    gram_schmidt4,
    wcurve_points,
)
from .errors import *  # noqa: F401,F403
from .frenet_ode import (
    CurvatureProfile,
    ReconstructionResult,
    builtin_profile,
    frenet_matrix,
    reconstruct_curve,
    wcurve_curvatures,
)
from .quadrature import SampledFunction, antiderivative, derivative, fit_integration_constant
from .slant_helix import (
    AxisCoefficients,
    SlantDiagnostics,
    Verdict,
    b2_slant_invariant,
    coefficients,
    cylindrical_helix_invariant,
    detect_slant,
    f_function_check,
    integral_characterization_check,
    slant_invariant,
    synthesize_slant_profile,
)

__version__ = "0.1.0"
