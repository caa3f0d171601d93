"""Two-parameter pseudo-boson families as exact polynomial-times-Gaussian objects."""

__version__ = "0.1.0"

from .core import (
    CoefficientSet,
    GaussPolyFn,
    LadderCoefficients,
    ParameterPoint,
    admissibility,
    apply_ladder,
    coefficient_set,
    gaussian_moment,
    inner_product,
    make_parameters,
)
from .errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    InadmissibleError,
    SingularError,
    ToleranceError,
)
from .family import BiorthogonalFamily, build_family, family_at
from .polynomial import ComplexPolynomial, DyadicPolynomial
from .region import eta_window, scan_region, tanh_conditions

__all__ = [
    "BiorthogonalFamily",
    "CoefficientSet",
    "ComplexPolynomial",
    "ConvergenceError",
    "DegenerateError",
    "DomainError",
    "DyadicPolynomial",
    "GaussPolyFn",
    "InadmissibleError",
    "LadderCoefficients",
    "ParameterPoint",
    "SingularError",
    "ToleranceError",
    "admissibility",
    "apply_ladder",
    "build_family",
    "coefficient_set",
    "eta_window",
    "family_at",
    "gaussian_moment",
    "inner_product",
    "make_parameters",
    "scan_region",
    "tanh_conditions",
]
