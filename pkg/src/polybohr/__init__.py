"""Refined Bohr-type inequalities on the unit polydisk: radius equations,
functionals of truncated multivariate power series, and numerical checks."""

from .extremal import ExtremalFunction, closed_eval, profile_coefficients, to_series
from .functionals import (
    EvalContext, FunctionalValue, evaluate_functional, majorant_sum, refined_sum,
)
from .multiindex import CapacityError, enumerate_degree, multinomial
from .radii import Family, NoRootError, RadiusEquation, RootCertificate, radius_in_r, solve
from .series import TailBound, TruncatedSeries
from .verify import VerificationReport, check_below, check_sharp

__version__ = "0.1.0"
