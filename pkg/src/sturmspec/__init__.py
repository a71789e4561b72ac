"""Eigenvalues of Sturm-Liouville problems whose boundary conditions are
affine in the spectral parameter, with a Hele-Shaw stability application."""

from .core import (BoundaryParams, CoefficientSet, ConstantFunction,
                   LinearFunction, ShotResult, SLProblem, SolverSettings,
                   count_zeros, eigenfunction_samples, make_problem, shoot)
from .errors import (ConfigError, DomainError, EvaluationError,
                     IntegrationError, PoleError, RegimeError, SearchError,
                     SeriesError, SturmSpecError, TransformError,
                     ValidationError)
from .spectrum import (AuxSpectrum, Branch, BranchIndex, EigenvalueRecord,
                       RegimeCase, aux_spectrum, branches, characteristic,
                       classify_case, find_in_branch, full_spectrum, h1, h2,
                       verify_interlacing)

__version__ = "0.1.0"

__all__ = [
    "BoundaryParams", "CoefficientSet", "ConstantFunction", "LinearFunction",
    "ShotResult", "SLProblem", "SolverSettings", "count_zeros",
    "eigenfunction_samples", "make_problem", "shoot", "AuxSpectrum",
    "Branch", "BranchIndex", "EigenvalueRecord", "RegimeCase",
    "aux_spectrum", "branches", "characteristic", "classify_case",
    "find_in_branch", "full_spectrum", "h1", "h2", "verify_interlacing",
    "SturmSpecError", "ValidationError", "DomainError", "IntegrationError",
    "EvaluationError", "PoleError", "SearchError", "RegimeError",
    "SeriesError", "TransformError", "ConfigError",
]
