"""Harmonic functions on the unit disk from boundary data of bounded variation."""

__version__ = "0.1.0"

from .boundary import LimitReport, StolzSector, estimate_limit, sample_path, verify_sector_bound
from .errors import AccuracyError, DomainError, ParameterError, SpecError
from .family import (
    CoefficientSequence,
    SeriesSolution,
    basis_angle,
    evaluate_series,
    independence_witness,
    singular_boundary_data,
)
from .hp import MeanProfile, hp_diagnostic, integral_mean
from .measure import (
    AngularMeasure,
    Atom,
    CantorEval,
    cantor_eval,
    cantor_function,
    derivative_a_e,
    stieltjes_integrate,
    total_variation,
)
from .poisson import (
    DiskPoint,
    SolutionEvaluator,
    atomic_closed_form,
    evaluate_solution,
    mean_value_residual,
    poisson_kernel,
)
