"""Least squares toolkit comparing pseudoinverse and gradient descent solvers."""

from .bench import BenchRecord, StatsSummary, SweepGrid, describe, group_means, run_cell, run_sweep
from .datagen import ProblemSpec, SyntheticProblem, geometric_spectrum, make_problem
from .dataset import Dataset, load_csv_dataset
from .errors import (
    ConfigError,
    DegenerateInputError,
    LsqbenchError,
    NumericalError,
    ParseError,
    SchemaError,
    ShapeError,
    SingularMatrixError,
)
from .metrics import coef_error, measured_cond_factor, mse
from .solvers import FitResult, GdConfig, pinv, solve_gd, solve_normal_equations, solve_pinv

__version__ = "0.1.0"
