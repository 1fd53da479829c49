"""Recover the clock (subordinator) density of a time-changed Brownian motion
from samples of the observed process."""

from .contour import ContourPoint, FrequencyGrid, cf_argument_map, contour_map, extended_gaussian_cf
from .data import estimate_theta, load_increments, load_log_prices
from .ecf import CfEstimate, analytic_transformed_cf, empirical_transformed_cf
from .errors import (
    DataError,
    DomainError,
    EstimatorOverflowError,
    InversionIntegrityError,
    NumericIntegrityError,
    ParameterError,
    TimeChangeError,
    UnsupportedDensityError,
)
from .inversion import DensityEstimate, invert_cf, time_change_transform, variance_mixture_transform
from .models import (
    Deterministic,
    Gamma,
    IncrementPanel,
    InverseGaussian,
    TcbmSpec,
    sample_subordinator_increment,
    sample_tcbm_increments,
    subordinator_cf,
    subordinator_density,
    subordinator_laplace,
    tcbm_cf,
)
from .validation import ErrorReport, density_distance, gaussian_cf_quadrature_check, round_trip_report

__version__ = "0.1.0"
