"""Labour-force driven models of inflation and unemployment.

Series handling, unit-root and cointegration tests, cumulative-curve
calibration of piecewise lagged linear laws, fit metrics and scenario
projections.
"""

from .cointegration import EngleGrangerReport, JohansenReport, engle_granger, johansen
from .errors import (
    ConfigError,
    DataError,
    DegenerateSeriesError,
    LfInflationError,
    NumericError,
    RankDeficientError,
    SeriesWarning,
    SingularMatrixError,
)
from .evaluate import EvaluationReport, evaluate, naive_rmsfe, r_squared, relative_cumulative_error, rmsfe
from .forecast import ForecastResult, ForecastScenario, project
from .ingest import DataCatalog, ingest, load_catalog
from .lagmodel import (
    CalibrationConfig,
    GeneralizedModel,
    GeneralizedSegment,
    Grid,
    PiecewiseLagModel,
    Segment,
    calibrate,
    calibrate_generalized,
    load_model,
    predict_generalized,
    predict_piecewise,
    save_model,
)
from .regress import OlsFit, long_run_variance, ols
from .series import Frequency, Period, Series, align, cumulative, diff, growth_rate, lag_shift, moving_average
from .unitroot import UnitRootResult, UnitRootSpec, adf_test, dfgls_test, pp_test, run_test

__version__ = "0.1.0"
