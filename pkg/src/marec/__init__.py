"""Estimation of MA and VMA processes from the AR-representation recursion."""

from .core import (
    ARModel,
    EstimateReport,
    MAModel,
    MarecError,
    NumericalError,
    PartialResultError,
    SingularDesignError,
    Stage1Fit,
    TimeSeries,
    ValidationError,
    VARModel,
    VMAModel,
    companion_from_ar,
)
from .estimators import (
    durbin,
    estimate,
    fit_ar_ols,
    fit_var_ols,
    restricted_ols,
    restricted_ols_multivariate,
    suggest_ar_order,
    unrestricted_ols,
)
from .recursion import ar_to_ma, companion_power_column, ma_to_ar, var_to_vma, vma_to_var
from .roots import classify_invertibility, invertible_sibling, ma_roots
from .simulate import simulate_ar, simulate_ma, simulate_vma

__version__ = "0.1.0"
