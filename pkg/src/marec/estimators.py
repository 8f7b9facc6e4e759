"""Two-stage MA/VMA estimators built on a long AR/VAR fit.

Stage 1 fits a long autoregression by OLS. Stage 2 exploits the fact that
the AR-representation coefficients of an MA(q) obey

    phi_j = -sum_{i=1}^q psi_i phi_{j-i}        for j > q

so an autoregression of the coefficient sequence on itself estimates -psi.
``durbin`` solves that autoregression with Yule-Walker over the whole
coefficient sequence; ``restricted_ols`` drops the first q responses, runs OLS, and adds
the stochastic restriction psi_1 = phi_1 through the f-class estimator.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .core import (
    ARModel,
    EstimateReport,
    Stage1Fit,
    TimeSeries,
    ValidationError,
    VARModel,
)
from .linreg import autocovariances, ols, theil_f_class, yule_walker

_TINY = np.finfo(float).tiny


def _as_series(series) -> TimeSeries:
    return series if isinstance(series, TimeSeries) else TimeSeries(series)


def lag_matrix(values: np.ndarray, l: int):
    """Regressors [y_{t-1}', ..., y_{t-l}'] and targets y_t for t = l+1..T.

    ``values`` is (T, k); the design is (T - l) x (k l).
    """
    T, k = values.shape
    X = np.empty((T - l, k * l))
    for i in range(1, l + 1):
        X[:, (i - 1) * k : i * k] = values[l - i : T - i]
    return X, values[l:]


def fit_var_ols(series, l: int) -> Stage1Fit:
    """Equation-by-equation OLS for a no-intercept VAR(l)."""
    series = _as_series(series)
    Y = series.as_matrix()
    T, k = Y.shape
    l = int(l)
    if l < 1:
        raise ValidationError(f"AR order must be >= 1, got {l}")
    if not T - l > k * l:
        raise ValidationError(f"series too short: T={T}, l={l}, k={k} needs T - l > k*l")
    X, targets = lag_matrix(Y, l)
    phi = np.empty((l, k, k))
    cov = np.empty((l, k, k))
    resid_var = np.empty(k)
    for r in range(k):
        fit = ols(X, targets[:, r])
        phi[:, r, :] = fit.beta.reshape(l, k)
        cov[:, r, :] = fit.cov_diag.reshape(l, k)
        resid_var[r] = fit.resid_var
    return Stage1Fit(VARModel(phi), cov, resid_var)


def fit_ar_ols(series, l: int) -> Stage1Fit:
    """Conditional OLS fit of a no-intercept AR(l); the first l observations only act as lags."""
    series = _as_series(series)
    if series.dim != 1:
        raise ValidationError("fit_ar_ols expects a univariate series; use fit_var_ols")
    fit = fit_var_ols(series, l)
    return Stage1Fit(
        ARModel(fit.model.phi[:, 0, 0]), fit.cov_diag[:, 0, 0], float(fit.resid_var[0])
    )


def suggest_ar_order(T: int, cap: Optional[int] = None) -> int:
    """Largest AR order that keeps at least 4 observations per coefficient."""
    T = int(T)
    if T < 8:
        raise ValidationError(f"need at least 8 observations, got {T}")
    order = T // 4
    if cap is not None:
        order = min(order, int(cap))
    return order


# --- stage 2, univariate -------------------------------------------------


def _check_stage2(l: int, q: int, drop: int):
    if q < 1:
        raise ValidationError(f"MA order must be >= 1, got {q}")
    if drop < q:
        raise ValidationError(f"drop ({drop}) must be at least q ({q})")
    if not l - drop > q:
        raise ValidationError(
            f"stage 2 needs more than {q} rows; AR order {l} with {drop} dropped leaves {l - drop}"
        )


def stage2_design(phi: np.ndarray, q: int, drop: Optional[int] = None):
    """Regression of phi_j on (phi_{j-1}, ..., phi_{j-q}) for j = drop+1..l.

    Indices are 1-based in the math and 0-based here: row for j uses
    ``phi[j-2], ..., phi[j-q-1]`` and responds with ``phi[j-1]``.
    """
    phi = np.asarray(phi, dtype=float)
    l = phi.size
    drop = q if drop is None else int(drop)
    _check_stage2(l, q, drop)
    js = np.arange(drop + 1, l + 1)
    X = np.column_stack([phi[js - 1 - i] for i in range(1, q + 1)])
    return X, phi[js - 1]


def _sigma2_floor(v: float) -> float:
    # an exact stage-2 fit has zero residual variance; keep the weighting defined
    return max(float(v), _TINY)


def stage2_restricted(
    phi: np.ndarray, phi1_var: float, q: int, drop: Optional[int] = None
):
    """Restricted stage 2 from given AR coefficients.

    Returns ``(psi_hat, stderr, diagnostics)``. ``phi1_var`` is the variance
    of the first AR coefficient estimate, used as the prior variance of the
    restriction psi_1 = phi_1.
    """
    phi = np.asarray(phi, dtype=float)
    X, y = stage2_design(phi, q, drop)
    pre = ols(X, y)
    sigma2 = _sigma2_floor(pre.resid_var)
    R = np.zeros((1, q))
    R[0, 0] = 1.0
    beta, var_diag = theil_f_class(X, y, R, [-phi[0]], [phi1_var], sigma2)
    diagnostics = {"stage2_resid_var": pre.resid_var, "stage2_cond": pre.cond, "stage2_rows": y.size}
    return -beta, np.sqrt(var_diag), diagnostics


def stage2_durbin(phi: np.ndarray, q: int, unit_lag: bool = False):
    """Yule-Walker AR(q) over the whole AR coefficient sequence; psi_hat = -a.

    By default the sequence is (phi_1, ..., phi_l) with nothing dropped.
    ``unit_lag=True`` instead uses the full lag polynomial
    (1, -phi_1, ..., -phi_l), the classical form, for which the recurrence
    holds from the first lag and the estimator is consistent.
    """
    phi = np.asarray(phi, dtype=float)
    c = np.concatenate(([1.0], -phi)) if unit_lag else phi
    a = yule_walker(c, q)
    r = autocovariances(c, q)
    idx = np.arange(q)
    toeplitz = r[np.abs(idx[:, None] - idx[None, :])]
    diagnostics = {
        "stage2_resid_var": float(r[0] - a @ r[1:]),
        "stage2_cond": float(np.linalg.cond(toeplitz)),
        "stage2_rows": c.size,
    }
    return -a, diagnostics


def _check_orders(q: int, l: int, minimum: int, name: str):
    if q < 1:
        raise ValidationError(f"MA order must be >= 1, got {q}")
    if l < minimum:
        raise ValidationError(f"{name} needs l >= {minimum} for q={q}, got l={l}")


def durbin(series, q: int, l: int, unit_lag: bool = False) -> EstimateReport:
    """Long AR by OLS, then Yule-Walker on the estimated coefficients (see ``stage2_durbin``)."""
    _check_orders(q, l, 2 * q + 1, "durbin")
    stage1 = fit_ar_ols(series, l)
    psi_hat, diag = stage2_durbin(stage1.model.phi, q, unit_lag)
    diag["unit_lag"] = unit_lag
    return EstimateReport("durbin", psi_hat, stage1, None, diag)


def unrestricted_ols(series, q: int, l: int, drop: Optional[int] = None) -> EstimateReport:
    """Plain OLS on the stage-2 system, without the psi_1 restriction."""
    _check_orders(q, l, 3 * q + 1, "unrestricted_ols")
    stage1 = fit_ar_ols(series, l)
    X, y = stage2_design(stage1.model.phi, q, drop)
    fit = ols(X, y)
    diag = {"stage2_resid_var": fit.resid_var, "stage2_cond": fit.cond, "stage2_rows": y.size}
    return EstimateReport("unrestricted-ols", -fit.beta, stage1, np.sqrt(fit.cov_diag), diag)


def restricted_ols(series, q: int, l: int, drop: Optional[int] = None) -> EstimateReport:
    """Long AR by OLS, then f-class stage 2 with the restriction psi_1 = phi_1.

    ``drop`` is the number of leading AR coefficients excluded as responses
    (default q).
    """
    _check_orders(q, l, 3 * q + 1, "restricted_ols")
    stage1 = fit_ar_ols(series, l)
    psi_hat, stderr, diag = stage2_restricted(stage1.model.phi, stage1.cov_diag[0], q, drop)
    return EstimateReport("restricted-ols", psi_hat, stage1, stderr, diag)


# --- stage 2, multivariate -----------------------------------------------


def stage2_design_multivariate(Phi: np.ndarray, q: int, drop: Optional[int] = None):
    """Stacked block system Phi_m = -sum_j Phi_{m-j} Psi_j, m = l down to drop+1.

    Returns ``(X, Y)`` with X of shape (k n, k q) holding blocks
    [Phi_{m-1}, ..., Phi_{m-q}] and Y of shape (k n, k) holding Phi_m; column
    j of Y is the response for column j of the stacked Psi.
    """
    Phi = np.asarray(Phi, dtype=float)
    l, k, _ = Phi.shape
    drop = q if drop is None else int(drop)
    _check_stage2(l, q, drop)
    ms = np.arange(l, drop, -1)
    X = np.concatenate(
        [np.concatenate([Phi[m - 1 - i] for i in range(1, q + 1)], axis=1) for m in ms]
    )
    Y = np.concatenate([Phi[m - 1] for m in ms])
    return X, Y


def stage2_restricted_multivariate(
    Phi: np.ndarray, Phi1_var: np.ndarray, q: int, drop: Optional[int] = None
):
    """Column-by-column f-class estimation of Psi_1..Psi_q.

    ``Phi1_var[r, c]`` is the variance of the estimate of ``Phi_1[r, c]``.
    Returns ``(Psi_hat, stderr, diagnostics)`` with Psi_hat and stderr of
    shape (q, k, k).
    """
    Phi = np.asarray(Phi, dtype=float)
    Phi1_var = np.asarray(Phi1_var, dtype=float)
    l, k, _ = Phi.shape
    if Phi1_var.shape != (k, k):
        raise ValidationError(f"Phi1_var must be {k}x{k}, got {Phi1_var.shape}")
    X, Y = stage2_design_multivariate(Phi, q, drop)
    R = np.zeros((k, k * q))
    R[:, :k] = np.eye(k)
    psi_hat = np.empty((q, k, k))
    stderr = np.empty((q, k, k))
    resid_var = np.empty(k)
    cond = None
    for j in range(k):
        pre = ols(X, Y[:, j])
        cond = pre.cond
        resid_var[j] = pre.resid_var
        beta, var_diag = theil_f_class(
            X, Y[:, j], R, -Phi[0][:, j], Phi1_var[:, j], _sigma2_floor(pre.resid_var)
        )
        psi_hat[:, :, j] = -beta.reshape(q, k)
        stderr[:, :, j] = np.sqrt(var_diag).reshape(q, k)
    diagnostics = {"stage2_resid_var": resid_var, "stage2_cond": cond, "stage2_rows": Y.shape[0]}
    return psi_hat, stderr, diagnostics


def restricted_ols_multivariate(series, q: int, l: int, drop: Optional[int] = None) -> EstimateReport:
    _check_orders(q, l, 3 * q + 1, "restricted_ols_multivariate")
    stage1 = fit_var_ols(series, l)
    psi_hat, stderr, diag = stage2_restricted_multivariate(
        stage1.model.phi, stage1.cov_diag[0], q, drop
    )
    return EstimateReport("restricted-ols", psi_hat, stage1, stderr, diag)


def estimate(series, q: int, l: int, method: str = "restricted-ols") -> EstimateReport:
    """Dispatch by method tag; multivariate series only support restricted-ols."""
    series = _as_series(series)
    if series.dim > 1:
        if method != "restricted-ols":
            raise ValidationError(f"method {method!r} is univariate only")
        return restricted_ols_multivariate(series, q, l)
    try:
        fn = {"durbin": durbin, "restricted-ols": restricted_ols, "unrestricted-ols": unrestricted_ols}[method]
    except KeyError:
        raise ValidationError(f"unknown method {method!r}") from None
    return fn(series, q, l)


__all__ = [
    "durbin",
    "estimate",
    "fit_ar_ols",
    "fit_var_ols",
    "lag_matrix",
    "restricted_ols",
    "restricted_ols_multivariate",
    "stage2_design",
    "stage2_design_multivariate",
    "stage2_durbin",
    "stage2_restricted",
    "stage2_restricted_multivariate",
    "suggest_ar_order",
    "unrestricted_ols",
]
