"""Least-squares primitives: OLS, Yule-Walker and Theil's f-class (mixed) estimator.

All functions are generic over the design matrix and know nothing about MA
sign conventions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .core import NumericalError, SingularDesignError, ValidationError

COND_LIMIT = 1e12


@dataclass(frozen=True)
class OlsFit:
    beta: np.ndarray
    resid_var: float
    cov_diag: np.ndarray
    cond: float  # condition number of X'X
    resid: np.ndarray


def ols(X, y) -> OlsFit:
    """Least squares via a thin QR factorization of X.

    Raises SingularDesignError when cond(X'X) exceeds ``COND_LIMIT``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValidationError(f"shape mismatch: X {X.shape}, y {y.shape}")
    n, m = X.shape
    if not n > m >= 1:
        raise ValidationError(f"OLS needs n > m >= 1, got n={n}, m={m}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValidationError("non-finite values in regression data")

    Q, R = np.linalg.qr(X, mode="reduced")
    sv = np.linalg.svd(R, compute_uv=False)
    cond = np.inf if sv[-1] == 0 else float((sv[0] / sv[-1]) ** 2)
    if not cond <= COND_LIMIT:
        raise SingularDesignError("design matrix is rank deficient", cond)

    beta = solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    resid_var = float(resid @ resid) / (n - m)
    Rinv = solve_triangular(R, np.eye(m))
    # (X'X)^-1 = R^-1 R^-T, so its diagonal is the row sums of squares of R^-1
    cov_diag = resid_var * np.sum(Rinv**2, axis=1)
    return OlsFit(beta, resid_var, cov_diag, max(cond, 1.0), resid)


def autocovariances(x, max_lag: int) -> np.ndarray:
    """Biased sample autocovariances (1/N) sum_t x_t x_{t+h}, no mean removal."""
    x = np.asarray(x, dtype=float)
    N = x.size
    return np.array([float(x[: N - h] @ x[h:]) / N for h in range(max_lag + 1)])


def levinson_durbin(r: np.ndarray, order: int) -> np.ndarray:
    """Solve the symmetric Toeplitz system toeplitz(r[:order]) a = r[1:order+1].

    Raises NumericalError when the prediction-error variance turns nonpositive.
    """
    a = np.zeros(order)
    err = r[0]
    if err <= 0:
        raise NumericalError("nonpositive zero-lag autocovariance")
    for m in range(order):
        k = (r[m + 1] - a[:m] @ r[m:0:-1]) / err
        a[:m] = a[:m] - k * a[:m][::-1]
        a[m] = k
        err *= 1.0 - k * k
        if not err > 0:
            raise NumericalError("Levinson-Durbin prediction error became nonpositive")
    return a


def yule_walker(series, order: int) -> np.ndarray:
    """AR(order) coefficients from the Yule-Walker equations."""
    x = np.asarray(series, dtype=float).ravel()
    order = int(order)
    if order < 1 or x.size <= order:
        raise ValidationError(f"need 1 <= order < len(series), got order={order}, len={x.size}")
    r = autocovariances(x, order)
    if r[0] <= 0:
        raise SingularDesignError("series has zero autocovariance", np.inf)
    try:
        return levinson_durbin(r, order)
    except NumericalError:
        idx = np.arange(order)
        T = r[np.abs(idx[:, None] - idx[None, :])]
        cond = np.linalg.cond(T)
        if not cond <= COND_LIMIT:
            raise SingularDesignError("Toeplitz system is singular", cond) from None
        return np.linalg.solve(T, r[1:])


def theil_f_class(X, y, R, r_vec, prior_var, sigma2):
    """Mixed estimator with stochastic restrictions R beta = r_vec + e, Var(e) = diag(prior_var).

    Returns ``(beta, var_diag)`` where

        A = X'X / sigma2 + R' V^-1 R
        beta = A^-1 (X'y / sigma2 + R' V^-1 r_vec)
        var_diag = diag(A^-1)

    The system is solved after multiplying through by sigma2, so a tiny
    sigma2 does not overflow, and after symmetric diagonal scaling.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    R = np.atleast_2d(np.asarray(R, dtype=float))
    r_vec = np.atleast_1d(np.asarray(r_vec, dtype=float))
    prior_var = np.atleast_1d(np.asarray(prior_var, dtype=float))
    sigma2 = float(sigma2)
    m = X.shape[1]
    if R.shape[1] != m or r_vec.shape != (R.shape[0],) or prior_var.shape != r_vec.shape:
        raise ValidationError("restriction shapes do not match the design")
    if not np.all(prior_var > 0):
        raise ValidationError("prior variances must be positive")
    if not sigma2 > 0:
        raise ValidationError("sigma2 must be positive")

    w = sigma2 / prior_var
    A = X.T @ X + R.T @ (w[:, None] * R)
    b = X.T @ y + R.T @ (w * r_vec)
    # Jacobi scaling; a near-dogmatic prior inflates one diagonal entry but
    # does not make the problem ill-posed
    d = np.sqrt(np.diag(A))
    if not np.all(d > 0):
        raise SingularDesignError("f-class normal matrix has an empty direction", np.inf)
    As = A / d[:, None] / d[None, :]
    cond = np.linalg.cond(As)
    if not cond <= COND_LIMIT:
        raise SingularDesignError("f-class normal matrix is singular", cond)
    beta = np.linalg.solve(As, b / d) / d
    var_diag = sigma2 * np.diag(np.linalg.inv(As)) / d**2
    return beta, var_diag
