"""Domain types and validation shared across the package.

Sign conventions, fixed everywhere:

* AR:  y_t = sum_i phi_i y_{t-i} + e_t
* MA:  y_t = e_t + sum_j psi_j e_{t-j}   (psi_0 = 1, never stored)

Multivariate models use the same conventions with k x k matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np


class MarecError(Exception):
    """Base class for all package errors."""


class ValidationError(MarecError, ValueError):
    """Raised for malformed or non-finite inputs."""


class NumericalError(MarecError):
    """Raised when a computation cannot produce a usable result."""


class SingularDesignError(NumericalError):
    """A design or normal matrix is (numerically) singular."""

    def __init__(self, message: str, cond: float = float("inf")):
        super().__init__(f"{message} (condition number {cond:.3g})")
        self.cond = cond


class PartialResultError(NumericalError):
    """A recursion overflowed; ``partial`` holds the prefix computed so far."""

    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial


OVERFLOW_LIMIT = 1e300


def _as_finite_vector(values, name: str, min_len: int = 1) -> np.ndarray:
    arr = np.array(values, dtype=float, ndmin=1)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_len:
        raise ValidationError(f"{name} needs at least {min_len} entries")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


def _as_matrix_stack(mats, name: str) -> np.ndarray:
    arr = np.array(mats, dtype=float)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2] or arr.shape[0] < 1:
        raise ValidationError(
            f"{name} must be a non-empty sequence of square matrices, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


def _check_sigma(sigma, k: int) -> np.ndarray:
    if sigma is None:
        sigma = np.eye(k)
    sigma = np.array(sigma, dtype=float, ndmin=2)
    if sigma.shape != (k, k):
        raise ValidationError(f"Sigma must be {k}x{k}, got {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise ValidationError("Sigma contains non-finite values")
    if np.max(np.abs(sigma - sigma.T), initial=0.0) > 1e-12:
        raise ValidationError("Sigma is not symmetric")
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise ValidationError("Sigma is not positive definite") from None
    sigma.setflags(write=False)
    return sigma


def _check_sigma2(sigma2) -> float:
    sigma2 = float(sigma2)
    if not np.isfinite(sigma2) or sigma2 <= 0:
        raise ValidationError(f"sigma2 must be finite and positive, got {sigma2}")
    return sigma2


@dataclass(frozen=True)
class TimeSeries:
    """Observed series; ``values`` has shape (T,) for dim 1 and (T, k) otherwise."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim == 2 and arr.shape[1] == 1:
            arr = arr[:, 0]
        if arr.ndim not in (1, 2) or arr.shape[0] < 1 or (arr.ndim == 2 and arr.shape[1] < 1):
            raise ValidationError(f"series must be (T,) or (T, k) with T >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("series contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def dim(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    def __len__(self) -> int:
        return self.values.shape[0]

    def as_matrix(self) -> np.ndarray:
        """Values as a (T, k) array, k = 1 for univariate series."""
        return self.values.reshape(len(self), self.dim)


@dataclass(frozen=True)
class MAModel:
    psi: np.ndarray
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "psi", _as_finite_vector(self.psi, "psi"))
        object.__setattr__(self, "sigma2", _check_sigma2(self.sigma2))

    @property
    def q(self) -> int:
        return self.psi.size


@dataclass(frozen=True)
class ARModel:
    phi: np.ndarray
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "phi", _as_finite_vector(self.phi, "phi"))
        object.__setattr__(self, "sigma2", _check_sigma2(self.sigma2))

    @property
    def p(self) -> int:
        return self.phi.size


@dataclass(frozen=True)
class VMAModel:
    """k-dimensional MA(q); ``psi`` has shape (q, k, k)."""

    psi: np.ndarray
    sigma: Optional[np.ndarray] = None

    def __post_init__(self):
        psi = _as_matrix_stack(self.psi, "psi")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "sigma", _check_sigma(self.sigma, psi.shape[1]))

    @property
    def k(self) -> int:
        return self.psi.shape[1]

    @property
    def q(self) -> int:
        return self.psi.shape[0]


@dataclass(frozen=True)
class VARModel:
    """k-dimensional AR(p); ``phi`` has shape (p, k, k)."""

    phi: np.ndarray
    sigma: Optional[np.ndarray] = None

    def __post_init__(self):
        phi = _as_matrix_stack(self.phi, "phi")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "sigma", _check_sigma(self.sigma, phi.shape[1]))

    @property
    def k(self) -> int:
        return self.phi.shape[1]

    @property
    def p(self) -> int:
        return self.phi.shape[0]


@dataclass(frozen=True)
class Stage1Fit:
    """Long AR/VAR fitted by OLS.

    ``cov_diag`` has the shape of the coefficients: (l,) for AR, (l, k, k)
    for VAR where ``cov_diag[i, r, c]`` is the variance of ``phi[i, r, c]``.
    ``resid_var`` is a scalar for AR and a length-k vector for VAR.
    """

    model: Union[ARModel, VARModel]
    cov_diag: np.ndarray
    resid_var: Union[float, np.ndarray]

    @property
    def l(self) -> int:  # noqa: E743
        return self.model.p

    @property
    def coefficients(self) -> np.ndarray:
        return self.model.phi


@dataclass(frozen=True)
class EstimateReport:
    method: str
    psi_hat: np.ndarray
    stage1: Stage1Fit
    stderr: Optional[np.ndarray] = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in ("durbin", "restricted-ols", "unrestricted-ols"):
            raise ValidationError(f"unknown method tag {self.method!r}")
        if self.stderr is not None and np.any(np.asarray(self.stderr) < 0):
            raise ValidationError("stderr must be nonnegative")

    @property
    def q(self) -> int:
        return np.asarray(self.psi_hat).shape[0]

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "q": self.q,
            "l": self.stage1.l,
            "psi_hat": np.asarray(self.psi_hat).tolist(),
            "stderr": None if self.stderr is None else np.asarray(self.stderr).tolist(),
            "stage1_resid_var": np.asarray(self.stage1.resid_var).tolist(),
        }
        out.update({k: (v.tolist() if isinstance(v, np.ndarray) else v)
                    for k, v in self.diagnostics.items()})
        return out


def companion_from_ar(model: ARModel) -> np.ndarray:
    """Companion matrix F: phi on the first row, shifted identity below."""
    p = model.p
    F = np.zeros((p, p))
    F[0, :] = model.phi
    if p > 1:
        F[1:, :-1] = np.eye(p - 1)
    return F
