"""Sample paths under an exactly empty presample (no burn-in).

Innovations are drawn from ``numpy.random.Generator(PCG64(seed))`` via
``standard_normal`` (numpy's ziggurat sampler), scaled by sqrt(sigma2) or by
the symmetric square root of Sigma. Fixing the seed fixes the path.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.signal import lfilter

from .core import (
    OVERFLOW_LIMIT,
    ARModel,
    MAModel,
    PartialResultError,
    TimeSeries,
    ValidationError,
    VMAModel,
)

MAX_SEED = 2**64 - 1


def _rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _check_n_obs(n_obs) -> int:
    n = int(n_obs)
    if n < 1:
        raise ValidationError(f"n_obs must be positive, got {n_obs}")
    return n


def draw_innovations(n_obs: int, seed: int, sigma2: float = 1.0) -> np.ndarray:
    return np.sqrt(sigma2) * _rng(seed).standard_normal(_check_n_obs(n_obs))


def _innovations(n, seed, sigma2, innovations):
    if innovations is None:
        if seed is None:
            raise ValidationError("either seed or innovations is required")
        return draw_innovations(n, seed, sigma2)
    eps = np.asarray(innovations, dtype=float)
    if eps.shape != (n,) or not np.all(np.isfinite(eps)):
        raise ValidationError(f"innovations must be {n} finite values")
    return eps


def simulate_ma(
    model: MAModel,
    n_obs: int,
    seed: Optional[int] = None,
    innovations: Optional[np.ndarray] = None,
) -> TimeSeries:
    """y_t = e_t + sum_j psi_j e_{t-j}, with e_s = 0 for s <= 0.

    ``innovations`` replaces the random draw (already scaled; ``sigma2`` is
    ignored then).
    """
    n = _check_n_obs(n_obs)
    eps = _innovations(n, seed, model.sigma2, innovations)
    y = eps.copy()
    for j, c in enumerate(model.psi, start=1):
        if j >= n:
            break
        y[j:] += c * eps[:-j]
    return TimeSeries(y)


def simulate_ar(
    model: ARModel,
    n_obs: int,
    seed: Optional[int] = None,
    innovations: Optional[np.ndarray] = None,
) -> TimeSeries:
    """y_t = sum_i phi_i y_{t-i} + e_t with y_s = 0 for s <= 0. No stability check."""
    n = _check_n_obs(n_obs)
    eps = _innovations(n, seed, model.sigma2, innovations)
    with np.errstate(over="ignore", invalid="ignore"):
        y = lfilter([1.0], np.concatenate(([1.0], -model.phi)), eps)
    bad = ~np.isfinite(y) | (np.abs(y) > OVERFLOW_LIMIT)
    if bad.any():
        first = int(np.argmax(bad))
        raise PartialResultError(f"AR path overflowed at t={first + 1}", y[:first].copy())
    return TimeSeries(y)


def _sym_sqrt(sigma: np.ndarray) -> np.ndarray:
    if sigma.shape == (1, 1):
        return np.sqrt(sigma)
    w, v = np.linalg.eigh(sigma)
    return (v * np.sqrt(w)) @ v.T


def simulate_vma(
    model: VMAModel,
    n_obs: int,
    seed: Optional[int] = None,
    innovations: Optional[np.ndarray] = None,
) -> TimeSeries:
    """Vector MA with zero presample; innovations ~ N(0, Sigma)."""
    n = _check_n_obs(n_obs)
    k = model.k
    if innovations is None:
        if seed is None:
            raise ValidationError("either seed or innovations is required")
        z = _rng(seed).standard_normal((n, k))
        eps = z @ _sym_sqrt(model.sigma).T
    else:
        eps = np.asarray(innovations, dtype=float).reshape(n, k)
        if not np.all(np.isfinite(eps)):
            raise ValidationError("innovations contain non-finite values")
    y = eps.copy()
    for j, Psi in enumerate(model.psi, start=1):
        if j >= n:
            break
        y[j:] += eps[:-j] @ Psi.T
    return TimeSeries(y)
