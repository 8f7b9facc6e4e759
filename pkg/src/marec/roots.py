"""Roots of MA polynomials, invertibility, and the invertible sibling process."""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

import numpy as np

from .core import MAModel, NumericalError

BOUNDARY_TOL = 1e-8


class Invertibility(str, Enum):
    INVERTIBLE = "invertible"
    NONINVERTIBLE = "noninvertible"
    BOUNDARY = "boundary"


class Classification(NamedTuple):
    status: Invertibility
    min_modulus: float
    min_inside_modulus: float  # inf when no root is strictly inside the unit circle


def _trimmed(psi: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(psi)
    return psi[: nz[-1] + 1] if nz.size else psi[:0]


def ma_roots(model: MAModel) -> np.ndarray:
    """Roots of 1 + psi_1 z + ... + psi_q z^q.

    Trailing zero coefficients are dropped first. Roots come from the
    eigenvalues of the polynomial's companion matrix followed by one Newton
    step each. Returns an empty array for white noise.
    """
    c = _trimmed(model.psi)
    d = c.size
    if d == 0:
        return np.zeros(0, dtype=complex)
    # monic form in z: z^d + (psi_{d-1}/psi_d) z^{d-1} + ... + 1/psi_d
    coeffs = np.concatenate(([1.0], c))  # ascending powers
    monic = coeffs[:-1] / coeffs[-1]
    C = np.zeros((d, d))
    C[0, :] = -monic[::-1]
    if d > 1:
        C[1:, :-1] = np.eye(d - 1)
    z = np.linalg.eigvals(C).astype(complex)

    desc = coeffs[::-1]
    ddesc = np.polyder(desc)
    for idx, r in enumerate(z):
        f = np.polyval(desc, r)
        df = np.polyval(ddesc, r)
        if df != 0:
            step = f / df
            cand = r - step
            if abs(np.polyval(desc, cand)) <= abs(f):
                z[idx] = cand
    return z


def classify_invertibility(model: MAModel, tol: float = BOUNDARY_TOL) -> Classification:
    roots = ma_roots(model)
    if roots.size == 0:
        return Classification(Invertibility.INVERTIBLE, np.inf, np.inf)
    mod = np.abs(roots)
    inside = mod[mod < 1 - tol]
    min_inside = float(inside.min()) if inside.size else np.inf
    if np.any(np.abs(mod - 1) <= tol):
        status = Invertibility.BOUNDARY
    elif inside.size:
        status = Invertibility.NONINVERTIBLE
    else:
        status = Invertibility.INVERTIBLE
    return Classification(status, float(mod.min()), min_inside)


def _poly_from_roots(roots: np.ndarray) -> np.ndarray:
    """Ascending coefficients of prod (1 - z / r), constant term 1."""
    poly = np.array([1.0 + 0j])
    for r in roots:
        poly = np.convolve(poly, np.array([1.0, -1.0 / r]))
    return poly


def invertible_sibling(model: MAModel) -> MAModel:
    """MA model with the same autocovariances and no roots inside the unit circle.

    Every root r with |r| < 1 is replaced by 1/conj(r). The innovation variance
    is multiplied by prod |r|^-2 over the flipped roots, which keeps the
    autocovariance function unchanged.
    """
    cls = classify_invertibility(model)
    if cls.status is Invertibility.BOUNDARY:
        raise NumericalError("MA polynomial has a root on the unit circle; no invertible sibling exists")
    if cls.status is Invertibility.INVERTIBLE:
        return model

    roots = ma_roots(model)
    inside = np.abs(roots) < 1
    flipped = np.where(inside, 1.0 / np.conj(roots), roots)
    poly = _poly_from_roots(flipped)
    if np.max(np.abs(poly.imag)) > 1e-8 * max(1.0, np.max(np.abs(poly.real))):
        raise NumericalError("flipped root set is not conjugate-symmetric")
    psi = np.zeros(model.q)
    psi[: poly.size - 1] = poly.real[1:]
    scale = float(np.prod(np.abs(roots[inside]) ** -2))
    return MAModel(psi, model.sigma2 * scale)


def ma_autocovariance(model: MAModel, max_lag: int | None = None) -> np.ndarray:
    """gamma_h = sigma2 * sum_j psi_j psi_{j+h}, h = 0..max_lag (psi_0 = 1)."""
    full = np.concatenate(([1.0], model.psi))
    q = model.q
    if max_lag is None:
        max_lag = q
    out = np.zeros(max_lag + 1)
    for h in range(min(max_lag, q) + 1):
        out[h] = model.sigma2 * float(np.dot(full[: full.size - h], full[h:]))
    return out


def ma2_in_triangle(psi1: float, psi2: float) -> bool:
    """MA(2) invertibility region: psi2 + psi1 > -1, psi2 - psi1 > -1, |psi2| < 1."""
    return psi2 + psi1 > -1 and psi2 - psi1 > -1 and abs(psi2) < 1
