"""Coefficient recursions between MA parameters and their AR representation.

None of these functions check stability or invertibility. The recursions
hold for explosive inputs too, as long as the presample is zero. Only
floating point overflow is reported, via :class:`PartialResultError`.
"""

from __future__ import annotations

import numpy as np

from .core import (
    OVERFLOW_LIMIT,
    ARModel,
    MAModel,
    PartialResultError,
    ValidationError,
    VARModel,
    VMAModel,
    companion_from_ar,
)


def _check_n(n_terms) -> int:
    n = int(n_terms)
    if n < 1 or n != n_terms:
        raise ValidationError(f"n_terms must be a positive integer, got {n_terms}")
    return n


_quiet = np.errstate(over="ignore", invalid="ignore")


def _overflowed(value) -> bool:
    return not np.all(np.isfinite(value)) or np.max(np.abs(value)) > OVERFLOW_LIMIT


@_quiet
def ar_to_ma(model: ARModel, n_terms: int) -> np.ndarray:
    """MA representation psi_1..psi_n of an AR(p) model.

    psi_j = phi_j [j <= p] + sum_{i=1}^{min(j-1, p)} phi_i psi_{j-i}
    """
    n = _check_n(n_terms)
    phi = model.phi
    p = phi.size
    psi = np.zeros(n + 1)
    psi[0] = 1.0
    for j in range(1, n + 1):
        # psi_0 = 1 supplies the phi_j term; summation order matches var_to_vma
        acc = 0.0
        for i in range(1, min(j, p) + 1):
            acc += phi[i - 1] * psi[j - i]
        if _overflowed(acc):
            raise PartialResultError(
                f"AR->MA recursion overflowed at term {j}", psi[1:j].copy()
            )
        psi[j] = acc
    return psi[1:]


@_quiet
def ma_to_ar(model: MAModel, n_terms: int) -> np.ndarray:
    """AR representation phi_1..phi_n of an MA(q) model.

    phi_j = psi_j [j <= q] - sum_{i=1}^{min(j-1, q)} psi_i phi_{j-i}
    """
    n = _check_n(n_terms)
    psi = model.psi
    q = psi.size
    phi = np.zeros(n + 1)
    for j in range(1, n + 1):
        acc = psi[j - 1] if j <= q else 0.0
        for i in range(1, min(j - 1, q) + 1):
            acc -= phi[j - i] * psi[i - 1]
        if _overflowed(acc):
            raise PartialResultError(
                f"MA->AR recursion overflowed at term {j}", phi[1:j].copy()
            )
        phi[j] = acc
    return phi[1:]


def companion_power_column(model: ARModel, j: int) -> np.ndarray:
    """First column of F**j by repeated dense multiplication.

    Deliberately naive: this is the oracle the recursions are checked against.
    """
    if j < 0 or int(j) != j:
        raise ValidationError(f"j must be a nonnegative integer, got {j}")
    F = companion_from_ar(model)
    P = np.eye(model.p)
    for _ in range(int(j)):
        P = F @ P
    return P[:, 0].copy()


def _check_square_stack(stack: np.ndarray) -> int:
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValidationError(f"expected (n, k, k) coefficient stack, got {stack.shape}")
    return stack.shape[1]


@_quiet
def var_to_vma(model: VARModel, n_terms: int) -> np.ndarray:
    """Psi_1..Psi_n with Psi_j = Phi_j [j <= p] + sum_i Phi_i Psi_{j-i}."""
    n = _check_n(n_terms)
    phi = model.phi
    k = _check_square_stack(phi)
    p = phi.shape[0]
    psi = np.zeros((n + 1, k, k))
    psi[0] = np.eye(k)
    for j in range(1, n + 1):
        acc = np.zeros((k, k))
        for i in range(1, min(j, p) + 1):
            acc = acc + phi[i - 1] @ psi[j - i]
        if _overflowed(acc):
            raise PartialResultError(
                f"VAR->VMA recursion overflowed at term {j}", psi[1:j].copy()
            )
        psi[j] = acc
    return psi[1:]


@_quiet
def vma_to_var(model: VMAModel, n_terms: int) -> np.ndarray:
    """Phi_1..Phi_n with Phi_m = Psi_m [m <= q] - sum_j Phi_{m-j} Psi_j."""
    n = _check_n(n_terms)
    psi = model.psi
    k = _check_square_stack(psi)
    q = psi.shape[0]
    phi = np.zeros((n + 1, k, k))
    for m in range(1, n + 1):
        acc = psi[m - 1].copy() if m <= q else np.zeros((k, k))
        for j in range(1, min(m - 1, q) + 1):
            acc = acc - phi[m - j] @ psi[j - 1]
        if _overflowed(acc):
            raise PartialResultError(
                f"VMA->VAR recursion overflowed at term {m}", phi[1:m].copy()
            )
        phi[m] = acc
    return phi[1:]
