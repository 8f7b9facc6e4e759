import numpy as np
import pytest

from marec.core import ARModel, MAModel, ValidationError, VMAModel
from marec.estimators import (
    durbin,
    estimate,
    fit_ar_ols,
    fit_var_ols,
    restricted_ols,
    stage2_design,
    stage2_design_multivariate,
    stage2_durbin,
    stage2_restricted,
    stage2_restricted_multivariate,
    suggest_ar_order,
    unrestricted_ols,
)
from marec.recursion import ma_to_ar, vma_to_var
from marec.simulate import simulate_ar, simulate_ma, simulate_vma


# --- stage 1 ---------------------------------------------------------------


def test_fit_ar_ols_noiseless_ar1():
    y = 0.5 ** np.arange(30)
    fit = fit_ar_ols(y, 1)
    assert fit.model.phi[0] == pytest.approx(0.5, abs=1e-12)
    assert fit.resid_var == pytest.approx(0.0, abs=1e-25)


def test_fit_ar_ols_matches_lstsq(rng):
    y = rng.standard_normal(120)
    l = 4
    X = np.column_stack([y[l - i : y.size - i] for i in range(1, l + 1)])
    b = np.linalg.lstsq(X, y[l:], rcond=None)[0]
    np.testing.assert_allclose(fit_ar_ols(y, l).model.phi, b, atol=1e-10)


def test_fit_ar_ols_simulated():
    y = simulate_ar(ARModel([0.6, -0.2]), 50_000, seed=3)
    np.testing.assert_allclose(fit_ar_ols(y, 2).model.phi, [0.6, -0.2], atol=0.02)


def test_fit_ar_ols_too_short():
    with pytest.raises(ValidationError):
        fit_ar_ols(np.ones(10), 5)


def test_suggest_ar_order():
    assert suggest_ar_order(400) == 100
    assert suggest_ar_order(8) == 2
    assert suggest_ar_order(399) == 99
    assert suggest_ar_order(20_000, 200) == 200
    with pytest.raises(ValidationError):
        suggest_ar_order(7)


def test_fit_var_ols_noiseless():
    A = np.array([[0.5, 0.1], [-0.2, 0.3]])
    y = np.zeros((40, 2))
    y[0] = [1.0, -1.0]
    for t in range(1, 40):
        y[t] = A @ y[t - 1]
    np.testing.assert_allclose(fit_var_ols(y[:12], 1).model.phi[0], A, atol=1e-10)


def test_fit_var_ols_scalar_agrees(rng):
    y = rng.standard_normal(200)
    a = fit_ar_ols(y, 5)
    b = fit_var_ols(y, 5)
    np.testing.assert_allclose(b.model.phi[:, 0, 0], a.model.phi, atol=1e-12)


# --- stage 2 design ----------------------------------------------------------


def test_stage2_design_layout():
    phi = np.arange(1.0, 11.0)  # phi_j = j
    X, y = stage2_design(phi, 2)
    np.testing.assert_array_equal(y, np.arange(3.0, 11.0))
    np.testing.assert_array_equal(X[:, 0], y - 1)
    np.testing.assert_array_equal(X[:, 1], y - 2)


def test_stage2_design_drop_and_no_lookahead():
    phi = np.arange(1.0, 21.0)
    for q in (1, 2, 3):
        for drop in (q, q + 2):
            X, y = stage2_design(phi, q, drop)
            assert y[0] == drop + 1 and y.size == 20 - drop
            assert np.all(X < y[:, None])


def test_stage2_design_rejects_small_drop():
    with pytest.raises(ValidationError):
        stage2_design(np.ones(10), 2, drop=1)
    with pytest.raises(ValidationError):
        stage2_design(np.ones(4), 2)


def test_stage2_multivariate_scalar_reduction(rng):
    phi = rng.standard_normal(12)
    X1, y1 = stage2_design(phi, 2)
    Xk, Yk = stage2_design_multivariate(phi[:, None, None], 2)
    # multivariate rows run m = l down to drop+1
    np.testing.assert_array_equal(Xk[::-1], X1)
    np.testing.assert_array_equal(Yk[::-1, 0], y1)


# --- restricted stage 2 ----------------------------------------------------


@pytest.mark.parametrize("psi", [[0.5], [0.5, 0.3], [-0.4, 0.2, 0.1], [1.2, 0.6]])
def test_restricted_exact_recovery(psi):
    phi = ma_to_ar(MAModel(psi), 60)
    psi_hat, _, _ = stage2_restricted(phi, 1e-4, len(psi))
    np.testing.assert_allclose(psi_hat, psi, atol=1e-8)


def test_restricted_sign_pin():
    # MA(1) psi=0.5 gives phi_j = -(-0.5)^j; psi_hat must come back positive
    phi = ma_to_ar(MAModel([0.5]), 20)
    np.testing.assert_allclose(phi[:3], [0.5, -0.25, 0.125])
    psi_hat, _, _ = stage2_restricted(phi, 0.01, 1)
    assert psi_hat[0] == pytest.approx(0.5, abs=1e-10)


def test_restricted_white_noise_null():
    errs = [restricted_ols(simulate_ma(MAModel([0.0]), 2000, seed=s), 1, 40).psi_hat[0] for s in range(20)]
    assert abs(np.mean(errs)) < 0.03


def test_restricted_consistency():
    y = simulate_ma(MAModel([0.5, 0.3]), 200_000, seed=2)
    rep = restricted_ols(y, 2, 60)
    np.testing.assert_allclose(rep.psi_hat, [0.5, 0.3], atol=0.01)
    assert rep.stderr.shape == (2,) and np.all(rep.stderr > 0)


def test_unrestricted_and_order_checks():
    y = simulate_ma(MAModel([0.5]), 400, seed=1)
    assert unrestricted_ols(y, 1, 20).method == "unrestricted-ols"
    with pytest.raises(ValidationError):
        restricted_ols(y, 2, 6)
    with pytest.raises(ValidationError):
        durbin(y, 2, 4)


# --- Durbin ----------------------------------------------------------------


def _yw_oracle(c, q):
    n = c.size
    r = np.array([c[: n - h] @ c[h:] / n for h in range(q + 1)])
    T = np.array([[r[abs(i - j)] for j in range(q)] for i in range(q)])
    return np.linalg.solve(T, r[1:])


@pytest.mark.parametrize("unit_lag", [False, True])
def test_durbin_stage2_matches_direct_yule_walker(unit_lag):
    phi = ma_to_ar(MAModel([0.5, 0.3]), 50)
    c = np.concatenate(([1.0], -phi)) if unit_lag else phi
    psi_hat, _ = stage2_durbin(phi, 2, unit_lag)
    np.testing.assert_allclose(psi_hat, -_yw_oracle(c, 2), atol=1e-12)


def test_durbin_unit_lag_noiseless_near_truth():
    phi = ma_to_ar(MAModel([0.5, 0.3]), 400)
    psi_hat, _ = stage2_durbin(phi, 2, unit_lag=True)
    np.testing.assert_allclose(psi_hat, [0.5, 0.3], atol=0.02)


def test_durbin_consistency_unit_lag():
    y = simulate_ma(MAModel([0.5, 0.3]), 200_000, seed=5)
    rep = durbin(y, 2, 60, unit_lag=True)
    np.testing.assert_allclose(rep.psi_hat, [0.5, 0.3], atol=0.02)
    assert rep.diagnostics["unit_lag"] is True


def test_durbin_white_noise_null():
    y = simulate_ma(MAModel([0.0]), 20_000, seed=6)
    assert abs(durbin(y, 1, 20, unit_lag=True).psi_hat[0]) < 0.05


# --- multivariate ------------------------------------------------------------


def test_multivariate_exact_recovery():
    Psi = np.array([[[0.5, 0.2], [-0.1, 0.3]], [[0.1, 0.0], [0.05, -0.2]]])
    Phi = vma_to_var(VMAModel(Psi), 40)
    psi_hat, stderr, _ = stage2_restricted_multivariate(Phi, np.full((2, 2), 1e-4), 2)
    np.testing.assert_allclose(psi_hat, Psi, atol=1e-8)
    assert stderr.shape == (2, 2, 2)


def test_multivariate_scalar_matches_univariate():
    y = simulate_ma(MAModel([0.4, -0.2]), 1500, seed=12)
    a = estimate(y, 2, 30).psi_hat
    stage1 = fit_var_ols(y, 30)
    b, _, _ = stage2_restricted_multivariate(stage1.model.phi, stage1.cov_diag[0], 2)
    assert b.shape == (2, 1, 1)
    np.testing.assert_allclose(b[:, 0, 0], a, atol=1e-10)


def test_multivariate_diagonal_vma_average():
    Psi = np.diag([0.5, -0.4])[None]
    est = np.mean(
        [estimate(simulate_vma(VMAModel(Psi), 2000, seed=s), 1, 40).psi_hat[0] for s in range(100)],
        axis=0,
    )
    np.testing.assert_allclose(est, Psi[0], atol=0.1)


def test_multivariate_rejects_other_methods():
    y = simulate_vma(VMAModel(np.zeros((1, 2, 2))), 200, seed=1)
    with pytest.raises(ValidationError):
        estimate(y, 1, 10, "durbin")
    with pytest.raises(ValidationError):
        estimate(np.zeros(100) + 1.0, 1, 10, "nope")


def _var1(Phi, n, seed):
    eps = np.random.default_rng(seed).standard_normal((n, Phi.shape[0]))
    y = np.zeros_like(eps)
    y[0] = eps[0]
    for t in range(1, n):
        y[t] = Phi @ y[t - 1] + eps[t]
    return y


def test_fit_var_ols_decoupled_channels():
    phi = fit_var_ols(_var1(np.diag([0.5, -0.4]), 50_000, 1), 1).model.phi[0]
    assert abs(phi[0, 1]) <= 0.02 and abs(phi[1, 0]) <= 0.02
    np.testing.assert_allclose(np.diag(phi), [0.5, -0.4], atol=0.02)


def test_fit_var_ols_unit_root_channel():
    phi = fit_var_ols(_var1(np.diag([1.0, 0.5]), 10_000, 2), 1).model.phi[0]
    np.testing.assert_allclose(np.diag(phi), [1.0, 0.5], atol=0.02)


def test_durbin_literal_bias_for_q2():
    # the literal sequence misses the unit lag, so psi_1 is badly off for q = 2
    phi = ma_to_ar(MAModel([0.5, 0.3]), 100)
    literal, _ = stage2_durbin(phi, 2)
    assert abs(literal[0] - 0.5) > 0.4
    single, _ = stage2_durbin(ma_to_ar(MAModel([0.5]), 100), 1)
    assert single[0] == pytest.approx(0.5, abs=1e-12)
