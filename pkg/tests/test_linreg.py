import numpy as np
import pytest
from scipy.linalg import solve_toeplitz

from marec.core import ARModel, NumericalError, SingularDesignError
from marec.linreg import autocovariances, levinson_durbin, ols, theil_f_class, yule_walker
from marec.simulate import simulate_ar


def test_ols_constant():
    fit = ols(np.ones((3, 1)), np.array([2.0, 2.0, 2.0]))
    np.testing.assert_allclose(fit.beta, [2.0])
    assert fit.resid_var == pytest.approx(0.0, abs=1e-28)


def test_ols_noiseless_recovery(rng):
    X = rng.standard_normal((50, 4))
    b = np.array([1.0, -2.0, 0.5, 3.0])
    fit = ols(X, X @ b)
    np.testing.assert_allclose(fit.beta, b, atol=1e-12)
    assert fit.resid_var <= 1e-20


def test_ols_against_normal_equations(rng):
    X = rng.standard_normal((200, 6))
    y = rng.standard_normal(200)
    fit = ols(X, y)
    beta_ne = np.linalg.solve(X.T @ X, X.T @ y)
    np.testing.assert_allclose(fit.beta, beta_ne, atol=1e-8)
    resid = y - X @ beta_ne
    s2 = resid @ resid / (200 - 6)
    assert fit.resid_var == pytest.approx(s2, rel=1e-10)
    np.testing.assert_allclose(fit.cov_diag, s2 * np.diag(np.linalg.inv(X.T @ X)), rtol=1e-8)
    assert fit.cond == pytest.approx(np.linalg.cond(X.T @ X), rel=1e-6)


def test_ols_residual_orthogonality(rng):
    X = rng.standard_normal((80, 5))
    y = rng.standard_normal(80) + X @ np.arange(5)
    fit = ols(X, y)
    assert np.linalg.norm(X.T @ fit.resid) <= 1e-8 * np.linalg.norm(X.T @ y)


def test_ols_singular_design():
    X = np.column_stack([np.arange(10.0), 2 * np.arange(10.0)])
    with pytest.raises(SingularDesignError) as info:
        ols(X, np.arange(10.0))
    assert info.value.cond > 1e12


def test_levinson_against_dense_toeplitz(rng):
    x = rng.standard_normal(300)
    r = autocovariances(x, 6)
    np.testing.assert_allclose(levinson_durbin(r, 6), solve_toeplitz(r[:6], r[1:]), atol=1e-12)


def test_levinson_nonpositive_error():
    with pytest.raises(NumericalError):
        levinson_durbin(np.array([1.0, 1.0, 1.0]), 2)


def test_yule_walker_geometric_sequence():
    errs = []
    for N in (200, 2000):
        # slow decay so the end-of-sample truncation is visible
        x = 0.99 ** np.arange(N + 1)
        a = yule_walker(x, 1)
        errs.append(abs(a[0] - 0.99))
        assert errs[-1] <= 1.0 / N
    assert errs[1] < errs[0]


def test_yule_walker_zero_series():
    with pytest.raises(SingularDesignError):
        yule_walker(np.zeros(20), 2)


def test_yule_walker_simulated_ar1():
    x = simulate_ar(ARModel([0.5]), 100_000, seed=42).values
    assert yule_walker(x, 1)[0] == pytest.approx(0.5, abs=0.01)


def test_yule_walker_converges_on_exact_ar2():
    phi = np.array([1.8, -0.9])
    errs = []
    for N in (40, 400):
        x = np.zeros(N)
        x[0] = 1.0
        for t in range(1, N):
            x[t] = phi[0] * x[t - 1] + (phi[1] * x[t - 2] if t >= 2 else 0.0)
        errs.append(np.max(np.abs(yule_walker(x, 2) - phi)))
    assert errs[1] < errs[0]


@pytest.fixture
def regression(rng):
    X = rng.standard_normal((60, 3))
    y = X @ np.array([0.4, -0.2, 0.1]) + 0.3 * rng.standard_normal(60)
    return X, y


def test_f_class_uninformative_prior(regression):
    X, y = regression
    beta, _ = theil_f_class(X, y, [[1.0, 0.0, 0.0]], [5.0], [1e30], 0.09)
    np.testing.assert_allclose(beta, ols(X, y).beta, atol=1e-6)


def test_f_class_dogmatic_prior(regression):
    X, y = regression
    beta, var = theil_f_class(X, y, [[1.0, 0.0, 0.0]], [5.0], [1e-30], 0.09)
    assert beta[0] == pytest.approx(5.0, abs=1e-6)
    assert var[0] <= 1e-20


def test_f_class_consistent_information(rng):
    X = rng.standard_normal((40, 3))
    b = np.array([1.5, -0.5, 2.0])
    R = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]])
    for pv in (1e-8, 1.0, 1e8):
        beta, _ = theil_f_class(X, X @ b, R, R @ b, [pv, pv], 0.5)
        np.testing.assert_allclose(beta, b, atol=1e-10)


def test_f_class_matches_augmented_regression(regression):
    # independent route: weighted least squares on the stacked data
    X, y = regression
    s2, pv, r = 0.09, 0.01, 0.7
    beta, var = theil_f_class(X, y, [[1.0, 0.0, 0.0]], [r], [pv], s2)
    Xa = np.vstack([X / np.sqrt(s2), [[1 / np.sqrt(pv), 0, 0]]])
    ya = np.concatenate([y / np.sqrt(s2), [r / np.sqrt(pv)]])
    np.testing.assert_allclose(beta, np.linalg.lstsq(Xa, ya, rcond=None)[0], atol=1e-10)
    np.testing.assert_allclose(var, np.diag(np.linalg.inv(Xa.T @ Xa)), rtol=1e-8)


def test_f_class_monotone_interpolation(regression):
    X, y = regression
    b_ols = ols(X, y).beta[0]
    target = b_ols + 1.0
    path = [
        theil_f_class(X, y, [[1.0, 0.0, 0.0]], [target], [pv], 0.09)[0][0]
        for pv in np.logspace(8, -10, 37)
    ]
    assert np.all(np.diff(path) >= -1e-12)
    assert path[0] == pytest.approx(b_ols, abs=1e-4)
    assert path[-1] == pytest.approx(target, abs=1e-4)


def test_f_class_validation(regression):
    X, y = regression
    with pytest.raises(ValueError):
        theil_f_class(X, y, [[1.0, 0.0, 0.0]], [0.0], [0.0], 1.0)
    with pytest.raises(ValueError):
        theil_f_class(X, y, [[1.0, 0.0, 0.0]], [0.0], [1.0], 0.0)
    with pytest.raises(SingularDesignError):
        theil_f_class(np.zeros((5, 2)), np.zeros(5), [[1.0, 0.0]], [0.0], [1.0], 1.0)
