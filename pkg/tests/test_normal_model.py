import numpy as np
import pytest
from scipy import stats

from cvbayes import Sample, UndefinedCvError, ValidationError
from cvbayes.models import (
    cv_normal,
    cv_skewnormal,
    get_model,
    normal_gamma_logpdf,
    normal_gamma_logpdf_grad,
    normal_posterior_params,
    sample_normal_gamma,
)
from conftest import finite_difference


def test_posterior_params_weight_row():
    params = normal_posterior_params(Sample.from_summary(140, 67.22, 8.46))
    assert params.location == 67.22
    assert params.precision_scale == 140
    assert params.shape == 69.5
    assert params.rate == pytest.approx(5010.012, rel=1e-12)


def test_posterior_params_smallest_n():
    params = normal_posterior_params(Sample.from_summary(2, 0.0, 1.0))
    assert (params.location, params.precision_scale, params.shape, params.rate) == (0.0, 2.0, 0.5, 1.0)


def test_posterior_params_simulation_configuration():
    params = normal_posterior_params(Sample.from_summary(10, 3.0, 1.0))
    assert (params.location, params.precision_scale, params.shape, params.rate) == (3.0, 10.0, 4.5, 5.0)


def test_posterior_params_degenerate_sd():
    with pytest.raises(ValidationError):
        normal_posterior_params(Sample.from_summary(10, 3.0, 0.0))


def test_sample_normal_gamma_contract():
    params = normal_posterior_params(Sample.from_summary(25, 2.0, 0.7))
    draws = sample_normal_gamma(params, 137, seed=5)
    assert draws.shape == (137, 2)
    assert np.all(draws[:, 1] > 0)


def test_gamma_marginal_mean():
    from cvbayes.models import NormalGammaParams

    params = NormalGammaParams(location=0.0, precision_scale=1.0, shape=1000.0, rate=1000.0)
    draws = sample_normal_gamma(params, 100_000, seed=6)
    assert abs(draws[:, 1].mean() - 1.0) < 0.01


def test_conjugate_moments_within_three_mc_ses():
    from cvbayes.models import NormalGammaParams

    params = NormalGammaParams(location=3.0, precision_scale=10.0, shape=4.5, rate=5.0)
    n = 100_000
    draws = sample_normal_gamma(params, n, seed=7)
    precision, mean = draws[:, 1], draws[:, 0]
    # E[precision] = shape/rate, Var = shape/rate^2
    se_prec = np.sqrt(params.shape / params.rate**2 / n)
    assert abs(precision.mean() - params.shape / params.rate) < 3 * se_prec
    # E[mean] = location, Var = rate / (precision_scale * (shape - 1))
    se_mean = np.sqrt(params.rate / (params.precision_scale * (params.shape - 1)) / n)
    assert abs(mean.mean() - params.location) < 3 * se_mean


def test_cv_normal_values():
    assert cv_normal(3.0, 1.0) == pytest.approx(1 / 3)
    assert cv_normal(-3.0, 1.0) == pytest.approx(1 / 3)
    assert cv_normal(2.0, 4.0) == pytest.approx(0.25)
    with pytest.raises(UndefinedCvError):
        cv_normal(0.0, 1.0)


def test_weight_row_cv_draw_mean():
    model = get_model("normal")
    draws, report = model.cv_draws(Sample.from_summary(140, 67.22, 8.46), n_draws=100_000, seed=8)
    assert abs(draws.values.mean() - 0.126) < 0.003
    assert report.kind == "independent"
    assert draws.n_rejected == 0


def test_normal_gamma_logpdf_matches_scipy_oracle():
    params = normal_posterior_params(Sample.from_summary(30, 2.5, 0.8))
    mu_grid = np.linspace(2.2, 2.8, 5)
    phi_grid = np.linspace(0.8, 2.4, 5)
    ours, oracle = [], []
    for mu in mu_grid:
        for phi in phi_grid:
            ours.append(normal_gamma_logpdf(mu, phi, params))
            oracle.append(
                stats.gamma.logpdf(phi, a=params.shape, scale=1 / params.rate)
                + stats.norm.logpdf(mu, loc=params.location,
                                    scale=1 / np.sqrt(params.precision_scale * phi))
            )
    diff = np.array(ours) - np.array(oracle)
    assert diff.max() - diff.min() < 1e-8


def test_normal_gamma_gradient_vs_finite_differences(rng):
    params = normal_posterior_params(Sample.from_summary(20, 1.5, 0.5))
    for _ in range(20):
        mu = float(rng.normal(1.5, 0.3))
        phi = float(rng.uniform(1.0, 8.0))
        grad = normal_gamma_logpdf_grad(mu, phi, params)
        fd = finite_difference(lambda v: normal_gamma_logpdf(v[0], v[1], params), [mu, phi])
        assert np.all(np.abs(grad - fd) <= 1e-5 * np.maximum(1.0, np.abs(grad)))


def test_scale_invariance_exact_for_same_seed():
    # scaling the summary by a power of two reproduces the CV draws bit for bit
    model = get_model("normal")
    base = Sample.from_summary(50, 2.25, 0.75)
    scaled = Sample.from_summary(50, 4 * 2.25, 4 * 0.75)
    a, _ = model.cv_draws(base, n_draws=5_000, seed=9, diagnostics=False)
    b, _ = model.cv_draws(scaled, n_draws=5_000, seed=9, diagnostics=False)
    assert np.array_equal(a.values, b.values)


def test_scale_invariance_in_law():
    model = get_model("normal")
    base = Sample.from_summary(60, 5.0, 1.2)
    scaled = Sample.from_summary(60, 5.0 * 2.7, 1.2 * 2.7)
    a, _ = model.cv_draws(base, n_draws=20_000, seed=10, diagnostics=False)
    b, _ = model.cv_draws(scaled, n_draws=20_000, seed=11, diagnostics=False)
    assert stats.ks_2samp(a.values, b.values).pvalue > 0.01


def test_skewnormal_zero_shape_slice_equals_normal_cv(rng):
    for _ in range(25):
        mu = float(rng.normal(3.0, 1.0))
        sigma = float(rng.uniform(0.5, 2.5))
        assert cv_skewnormal(mu, sigma, 0.0) == pytest.approx(
            cv_normal(mu, 1.0 / sigma**2), rel=1e-12
        )


def test_simulate_and_true_cv():
    model = get_model("normal")
    data = model.simulate({"mean": 3.0, "sd": 1.0}, 4_000, np.random.default_rng(3))
    assert abs(data.mean() - 3.0) < 0.06
    assert model.true_cv({"mean": 3.0, "sd": 1.0}) == pytest.approx(1 / 3)
    with pytest.raises(UndefinedCvError):
        model.true_cv({"mean": 0.0, "sd": 1.0})
