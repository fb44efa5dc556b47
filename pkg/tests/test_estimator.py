import numpy as np
import pytest
from sklearn.base import clone

from cvbayes import CvDiscrepancy, Sample, ValidationError


@pytest.fixture
def grouped_data(rng):
    x1 = rng.normal(3.0, 1.0, 80)
    x2 = rng.normal(3.0, 1.3, 80)
    X = np.concatenate([x1, x2])
    y = np.array(["a"] * 80 + ["b"] * 80)
    return X, y


def test_get_params_round_trip():
    est = CvDiscrepancy(model="invgauss", n_draws=5_000, seed=3)
    params = est.get_params()
    assert params["model"] == "invgauss"
    assert params["n_draws"] == 5_000
    rebuilt = CvDiscrepancy(**params)
    assert rebuilt.get_params() == params


def test_sklearn_clone_compatible():
    est = CvDiscrepancy(model="negbin", seed=11, thin=2)
    cloned = clone(est)
    assert cloned.get_params() == est.get_params()


def test_set_params():
    est = CvDiscrepancy()
    est.set_params(model="skewnormal", n_draws=2_000)
    assert est.model == "skewnormal"
    assert est.n_draws == 2_000


def test_fit_grouped_values(grouped_data):
    X, y = grouped_data
    est = CvDiscrepancy(model="normal", n_draws=8_000, seed=5).fit(X, y)
    assert est is est.fit(X, y)
    assert 0.0 <= est.discrepancy_ <= 1.0
    assert est.prob_below_ + est.prob_above_ == pytest.approx(1.0)
    assert est.converged_
    assert list(est.classes_) == ["a", "b"]
    assert est.report_.populations[0].n == 80


def test_fit_rejects_bad_groups(grouped_data):
    X, _ = grouped_data
    est = CvDiscrepancy()
    with pytest.raises(ValidationError):
        est.fit(X, np.zeros(X.size))  # one group
    with pytest.raises(ValidationError):
        est.fit(X, np.r_[np.zeros(X.size - 10), np.ones(9), 2.0])  # three groups
    with pytest.raises(ValidationError):
        est.fit(X, np.zeros(X.size - 1))  # length mismatch


def test_fit_samples_summary_only():
    est = CvDiscrepancy(model="normal", n_draws=20_000, seed=8)
    est.fit_samples(
        Sample.from_summary(140, 67.22, 8.46), Sample.from_summary(140, 53.71, 7.59)
    )
    assert est.discrepancy_ == pytest.approx(0.812, abs=0.05)


def test_same_group_data_gives_small_discrepancy(rng):
    x = rng.normal(5.0, 1.0, 160)
    y = np.repeat([0, 1], 80)
    est = CvDiscrepancy(model="normal", n_draws=10_000, seed=9).fit(x, y)
    assert est.discrepancy_ < 0.9  # no strong evidence from a true null


def test_convergence_warning_on_short_chain(rng):
    x = np.concatenate([rng.wald(2.0, 8.0, 50), rng.wald(2.0, 8.0, 50)])
    y = np.repeat([0, 1], 50)
    est = CvDiscrepancy(
        model="invgauss", n_draws=None, seed=10,
        n_iterations=1_050, burn_in=0, thin=1,
    )
    with pytest.warns(RuntimeWarning):
        est.fit(x, y)
    assert est.converged_ is False
