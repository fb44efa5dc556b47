import numpy as np
import pytest

from cvbayes import Sample, ValidationError, bootstrap_cv_test
from cvbayes.simulation import bootstrap_false_positive_rate


def test_identical_samples_give_p_one(rng):
    values = rng.normal(3.0, 1.0, 60)
    s = Sample.from_values(values)
    assert bootstrap_cv_test(s, s, seed=1) == 1.0


def test_separated_cvs_always_rejected():
    for rep in range(10):
        rng = np.random.default_rng(100 + rep)
        s1 = Sample.from_values(rng.normal(3.0, 1.0, 500))
        s2 = Sample.from_values(rng.normal(3.0, 4.0, 500))
        assert bootstrap_cv_test(s1, s2, seed=rep) < 0.05


def test_scale_invariance_with_fixed_seed(rng):
    v1 = rng.normal(3.0, 1.0, 60)
    v2 = rng.normal(3.0, 1.3, 60)
    p_base = bootstrap_cv_test(Sample.from_values(v1), Sample.from_values(v2), seed=42)
    p_scaled = bootstrap_cv_test(
        Sample.from_values(2.0 * v1), Sample.from_values(2.0 * v2), seed=42
    )
    assert p_base == p_scaled


def test_requires_raw_values_and_enough_resamples(rng):
    raw = Sample.from_values(rng.normal(3.0, 1.0, 30))
    summary = Sample.from_summary(30, 3.0, 1.0)
    with pytest.raises(ValidationError):
        bootstrap_cv_test(raw, summary)
    with pytest.raises(ValidationError):
        bootstrap_cv_test(raw, raw, n_boot=50)


def test_p_value_range_and_determinism(rng):
    s1 = Sample.from_values(rng.normal(3.0, 1.0, 40))
    s2 = Sample.from_values(rng.normal(3.0, 1.1, 40))
    p1 = bootstrap_cv_test(s1, s2, seed=9)
    p2 = bootstrap_cv_test(s1, s2, seed=9)
    assert p1 == p2
    assert 0.0 < p1 <= 1.0


def test_false_positive_rate_near_nominal_smoke():
    rate = bootstrap_false_positive_rate(
        "normal", {"mean": 3.0, "sd": 1.0}, {"mean": 3.0, "sd": 1.0},
        n1=30, n2=30, level=0.10, n_replications=150, n_boot=300, master_seed=17,
    )
    assert 0.02 <= rate <= 0.25


def test_false_positive_rate_worker_determinism():
    kwargs = dict(
        n1=20, n2=20, level=0.10, n_replications=24, n_boot=200, master_seed=5,
    )
    serial = bootstrap_false_positive_rate(
        "normal", {"mean": 3.0, "sd": 1.0}, {"mean": 3.0, "sd": 1.0}, workers=1, **kwargs
    )
    parallel = bootstrap_false_positive_rate(
        "normal", {"mean": 3.0, "sd": 1.0}, {"mean": 3.0, "sd": 1.0}, workers=2, **kwargs
    )
    assert serial == parallel
