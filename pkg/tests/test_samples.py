import json

import numpy as np
import pytest

from cvbayes import Sample, ValidationError, load_sample
from cvbayes.samples import load_summary_json, load_values_csv


def test_from_values_statistics():
    s = Sample.from_values([1.0, 2.0, 3.0, 4.0])
    assert s.n == 4
    assert s.mean == 2.5
    # divide-by-n convention
    assert s.sd == pytest.approx(np.sqrt(1.25))
    assert s.harmonic_mean == pytest.approx(4.0 / (1 + 0.5 + 1 / 3 + 0.25))
    assert s.cv_estimate == pytest.approx(s.sd / 2.5)


def test_harmonic_mean_only_for_positive_data():
    s = Sample.from_values([-1.0, 2.0, 3.0])
    assert s.harmonic_mean is None


def test_from_summary():
    s = Sample.from_summary(140, 67.22, 8.46)
    assert not s.has_values
    assert s.cv_estimate == pytest.approx(8.46 / 67.22)


def test_validation():
    with pytest.raises(ValidationError):
        Sample.from_values([1.0])
    with pytest.raises(ValidationError):
        Sample.from_summary(1, 0.0, 1.0)
    with pytest.raises(ValidationError):
        Sample.from_summary(10, 0.0, -1.0)
    with pytest.raises(ValidationError):
        Sample.from_values([1.0, np.inf])
    with pytest.raises(ValidationError):
        Sample(n=3, mean=0.0, sd=1.0, values=np.array([1.0, 2.0]))


def test_zero_mean_cv_estimate_is_inf():
    assert Sample.from_summary(5, 0.0, 1.0).cv_estimate == np.inf


def test_load_values_csv(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("value\n1.5\n2.5\n3.5\n")
    s = load_values_csv(path)
    assert s.n == 3 and s.mean == 2.5


def test_load_values_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("x\n1\n2\n")
    with pytest.raises(ValidationError, match="header 'value'"):
        load_values_csv(path)


def test_load_values_csv_rejects_non_numeric(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("value\n1\ntwo\n")
    with pytest.raises(ValidationError):
        load_values_csv(path)


def test_load_summary_json(tmp_path):
    path = tmp_path / "summary.json"
    path.write_text(json.dumps({"n": 140, "mean": 67.22, "sd": 8.46}))
    s = load_summary_json(path)
    assert (s.n, s.mean, s.sd) == (140, 67.22, 8.46)


def test_load_summary_json_missing_keys(tmp_path):
    path = tmp_path / "summary.json"
    path.write_text(json.dumps({"n": 140, "mean": 67.22}))
    with pytest.raises(ValidationError, match="missing keys"):
        load_summary_json(path)


def test_load_sample_dispatches_on_extension(tmp_path):
    raw = tmp_path / "raw.csv"
    raw.write_text("value\n1\n2\n")
    summary = tmp_path / "s.json"
    summary.write_text(json.dumps({"n": 9, "mean": 1.0, "sd": 0.5}))
    assert load_sample(raw).has_values
    assert not load_sample(summary).has_values
