import math

import numpy as np
import pytest

import driftscope as ds


def test_kernel_values():
    assert ds.kernel_weight("gaussian", 1.0) == pytest.approx(math.exp(-0.5))
    assert ds.kernel_weight("epanechnikov", 0.5) == pytest.approx(0.75)
    assert ds.kernel_weight("uniform", 0.9) == 1.0
    with pytest.raises(ValueError):
        ds.kernel_weight("triangular", 1.0)


def test_grid_and_horizon():
    assert ds.min_bandwidth("epanechnikov", 16, 1) == 17
    assert ds.decay_horizon("gaussian", 5, 0.01) == pytest.approx(15.17, abs=0.01)
    assert math.isinf(ds.decay_horizon("uniform", 5, 0.01))


def test_wls_matches_numpy():
    rng = np.random.default_rng(3)
    x = np.column_stack([np.ones(30), rng.normal(size=(30, 2))])
    y = rng.normal(size=30)
    w = rng.uniform(0.1, 1.0, size=30)
    sw = np.sqrt(w)
    ref, *_ = np.linalg.lstsq(x * sw[:, None], y * sw, rcond=None)
    np.testing.assert_allclose(ds.wls(x, y, w), ref, rtol=1e-10, atol=1e-12)


def test_relative_error_and_normality():
    actual = [3.0, 5.0, 9.0, 4.0]
    assert ds.relative_error([2.0] * 4, actual) == pytest.approx(1.0, abs=1e-12)
    w, p = ds.shapiro_wilk([1.0, 2.0, 4.0])
    assert w == pytest.approx(0.9643, abs=1e-3)
    assert 0 < p <= 1


def test_synth_sweep_roundtrip():
    text, desc = ds.synth(seed=5)
    assert text == ds.synth(seed=5)[0]
    rows, verdicts = ds.sweep(desc, text, kernels=["gaussian"], grid=(1, 30, 1))
    assert rows and all(r["kernel"] == "gaussian" for r in rows)
    assert verdicts["overall"] in {"Stationary", "NearStationary", "NonStationary"}
    last = max(r["split"] for r in rows)
    assert all(r["re_test_nu"] is None for r in rows if r["split"] == last)


def test_describe_and_errors():
    d = ds.describe("maxwell")
    assert d["name"] == "maxwell"
    with pytest.raises(ValueError):
        ds.describe("no-such-dataset")
    with pytest.raises(ValueError):
        ds.sweep("maxwell", "not,a,dataset\n1,2,3\n")
