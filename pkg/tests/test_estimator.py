import numpy as np
import pytest
from sklearn.base import clone

import radaranc as ra
from radaranc.estimator import InterferenceCanceller
from radaranc.spectral import range_fft, split
from radaranc.validation import check_cpi_array


class TestSklearnContract:
    def test_get_set_params(self):
        est = InterferenceCanceller(gamma=50.0)
        params = est.get_params()
        assert params["gamma"] == 50.0
        est.set_params(filter_len=4)
        assert est.filter_len == 4

    def test_clone(self):
        est = InterferenceCanceller(gamma=77.0, threshold=123.0)
        twin = clone(est)
        assert twin.get_params() == est.get_params()

    def test_fit_returns_self(self, table2_frame):
        est = InterferenceCanceller()
        assert est.fit(table2_frame) is est

    def test_composes_in_pipeline(self, table2_frame):
        from sklearn.pipeline import Pipeline

        pipe = Pipeline([("anc", InterferenceCanceller(gamma=100.0))])
        out = pipe.fit_transform(np.asarray(table2_frame.data))
        assert out.shape == (128, 256)
        assert pipe.named_steps["anc"].threshold_ > 0


class TestFitTransform:
    def test_auto_threshold_gates_subset(self, table2_frame):
        est = InterferenceCanceller().fit(table2_frame)
        out, traces = est.mitigate(table2_frame)
        applied = sum(t.applied for t in traces)
        assert 0 < applied < table2_frame.m_chirps
        assert out.shape == (128, 256)

    def test_transform_shape_and_content(self, table2_frame):
        est = InterferenceCanceller(threshold=np.inf)  # bypass everything
        out = est.fit(table2_frame).transform(table2_frame)
        pri0 = split(range_fft(table2_frame.data[0], 512)).pri
        assert np.allclose(out[0], pri0)

    def test_accepts_plain_arrays(self, table2_frame):
        est = InterferenceCanceller(threshold=1.0)
        out = est.fit(table2_frame.data).transform(np.asarray(table2_frame.data))
        assert out.shape == (128, 256)

    def test_fit_transform_chain(self, table2_frame):
        out = InterferenceCanceller().fit_transform(table2_frame)
        assert out.shape == (128, 256)

    def test_numeric_threshold_used_verbatim(self, table2_frame):
        est = InterferenceCanceller(threshold=42.0).fit(table2_frame)
        assert est.threshold_ == 42.0

    def test_invalid_threshold(self, table2_frame):
        with pytest.raises(ValueError):
            InterferenceCanceller(threshold="bogus").fit(table2_frame)
        with pytest.raises(ValueError):
            InterferenceCanceller(threshold=-1.0).fit(table2_frame)

    def test_transform_before_fit(self, table2_frame):
        with pytest.raises(RuntimeError, match="fit"):
            InterferenceCanceller().transform(table2_frame)


class TestValidationHelpers:
    def test_promotes_single_chirp(self):
        arr = check_cpi_array(np.ones(8, complex))
        assert arr.shape == (1, 8)

    def test_rejects_non_finite(self):
        bad = np.ones((2, 8), complex)
        bad[1, 3] = np.inf
        with pytest.raises(ValueError, match="finite"):
            check_cpi_array(bad)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError, match="power of two"):
            check_cpi_array(np.ones((2, 6), complex))

    def test_rejects_3d(self):
        with pytest.raises(ValueError, match="2-D"):
            check_cpi_array(np.ones((2, 2, 8), complex))

    def test_enforces_expected_width(self):
        with pytest.raises(ValueError, match="fast-time"):
            check_cpi_array(np.ones((2, 8), complex), n_fast=16)
