"""
Tests for the fading-memory decay-time experiment.

**Property 10: Decay Fit Recovers the Time Constant**
A clean exponential distance curve fits back to its own time constant.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from boolean_reservoir.analysis import decay as decay_module
from boolean_reservoir.analysis import decay_distance, decay_trend, fit_decay, measure_decay_time
from boolean_reservoir.analysis.decay import _repetition_inputs, moving_average
from boolean_reservoir.exceptions import AnalysisError
from boolean_reservoir.models import DecayConfig, ReservoirSpec
from boolean_reservoir.network import attach_luts, hardware_example_spec


class TestDistance:
    """State distance and smoothing."""

    def test_euclidean_distance(self):
        a = np.array([[1, 0, 1], [1, 1, 1]], dtype=bool)
        b = np.array([[0, 0, 0], [1, 1, 1]], dtype=bool)
        np.testing.assert_allclose(decay_distance(a, b), [math.sqrt(2), 0.0])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            decay_distance(np.zeros((2, 3)), np.zeros((3, 3)))

    def test_moving_average_edges(self):
        smoothed = moving_average(np.array([0.0, 0.0, 5.0, 0.0, 0.0]))
        np.testing.assert_allclose(smoothed, [5 / 3, 5 / 4, 1.0, 5 / 4, 5 / 3])

    def test_moving_average_keeps_constants(self):
        np.testing.assert_allclose(moving_average(np.full(9, 2.0)), np.full(9, 2.0))


class TestFit:
    """Log-linear fit of the smoothed distance."""

    @given(st.floats(min_value=3.0, max_value=40.0))
    @settings(max_examples=25, deadline=None)
    def test_recovers_time_constant(self, lam):
        """
        **Property 10: Decay Fit Recovers the Time Constant**
        """
        times = np.arange(100.0)
        fitted = fit_decay(times, 3.0 * np.exp(-times / lam))
        assert fitted == pytest.approx(lam, rel=0.01)

    def test_time_offset_ignored(self):
        times = 1000.0 + np.arange(100.0)
        assert fit_decay(times, np.exp(-(times - 1000.0) / 10.0)) == pytest.approx(10.0, rel=0.01)

    def test_trailing_zeros_excluded(self):
        times = np.arange(60.0)
        distances = np.exp(-times / 8.0)
        distances[30:] = 0.0
        assert fit_decay(times, distances) == pytest.approx(8.0, rel=0.1)

    def test_fit_window(self):
        times = np.arange(100.0)
        assert fit_decay(times, np.exp(-times / 5.0), fit_window_ns=20.0) == pytest.approx(5.0, rel=0.05)

    def test_no_difference(self):
        assert fit_decay(np.arange(10.0), np.zeros(10)) is None

    def test_growing_distance(self):
        times = np.arange(20.0)
        assert fit_decay(times, np.exp(times / 10.0)) is None

    def test_too_few_points(self):
        assert fit_decay(np.arange(10.0), np.ones(10), fit_window_ns=0.5) is None


class TestRepetitions:
    """Inputs and aggregation of repeated decay measurements."""

    def test_inputs_share_the_second_half(self):
        u1, u2 = _repetition_inputs(50, seed=7, repetition=2)
        assert u1.size == u2.size == 100
        np.testing.assert_array_equal(u1[50:], u2[50:])
        assert not np.any(u1[:50] == u2[:50])
        again, _ = _repetition_inputs(50, seed=7, repetition=2)
        np.testing.assert_array_equal(u1, again)
        other, _ = _repetition_inputs(50, seed=7, repetition=3)
        assert not np.array_equal(u1, other)

    def test_aggregation_discards_failed_repetitions(self, monkeypatch):
        outcomes = {0: (None, "states never differ"), 1: (10.0, ""), 2: (12.0, ""), 3: (14.0, "")}
        monkeypatch.setattr(decay_module, "_decay_repetition",
                            lambda spec, cfg, t, settings, seed, rep: outcomes[rep])
        cfg = DecayConfig(n_samples_each_side=20, repetitions=4)
        with pytest.warns(RuntimeWarning, match="repetition 0 discarded"):
            result = measure_decay_time(hardware_example_spec(), cfg, max_workers=1)
        assert result.lambda_ns == pytest.approx(12.0)
        assert result.stderr == pytest.approx(2.0 / math.sqrt(3))
        assert (result.n_used, result.n_discarded) == (3, 1)
        assert result.lambdas == (10.0, 12.0, 14.0)

    def test_all_discarded(self, monkeypatch):
        monkeypatch.setattr(decay_module, "_decay_repetition",
                            lambda *args: (None, "distance does not decay"))
        cfg = DecayConfig(n_samples_each_side=20, repetitions=3)
        with pytest.warns(RuntimeWarning):
            with pytest.raises(AnalysisError):
                measure_decay_time(hardware_example_spec(), cfg, max_workers=1)

    def test_fit_window_checked(self):
        cfg = DecayConfig(n_samples_each_side=10, repetitions=3, fit_window_ns=100.0)
        with pytest.raises(ValueError):
            measure_decay_time(hardware_example_spec(), cfg, 6.25, max_workers=1)

    def test_config_bounds(self):
        with pytest.raises(ValueError):
            DecayConfig(repetitions=2)


class TestTrend:
    """Linear dependence of the decay time on the mean delay."""

    def test_exact_line(self):
        trend = decay_trend([5.0, 10.0, 15.0], [3.0, 5.0, 7.0])
        assert trend.slope == pytest.approx(0.4)
        assert trend.intercept == pytest.approx(1.0)
        assert trend.r_squared == pytest.approx(1.0)

    def test_needs_two_delays(self):
        with pytest.raises(ValueError):
            decay_trend([5.0, 5.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            decay_trend([5.0, 10.0], [1.0])


class TestSingleNode:
    """A lone input-driven node forgets the past within one sample."""

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_memory_limited_to_one_sample(self):
        spec = attach_luts(ReservoirSpec(
            input_bits=8,
            weights=np.zeros((1, 1)),
            input_weights_effective=np.array([1.0]),
            link_delays_ns=np.zeros((1, 1)),
            node_time_constants_ns=np.array([0.3]),
            node_thresholds=np.array([0.5]),
        ))
        cfg = DecayConfig(n_samples_each_side=40, repetitions=20)
        result = measure_decay_time(spec, cfg, 6.25, max_workers=1)
        # Only the record at t = 0 can differ; the smoothed curve is 1/3, 1/4, 1/5.
        assert result.lambda_ns == pytest.approx(12.5 / math.log(5 / 3))
        assert result.stderr == pytest.approx(0.0, abs=1e-9)
        assert result.lambda_ns < 4 * (0.3 + 6.25)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
