"""
Tests for prediction error metrics, power spectra and delay embeddings.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from boolean_reservoir.analysis import (
    bounding_box,
    contained_in_box,
    delay_embed,
    horizon_samples,
    nrmse,
    peak_offset,
    power_spectrum,
    snap_embed_delay,
)
from boolean_reservoir.analysis.spectra import embedding_csv, embedding_lag, spectrum_csv
from boolean_reservoir.models import SpectrumResult, TimeSeries, TimeUnit


def ramp(n: int = 10, dt: float = 1.0) -> TimeSeries:
    return TimeSeries(dt=dt, values=np.arange(float(n)))


def sine(freq: float, n: int = 2048, dt: float = 1.0) -> TimeSeries:
    t = dt * np.arange(n)
    return TimeSeries(dt=dt, values=np.sin(2 * np.pi * freq * t))


def spectrum(peak_index: int, units: str = "1/mg_units") -> SpectrumResult:
    power = np.full(3, 0.2)
    power[peak_index] = 1.0
    freqs = np.array([0.0, 0.1, 0.2])
    return SpectrumResult(freqs=freqs, power=power, peak_freq=float(freqs[peak_index]), units=units)


class TestHorizon:
    """Number of samples in a scoring window."""

    def test_exact_multiple(self):
        assert horizon_samples(30.0, 5.0) == 6
        assert horizon_samples(0.3, 0.1) == 3

    def test_rounds_up(self):
        assert horizon_samples(31.0, 5.0) == 7

    def test_non_positive_rejected(self):
        with pytest.raises(ValueError):
            horizon_samples(0.0, 5.0)


class TestNrmse:
    """Variance-normalized error over the predicted window."""

    def test_aligned_window(self):
        target = ramp()
        predicted = TimeSeries(t0=2.0, dt=1.0, values=target.values[2:5] + 0.1)
        assert nrmse(target, predicted, 3.0, 0.01) == pytest.approx(1.0)

    def test_perfect_prediction(self):
        target = ramp()
        predicted = target.slice(4, 4)
        assert nrmse(target, predicted, 4.0, 2.0) == 0.0

    def test_only_the_horizon_is_scored(self):
        target = ramp()
        values = target.values[1:6].copy()
        values[-1] += 100.0
        predicted = TimeSeries(t0=1.0, dt=1.0, values=values)
        assert nrmse(target, predicted, 4.0, 1.0) == 0.0

    def test_units_are_converted(self):
        target = ramp()
        predicted = TimeSeries(t0=2.5, dt=1.25, values=target.values[2:5], units=TimeUnit.NS,
                               unit_map_ns_per_mg=1.25)
        assert nrmse(target, predicted, 3.0, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_misaligned_start_rejected(self):
        target = ramp()
        predicted = TimeSeries(t0=2.5, dt=1.0, values=np.zeros(3))
        with pytest.raises(ValueError):
            nrmse(target, predicted, 3.0, 1.0)

    def test_different_sampling_rejected(self):
        with pytest.raises(ValueError):
            nrmse(ramp(), ramp(dt=2.0), 3.0, 1.0)

    def test_uncovered_window_rejected(self):
        target = ramp()
        with pytest.raises(ValueError):
            nrmse(target, target.slice(8), 3.0, 1.0)
        with pytest.raises(ValueError):
            nrmse(target, target.slice(0, 2), 3.0, 1.0)

    def test_variance_must_be_positive(self):
        with pytest.raises(ValueError):
            nrmse(ramp(), ramp(), 3.0, 0.0)

    def test_constant_offset_of_one_deviation(self):
        target = ramp()
        predicted = TimeSeries(t0=3.0, dt=1.0, values=target.values[3:8] + 0.3)
        assert nrmse(target, predicted, 5.0, 0.3 ** 2) == pytest.approx(1.0)

    @settings(max_examples=50, deadline=None)
    @given(shift=st.floats(-5.0, 5.0), scale=st.floats(0.1, 10.0), seed=st.integers(0, 10_000))
    def test_shift_and_scale(self, shift, scale, seed):
        """Shifting both series changes nothing; scaling both by a needs variance times a**2."""
        rng = np.random.default_rng(seed)
        target = rng.normal(size=20)
        predicted = target[5:15] + rng.normal(scale=0.1, size=10)

        def score(t_values, p_values, variance):
            return nrmse(TimeSeries(dt=1.0, values=t_values),
                         TimeSeries(t0=5.0, dt=1.0, values=p_values), 10.0, variance)

        base = score(target, predicted, 0.5)
        assert score(target + shift, predicted + shift, 0.5) == pytest.approx(base, rel=1e-9)
        assert score(scale * target, scale * predicted, 0.5 * scale ** 2) == pytest.approx(base, rel=1e-9)


class TestPowerSpectrum:
    """Welch spectra normalized to a unit peak."""

    def test_sine_peak(self):
        result = power_spectrum(sine(0.05))
        assert result.peak_freq == pytest.approx(0.05, abs=result.bin_width)
        assert result.power.max() == pytest.approx(1.0)
        assert np.all(result.freqs >= 0)
        assert result.units == "1/mg_units"

    def test_units_follow_the_series(self):
        series = sine(0.05).to_ns()
        result = power_spectrum(series)
        assert result.units == "1/ns"
        assert result.peak_freq == pytest.approx(0.05 / 1.25, abs=result.bin_width)

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            power_spectrum(sine(0.05, n=255))

    def test_constant_series_rejected(self):
        with pytest.raises(ValueError):
            power_spectrum(TimeSeries(dt=1.0, values=np.ones(512)))

    def test_peak_offset(self):
        absolute, relative = peak_offset(spectrum(2), spectrum(1))
        assert absolute == pytest.approx(0.1)
        assert relative == pytest.approx(1.0)
        assert peak_offset(spectrum(1), spectrum(1)) == (0.0, 0.0)

    def test_peak_offset_errors(self):
        with pytest.raises(ValueError):
            peak_offset(spectrum(1), spectrum(0))
        with pytest.raises(ValueError):
            peak_offset(spectrum(1, units="1/ns"), spectrum(1))

    def test_spectrum_csv(self):
        text = spectrum_csv(spectrum(1), header=["seed=0"])
        lines = text.splitlines()
        assert lines[:3] == ["# seed=0", "# peak_freq=0.1", "freq_1per_mg_units,power"]
        assert len(lines) == 6


class TestDelayEmbedding:
    """Two-dimensional reconstruction of a scalar series."""

    def test_lag_must_be_on_grid(self):
        series = ramp(dt=5.0)
        assert embedding_lag(series, 15.0) == 3
        with pytest.raises(ValueError):
            embedding_lag(series, 17.0)
        with pytest.raises(ValueError):
            embedding_lag(series, -5.0)

    def test_snap(self):
        assert snap_embed_delay(17.0, 5.0) == 15.0
        assert snap_embed_delay(18.0, 5.0) == 20.0
        assert snap_embed_delay(1.0, 5.0) == 5.0

    def test_quarter_period_gives_circle(self):
        period = 20
        series = TimeSeries(dt=1.0, values=np.sin(2 * np.pi * np.arange(200) / period))
        points = delay_embed(series, period / 4)
        np.testing.assert_allclose(np.hypot(points[:, 0], points[:, 1]), 1.0, atol=1e-12)

    def test_rows(self):
        points = delay_embed(ramp(6), 2.0)
        np.testing.assert_array_equal(points, [[2, 0], [3, 1], [4, 2], [5, 3]])

    def test_lag_longer_than_series(self):
        assert delay_embed(ramp(3), 5.0).shape == (0, 2)

    def test_bounding_box(self):
        low, high = bounding_box(np.array([[0.0, 0.0], [1.0, 2.0]]))
        np.testing.assert_allclose(low, [-0.2, -0.4])
        np.testing.assert_allclose(high, [1.2, 2.4])

    def test_containment(self):
        box = bounding_box(np.array([[0.0, 0.0], [1.0, 1.0]]), inflation=0.0)
        assert contained_in_box(np.array([[0.5, 0.5], [1.0, 0.0]]), box)
        assert not contained_in_box(np.array([[0.5, 1.5]]), box)

    def test_empty_box_rejected(self):
        with pytest.raises(ValueError):
            bounding_box(np.empty((0, 2)))

    def test_embedding_csv(self):
        text = embedding_csv(np.array([[0.5, -0.25]]), header=["embed_delay=15.0"])
        assert text.splitlines() == ["# embed_delay=15.0", "u_t,u_t_minus_delay", "0.5,-0.25"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
