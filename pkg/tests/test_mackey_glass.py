"""
Tests for Mackey-Glass data generation and series files.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from boolean_reservoir.exceptions import DataGenerationError
from boolean_reservoir.data import (
    generate_input_series,
    integrate_mg,
    normalize_mg,
    read_series_csv,
    resample,
    series_to_csv,
    write_series_csv,
)
from boolean_reservoir.models import MgParams, TimeSeries, TimeUnit


class TestIntegration:
    """Fourth-order Runge-Kutta with a half-step history grid."""

    def test_equilibrium_is_constant(self):
        params = MgParams(history=1.0)
        assert params.equilibrium() == pytest.approx(1.0)
        series = integrate_mg(params, 100.0)
        assert len(series) == 1001
        assert np.max(np.abs(series.values - 1.0)) < 1e-10

    def test_deterministic(self):
        first = integrate_mg(MgParams(), 50.0, transient=20.0)
        second = integrate_mg(MgParams(), 50.0, transient=20.0)
        np.testing.assert_array_equal(first.values, second.values)

    def test_transient_shifts_the_window(self):
        full = integrate_mg(MgParams(), 30.0)
        later = integrate_mg(MgParams(), 10.0, transient=20.0)
        np.testing.assert_allclose(later.values, full.values[200:], rtol=0, atol=1e-12)
        assert later.t0 == 0.0

    def test_stored_history(self):
        params = MgParams(history=tuple([1.2] * 341))
        np.testing.assert_array_equal(integrate_mg(params, 20.0).values,
                                      integrate_mg(MgParams(), 20.0).values)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            MgParams(delay=17.05)
        with pytest.raises(ValueError):
            MgParams(history=(1.0, 1.0))
        with pytest.raises(ValueError):
            integrate_mg(MgParams(), 0.0)

    def test_blow_up_reported(self):
        params = MgParams(beta=1e308)
        with pytest.raises(DataGenerationError):
            integrate_mg(params, 50.0)

    def test_without_feedback_decays_exponentially(self):
        params = MgParams(beta=0.0, gamma=10.0, step=0.01, history=0.8)
        series = integrate_mg(params, 1.0)
        times = np.arange(len(series)) * series.dt
        np.testing.assert_allclose(series.values, 0.8 * np.exp(-10.0 * times), rtol=1e-4, atol=1e-12)
        assert params.equilibrium() == 0.0

    def test_negative_feedback_rejected(self):
        with pytest.raises(ValueError):
            MgParams(beta=-0.1)

    def test_step_halving_order(self):
        """Halving the step shrinks the change by about 2**4."""
        runs = [integrate_mg(MgParams(step=h), 50.0).values for h in (0.5, 0.25, 0.125)]
        coarse = np.max(np.abs(runs[0] - runs[1][::2]))
        fine = np.max(np.abs(runs[1][::2] - runs[2][::4]))
        assert fine > 0
        assert np.log2(coarse / fine) >= 3.5

    def test_stays_bounded(self):
        values = integrate_mg(MgParams(), 500.0, transient=100.0).values
        assert values.min() > 0.2
        assert values.max() < 1.5


class TestNormalization:
    """tanh(v - 1) normalization and resampling."""

    def test_normalize(self):
        series = TimeSeries(dt=1.0, values=[1.0, 2.0, 0.0])
        np.testing.assert_allclose(normalize_mg(series).values, np.tanh([0.0, 1.0, -1.0]))

    def test_resample_stride(self):
        series = TimeSeries(dt=0.1, values=np.arange(101.0))
        sampled = resample(series, 5.0)
        assert sampled.dt == pytest.approx(5.0)
        np.testing.assert_array_equal(sampled.values, [0.0, 50.0, 100.0])

    def test_resample_requires_integer_stride(self):
        with pytest.raises(ValueError):
            resample(TimeSeries(dt=0.1, values=np.zeros(10)), 0.25)

    def test_input_series(self):
        series = generate_input_series(MgParams(), 200)
        assert len(series) == 200
        assert series.dt == pytest.approx(5.0)
        assert np.all(np.abs(series.values) < 1)

    @pytest.mark.slow
    def test_normalized_variance(self):
        raw = integrate_mg(MgParams(), 10_000.0, transient=500.0)
        assert normalize_mg(raw).values.var() == pytest.approx(0.046, abs=0.005)


class TestSeriesFiles:
    """CSV persistence with provenance headers."""

    def test_round_trip_with_provenance(self, tmp_path):
        series = TimeSeries(t0=2.0, dt=0.5, values=[0.1, -0.2, 0.3], units=TimeUnit.NS,
                            unit_map_ns_per_mg=1.25)
        path = write_series_csv(series, tmp_path / "out" / "series.csv", {"config_hash": "abc", "seed": 4})
        restored, provenance = read_series_csv(path)
        np.testing.assert_array_equal(restored.values, series.values)
        assert restored.t0 == 2.0
        assert restored.units == TimeUnit.NS
        assert provenance == {"config_hash": "abc", "seed": "4"}

    def test_header_layout(self):
        text = series_to_csv(TimeSeries(dt=5.0, values=[0.0]))
        assert text.splitlines() == [
            "# units=mg_units",
            "# t0=0.0",
            "# dt=5.0",
            "# unit_map_ns_per_mg=1.25",
            "time,value",
            "0.0,0.0",
        ]

    def test_colliding_provenance_rejected(self):
        with pytest.raises(ValueError):
            series_to_csv(TimeSeries(dt=5.0, values=[0.0]), {"dt": 1})

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("time,value\n0.0,1.0\n", encoding="utf-8")
        with pytest.raises(DataGenerationError):
            read_series_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataGenerationError):
            read_series_csv(tmp_path / "absent.csv")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
