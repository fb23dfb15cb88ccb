"""
Tests for the command-line entry point.
"""

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from boolean_reservoir.cli import RunContext, build_parser, main, stage
from boolean_reservoir.data import read_series_csv
from boolean_reservoir.exceptions import ReservoirLabError, TrainingError
from boolean_reservoir.experiment_config import ExperimentConfig
from boolean_reservoir.models import ReservoirSpec, TrainedReadout
from boolean_reservoir.network import hardware_example_spec

GOLDEN = Path(__file__).parent / "golden" / "hardware_example_reservoir.v"


def write_json(path: Path, data) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


class TestParser:
    """Argument parsing and usage errors."""

    def test_subcommands(self):
        args = build_parser().parse_args(["sweep", "--axis", "rho", "--axis", "k", "--engine", "fixed"])
        assert args.command == "sweep"
        assert args.axis == ["rho", "k"]
        assert args.engine == "fixed"
        assert args.plots is None and args.full_scale is None

    @pytest.mark.parametrize("flag", ["--paper-scale", "--full-scale"])
    def test_scale_flag_spellings(self, flag):
        args = build_parser().parse_args(["decay", flag])
        assert args.full_scale is True

    @pytest.mark.parametrize("argv", [[], ["bogus"], ["sweep", "--axis", "gamma"], ["decay", "--engine", "rk4"]])
    def test_usage_errors_exit_with_2(self, argv):
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        assert excinfo.value.code == 2


class TestStage:
    """Stage tagging of failures."""

    def test_value_errors_are_wrapped(self):
        with pytest.raises(ReservoirLabError) as excinfo:
            with stage("train"):
                raise ValueError("bad rows")
        assert excinfo.value.stage == "train"
        assert str(excinfo.value) == "[train] bad rows"

    def test_existing_stage_kept(self):
        with pytest.raises(TrainingError) as excinfo:
            with stage("sweep"):
                raise TrainingError("singular", stage="train")
        assert excinfo.value.stage == "train"


class TestEmitHdl:
    """The emit-hdl command."""

    def test_hardware_example(self, tmp_path):
        assert main(["emit-hdl", "--hardware-example", "--out-dir", str(tmp_path), "--seed", "0"]) == 0
        out = tmp_path / "emit-hdl"
        for name in ("node.v", "delay_line.v", "reservoir.v", "reservoir_computer.v", "manifest.json",
                     "config.json"):
            assert (out / name).exists()
        text = (out / "reservoir.v").read_text(encoding="utf-8")
        header, body = text.split("\n\n", 1)
        assert header.startswith("// config_hash: ")
        assert header.endswith("// seed: 0")
        assert body == GOLDEN.read_text(encoding="utf-8")

    def test_saved_spec_and_readout(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(hardware_example_spec().to_json(), encoding="utf-8")
        readout = TrainedReadout(weights=np.array([1.0, -1.0, 0.5, 0.0]), ridge_param=0.0,
                                 training_error=0.0, loo_error=0.0, n_bits=1)
        readout_path = tmp_path / "readout.json"
        readout_path.write_text(readout.to_json(), encoding="utf-8")
        argv = ["emit-hdl", "--spec", str(spec_path), "--readout", str(readout_path),
                "--out-dir", str(tmp_path / "out")]
        assert main(argv) == 0
        manifest = json.loads((tmp_path / "out" / "emit-hdl" / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["output_weights"] == "d"
        assert manifest["counts"] == {"node": 3, "delay_line": 6}


class TestJsonProvenance:
    """Saved specs and readouts carry the run's config hash and seed."""

    def test_saved_spec_round_trips_through_emit_hdl(self, tmp_path):
        ctx = RunContext(ExperimentConfig(output_dir=str(tmp_path), seed=7), "train-predict", 1)
        spec = hardware_example_spec()
        path = ctx.write_json("spec_7.json", spec.to_json())
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["provenance"] == {"config_hash": ctx.hash, "seed": 7}
        assert len(ctx.hash) == 16
        restored = ReservoirSpec.from_json(path.read_text(encoding="utf-8"))
        assert restored.to_json() == spec.to_json()
        assert main(["emit-hdl", "--spec", str(path), "--out-dir", str(tmp_path / "out")]) == 0

    def test_saved_readout_loads(self, tmp_path):
        ctx = RunContext(ExperimentConfig(output_dir=str(tmp_path), seed=2), "train-predict", 1)
        readout = TrainedReadout(weights=np.array([0.5, -0.25]), ridge_param=1e-3,
                                 training_error=0.1, loo_error=0.2)
        path = ctx.write_json("readout_2.json", readout.to_json())
        text = path.read_text(encoding="utf-8")
        assert json.loads(text)["provenance"]["seed"] == 2
        assert text.endswith("}\n")
        np.testing.assert_array_equal(TrainedReadout.from_json(text).weights, readout.weights)


class TestGenerate:
    """The generate command on a short series."""

    def test_writes_series(self, tmp_path):
        config = write_json(tmp_path / "cfg.json", {"generate": {"duration_mg": 200.0}})
        argv = ["generate", "--config", str(config), "--out-dir", str(tmp_path), "--seed", "3"]
        assert main(argv) == 0
        out = tmp_path / "generate"
        raw, provenance = read_series_csv(out / "mg_raw.csv")
        sampled, _ = read_series_csv(out / "mg_resampled.csv")
        assert len(raw) == 2001
        assert len(sampled) == 41
        assert sampled.dt == pytest.approx(5.0)
        assert provenance["seed"] == "3"
        assert len(provenance["config_hash"]) == 16
        saved = json.loads((out / "config.json").read_text(encoding="utf-8"))
        assert saved["seed"] == 3


class TestFailures:
    """Stage failures exit with status 1."""

    def test_invalid_config(self, tmp_path):
        config = write_json(tmp_path / "cfg.json", {"hyperparams": {"n_nodes": 0}})
        assert main(["decay", "--config", str(config), "--out-dir", str(tmp_path)]) == 1

    def test_missing_config(self, tmp_path):
        assert main(["generate", "--config", str(tmp_path / "absent.json")]) == 1

    def test_bad_worker_count(self, tmp_path):
        assert main(["generate", "--max-workers", "0", "--out-dir", str(tmp_path)]) == 1

    def test_unmatched_sweep_axis(self, tmp_path):
        config = write_json(tmp_path / "cfg.json", {"sweeps": [{"axis": "rho", "values": [1.0]}]})
        assert main(["sweep", "--config", str(config), "--axis", "k", "--out-dir", str(tmp_path)]) == 1

    def test_missing_spec_file(self, tmp_path):
        argv = ["emit-hdl", "--spec", str(tmp_path / "absent.json"), "--out-dir", str(tmp_path)]
        assert main(argv) == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
