"""
Tests for Verilog emission.

**Property 11: Emitted Netlist Reproduces the Network**
Parsing the emitted reservoir module with pyslang recovers the adjacency, every
delay-line length and every truth table of the source spec.
"""

import json
import sys
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from boolean_reservoir.exceptions import HdlEmissionError
from boolean_reservoir.hdl import (
    FILE_NAMES,
    MANIFEST_NAME,
    delay_to_pairs,
    emit,
    lut_to_literal,
    pack_output_weights,
    write_bundle,
)
from boolean_reservoir.models import Hyperparams, TrainedReadout
from boolean_reservoir.network import build_reservoir, hardware_example_spec

GOLDEN = Path(__file__).parent / "golden" / "hardware_example_reservoir.v"


def _collect(node, syntax_type) -> list:
    found = []

    def visit(child):
        if isinstance(child, syntax_type):
            found.append(child)

    node.visit(visit)
    return found


def _text(node) -> str:
    return str(node).strip()


def _selects(pyslang, expr) -> List[Tuple[str, int]]:
    """``name[index]`` element selects of an expression, in source order."""
    result = []
    for select in _collect(expr, pyslang.ElementSelectExpressionSyntax):
        name, index = _text(select).rstrip("]").split("[")
        result.append((name.strip(), int(index)))
    return result


def instances(text: str) -> List[Dict]:
    """Module instances of a Verilog source as seen by the pyslang parser."""
    pyslang = pytest.importorskip("pyslang")
    tree = pyslang.SyntaxTree.fromText(text)
    assert not [d for d in tree.diagnostics if d.isError()]
    found = []
    for inst in _collect(tree.root, pyslang.HierarchyInstantiationSyntax):
        parameters = {p.name.valueText: _text(p.expr)
                      for p in _collect(inst, pyslang.NamedParamAssignmentSyntax)}
        for hier in _collect(inst, pyslang.HierarchicalInstanceSyntax):
            ports = {c.name.valueText: c.expr
                     for c in _collect(hier, pyslang.NamedPortConnectionSyntax)}
            found.append({
                "module": inst.type.valueText,
                "name": hier.decl.name.valueText,
                "parameters": parameters,
                "ports": {name: (_text(expr), _selects(pyslang, expr)) for name, expr in ports.items()},
            })
    return found


def parse_reservoir(text: str):
    """Recover ``(sources, luts, pairs)`` from the instance graph of a reservoir module."""
    found = instances(text)
    taps = {}
    delays = {}
    for inst in (i for i in found if i["module"] == "delay_line"):
        [(wire_in, src)] = inst["ports"]["delay_in"][1]
        [(wire_out, tap)] = inst["ports"]["delay_out"][1]
        assert (wire_in, wire_out) == ("x", "x_tau")
        taps[tap] = src
        delays[tap] = int(inst["parameters"]["m"])
    sources = {}
    luts = {}
    pairs = {}
    for inst in (i for i in found if i["module"] == "node"):
        [(wire, node)] = inst["ports"]["node_out"][1]
        assert wire == "x"
        text_in, selects = inst["ports"]["node_in"]
        assert text_in.lstrip("{").split(",")[0].strip() == "u"
        sources[node] = tuple(taps[tap] for _, tap in selects)
        for _, tap in selects:
            pairs[(taps[tap], node)] = delays[tap]
        size, bits = inst["parameters"]["lut"].split("'b")
        assert int(size) == len(bits) == 2 ** int(inst["parameters"]["WIDTH"])
        luts[node] = bits
    assert len(pairs) == len(taps)
    return sources, luts, pairs


def readout(weights, n_bits=None) -> TrainedReadout:
    return TrainedReadout(weights=np.asarray(weights, dtype=float), ridge_param=0.0,
                          training_error=0.0, loo_error=0.0, n_bits=n_bits)


class TestHardwareExample:
    """The three-node example compiles to its reference netlist."""

    def test_golden_reservoir_module(self):
        bundle = emit(hardware_example_spec(), 1)
        assert bundle.reservoir_module == GOLDEN.read_text(encoding="utf-8")

    def test_manifest_counts(self):
        manifest = emit(hardware_example_spec(), 1).manifest
        assert manifest["counts"] == {"node": 3, "delay_line": 6}
        assert [n["lut"] for n in manifest["nodes"]] == ["8'b01111111", "8'b01000000", "8'b01001101"]
        assert [d["m"] for d in manifest["delay_lines"]] == [10, 15, 6, 7, 12, 10]
        assert manifest["output_weights"] is None

    def test_reruns_identical(self):
        first = emit(hardware_example_spec(), 1, provenance={"seed": 0}).files()
        second = emit(hardware_example_spec(), 1, provenance={"seed": 0}).files()
        assert first == second


class TestNetlistRecovery:
    """
    **Property 11: Emitted Netlist Reproduces the Network**
    """

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_random_reservoir(self, seed):
        hp = Hyperparams(n_nodes=8, spectral_radius=1.2, in_degree=3, mean_delay_ns=5.0,
                         input_density=0.5, input_bits=2, seed=seed)
        spec = build_reservoir(hp)
        sources, luts, pairs = parse_reservoir(emit(spec, 2).reservoir_module)
        assert sources == {i: spec.sources(i) for i in range(spec.n_nodes)}
        assert luts == dict(enumerate(spec.luts))
        expected = {
            (src, dst): int(np.rint(spec.link_delays_ns[dst, src] / (2 * spec.inverter_delay_ns)))
            for src, dst in spec.links()
        }
        assert pairs == {key: max(1, m) for key, m in expected.items()}

    def test_hardware_example(self):
        spec = hardware_example_spec()
        sources, luts, pairs = parse_reservoir(emit(spec, 1).reservoir_module)
        assert sources == {0: (0, 1), 1: (0, 2), 2: (0, 1)}
        assert luts == {0: "01111111", 1: "01000000", 2: "01001101"}
        assert pairs[(1, 0)] == 15

    def test_bundle_elaborates(self):
        pyslang = pytest.importorskip("pyslang")
        bundle = emit(hardware_example_spec(), 1, readout([1.0, -1.0, 0.5, 0.0]))
        files = bundle.files()
        compilation = pyslang.Compilation()
        for name in FILE_NAMES:
            compilation.addSyntaxTree(pyslang.SyntaxTree.fromText(files[name]))
        errors = [d for d in compilation.getAllDiagnostics() if d.isError()]
        assert errors == []
        assert [inst.name for inst in compilation.getRoot().topInstances] == ["reservoir_computer"]

    def test_top_instance_graph(self):
        found = instances(emit(hardware_example_spec(), 1).top_module)
        assert sorted(i["module"] for i in found) == ["output_layer", "player", "reservoir", "sampler"]
        [core] = [i for i in found if i["module"] == "reservoir"]
        assert core["ports"]["u"][0] == "drive"


class TestEncoding:
    """Literals, delay-line lengths and packed output weights."""

    def test_lut_literal(self):
        assert lut_to_literal("01") == "2'b01"
        with pytest.raises(HdlEmissionError):
            lut_to_literal("011")
        with pytest.raises(HdlEmissionError):
            lut_to_literal("01x1")
        with pytest.raises(HdlEmissionError):
            lut_to_literal("")

    def test_delay_to_pairs(self):
        assert delay_to_pairs(3.8, 0.19) == 10
        assert delay_to_pairs(0.1, 0.19) == 1
        with pytest.raises(ValueError):
            delay_to_pairs(0.0, 0.19)

    def test_pack_one_bit_words(self):
        # Words 01, 11, 00, 00 from the low end.
        assert pack_output_weights([1.0, -1.0, 0.5, 0.0], 1) == 0b00001101

    def test_pack_saturates(self):
        assert pack_output_weights([2.0, -0.25], 4) == 0xFE10
        assert pack_output_weights([100.0], 4) == 0x7F

    def test_top_module_carries_weights(self):
        bundle = emit(hardware_example_spec(), 1, readout([1.0, -1.0, 0.5, 0.0]))
        assert "W_OUT_INIT(8'h0d)" in bundle.top_module
        assert bundle.manifest["output_weights"] == "d"
        assert "module reservoir_computer" in bundle.top_module
        assert "assign drive = mode ? u : v;" in bundle.top_module


class TestErrors:
    """Inconsistent inputs are rejected before anything is written."""

    def test_width_mismatch(self):
        with pytest.raises(HdlEmissionError):
            emit(hardware_example_spec(), 2)

    def test_readout_size(self):
        with pytest.raises(HdlEmissionError):
            emit(hardware_example_spec(), 1, readout([0.1, 0.2]))

    def test_readout_width(self):
        with pytest.raises(HdlEmissionError):
            emit(hardware_example_spec(), 1, readout([0.1, 0.2, 0.3, 0.4], n_bits=8))


class TestBundleFiles:
    """Files on disk."""

    def test_write_bundle(self, tmp_path):
        bundle = emit(hardware_example_spec(), 1, provenance={"config_hash": "abc"})
        paths = write_bundle(bundle, tmp_path / "hdl")
        assert sorted(p.name for p in paths) == sorted(FILE_NAMES + (MANIFEST_NAME,))
        for name in FILE_NAMES:
            data = (tmp_path / "hdl" / name).read_bytes()
            assert data.startswith(b"// config_hash: abc\n\n")
            assert b"\r\n" not in data
        manifest = json.loads((tmp_path / "hdl" / MANIFEST_NAME).read_text(encoding="utf-8"))
        assert manifest["provenance"] == {"config_hash": "abc"}
        assert manifest["n_nodes"] == 3

    def test_unwritable_directory(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        with pytest.raises(HdlEmissionError):
            write_bundle(emit(hardware_example_spec(), 1), blocker / "hdl")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
