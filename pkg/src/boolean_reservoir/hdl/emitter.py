"""
Verilog emission of a reservoir computer.

The bundle holds four source files and a manifest:

* ``node.v``: a combinational node reading its truth table from the
  ``lut`` parameter. The all-zeros input selects the literal's most
  significant bit, i.e. ``node_out = lut[2**WIDTH - 1 - node_in]``;
* ``delay_line.v``: a kept chain of ``2*m`` inverters;
* ``reservoir.v``: one ``node_<i>`` per node and one ``delay_<src>_<dst>``
  per link, links ordered by destination then source. Node inputs are
  ``{u, x_tau[...]}`` with the input word first and sources in ascending
  order, which reproduces the LUT index layout of the simulator;
* ``reservoir_computer.v``: clocked top level with sampler and player
  stubs, the ``mode`` multiplexer and the fixed-point output layer.
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict

from ..exceptions import HdlEmissionError
from ..models import ReservoirSpec, TrainedReadout
from ..network import attach_luts
from ..readout.fixed_point import to_output_word

logger = logging.getLogger(__name__)

FILE_NAMES = ("node.v", "delay_line.v", "reservoir.v", "reservoir_computer.v")
MANIFEST_NAME = "manifest.json"


class HdlBundle(BaseModel):
    """Emitted Verilog modules plus the instance manifest."""

    model_config = ConfigDict(frozen=True)

    node_module: str
    delay_line_module: str
    reservoir_module: str
    top_module: str
    manifest: Dict[str, object]

    def files(self) -> Dict[str, str]:
        texts = (self.node_module, self.delay_line_module, self.reservoir_module, self.top_module)
        files = dict(zip(FILE_NAMES, texts))
        files[MANIFEST_NAME] = json.dumps(self.manifest, indent=2, sort_keys=True) + "\n"
        return files


def lut_to_literal(lut: str) -> str:
    """Sized binary literal whose most significant bit is the all-zeros row."""
    size = len(lut)
    if size == 0 or size & (size - 1):
        raise HdlEmissionError(f"LUT length {size} is not a power of two")
    if set(lut) - {"0", "1"}:
        raise HdlEmissionError("LUT must consist of 0 and 1 characters")
    return f"{size}'b{lut}"


def delay_to_pairs(delay_ns: float, tau_inv_ns: float) -> int:
    """Number of inverter pairs ``round(delay / (2 tau_inv))``, at least one."""
    if delay_ns <= 0 or tau_inv_ns <= 0:
        raise ValueError("delay and inverter delay must be positive")
    return max(1, math.floor(delay_ns / (2.0 * tau_inv_ns) + 0.5))


def _header(provenance: Optional[Mapping[str, object]]) -> str:
    if not provenance:
        return ""
    return "".join(f"// {key}: {value}\n" for key, value in provenance.items()) + "\n"


def _node_module() -> str:
    return (
        "module node #(\n"
        "    parameter WIDTH = 3,\n"
        "    parameter [(1<<WIDTH)-1:0] lut = {(1<<WIDTH){1'b0}}\n"
        ") (\n"
        "    input  [WIDTH-1:0] node_in,\n"
        "    output reg         node_out\n"
        ");\n"
        "\n"
        "    always @(*) begin\n"
        "        node_out = lut[(1<<WIDTH)-1-node_in];\n"
        "    end\n"
        "\n"
        "endmodule\n"
    )


def _delay_line_module() -> str:
    return (
        "module delay_line #(\n"
        "    parameter m = 1\n"
        ") (\n"
        "    input  delay_in,\n"
        "    output delay_out\n"
        ");\n"
        "\n"
        "    wire [2*m:0] chain /*synthesis keep*/;\n"
        "\n"
        "    assign chain[0] = delay_in;\n"
        "    assign delay_out = chain[2*m];\n"
        "\n"
        "    genvar i;\n"
        "    generate\n"
        "        for (i = 0; i < 2*m; i = i + 1) begin : inverters\n"
        "            assign chain[i+1] = ~chain[i];\n"
        "        end\n"
        "    endgenerate\n"
        "\n"
        "endmodule\n"
    )


def _reservoir_module(spec: ReservoirSpec, n_bits: int) -> str:
    n = spec.n_nodes
    links = spec.links()
    tap = {link: index for index, link in enumerate(links)}
    lines = [
        "module reservoir (",
        f"    input  [{n_bits - 1}:0] u,",
        f"    output [{n - 1}:0] x",
        ");",
        "",
    ]
    if links:
        lines += [f"    wire [{len(links) - 1}:0] x_tau /*synthesis keep*/;", ""]
    for i in range(n):
        taps = ", ".join(f"x_tau[{tap[(src, i)]}]" for src in spec.sources(i))
        node_in = "{u" + (", " + taps if taps else "") + "}"
        width = len(spec.sources(i)) + n_bits
        lines.append(
            f"    node #(.WIDTH({width}), .lut({lut_to_literal(spec.luts[i])})) "
            f"node_{i} (.node_in({node_in}), .node_out(x[{i}]));"
        )
    if links:
        lines.append("")
    for (src, dst), index in tap.items():
        m = delay_to_pairs(float(spec.link_delays_ns[dst, src]), spec.inverter_delay_ns)
        lines.append(
            f"    delay_line #(.m({m})) delay_{src}_{dst} /*synthesis keep*/ "
            f"(.delay_in(x[{src}]), .delay_out(x_tau[{index}]));"
        )
    lines += ["", "endmodule", ""]
    return "\n".join(lines)


def pack_output_weights(weights: Sequence[float], n_bits: int) -> int:
    """Flatten ``N + 1`` output words into one integer, word 0 in the low bits."""
    width = 2 * n_bits
    mask = (1 << width) - 1
    packed = 0
    for index, weight in enumerate(weights):
        packed |= (to_output_word(float(weight), n_bits) & mask) << (index * width)
    return packed


def _top_module(n: int, n_bits: int, packed_weights: int) -> str:
    word = 2 * n_bits
    total = word * (n + 1)
    frac = n_bits - 1
    acc = word + n_bits + max(1, math.ceil(math.log2(n + 2)))
    round_bias = (1 << (frac - 1)) - 1 if frac > 0 else 0
    v_max = (1 << (n_bits - 1)) - 1
    v_min = -(1 << (n_bits - 1))
    init = f"{total}'h{packed_weights:0{math.ceil(total / 4)}x}"
    return f"""module sampler #(
    parameter N = {n},
    parameter NBITS = {n_bits},
    parameter [2*NBITS*(N+1)-1:0] W_OUT_INIT = {{(2*NBITS*(N+1)){{1'b0}}}}
) (
    input                          clk,
    output reg [NBITS-1:0]         u,
    output reg                     mode,
    output     [2*NBITS*(N+1)-1:0] W_out
);

    // Stored-input memory interface is device specific.
    assign W_out = W_OUT_INIT;

    initial begin
        u = {{NBITS{{1'b0}}}};
        mode = 1'b1;
    end

endmodule

module player #(
    parameter N = {n},
    parameter NBITS = {n_bits}
) (
    input             clk,
    input [N-1:0]     x,
    input [NBITS-1:0] v
);

    // State and output recording is device specific.

endmodule

module output_layer (
    input      [{n - 1}:0] x,
    input      [{n_bits - 1}:0] u,
    input      [{total - 1}:0] W_out,
    output reg [{n_bits - 1}:0] v
);

    integer i;
    reg signed [{acc - 1}:0] states;
    reg signed [{acc - 1}:0] acc;

    always @(*) begin
        states = 0;
        for (i = 0; i < {n}; i = i + 1)
            if (x[i])
                states = states + $signed(W_out[i*{word} +: {word}]);
        acc = (states <<< {frac}) + $signed(W_out[{n * word} +: {word}]) * $signed(u);
        acc = (acc + {round_bias}) >>> {frac};
        if (acc > {v_max})
            v = {v_max};
        else if (acc < {v_min})
            v = {v_min & ((1 << n_bits) - 1)};
        else
            v = acc[{n_bits - 1}:0];
    end

endmodule

module reservoir_computer (
    input clk
);

    wire [{n_bits - 1}:0] u;
    wire mode;
    wire [{total - 1}:0] W_out;
    wire [{n - 1}:0] x_async;
    wire [{n_bits - 1}:0] v_next;
    wire [{n_bits - 1}:0] drive;

    reg [{n - 1}:0] x;
    reg [{n_bits - 1}:0] v;

    assign drive = mode ? u : v;

    sampler #(.W_OUT_INIT({init})) sampler_0 (.clk(clk), .u(u), .mode(mode), .W_out(W_out));
    player player_0 (.clk(clk), .x(x), .v(v));
    reservoir reservoir_0 (.u(drive), .x(x_async));
    output_layer output_layer_0 (.x(x), .u(drive), .W_out(W_out), .v(v_next));

    always @(posedge clk) begin
        x <= x_async;
        v <= v_next;
    end

endmodule
"""


def emit(spec: ReservoirSpec, n_bits: int, readout: Optional[TrainedReadout] = None,
         provenance: Optional[Mapping[str, object]] = None) -> HdlBundle:
    """Compile ``spec`` (and optionally trained output weights) to Verilog."""
    if n_bits != spec.input_bits:
        raise HdlEmissionError(f"spec uses {spec.input_bits}-bit input words, emission asked for {n_bits}")
    if not spec.luts:
        spec = attach_luts(spec)
    n = spec.n_nodes
    if readout is not None:
        if readout.weights.size != n + 1:
            raise HdlEmissionError(f"readout has {readout.weights.size} weights for {n} nodes")
        if readout.n_bits is not None and readout.n_bits != n_bits:
            raise HdlEmissionError("readout was trained for a different word width")
        packed = pack_output_weights(readout.weights, n_bits)
    else:
        packed = 0

    header = _header(provenance)
    links = spec.links()
    manifest: Dict[str, object] = {
        "n_nodes": n,
        "n_bits": n_bits,
        "counts": {"node": n, "delay_line": len(links)},
        "nodes": [
            {"name": f"node_{i}", "width": len(spec.sources(i)) + n_bits,
             "lut": lut_to_literal(spec.luts[i])}
            for i in range(n)
        ],
        "delay_lines": [
            {"name": f"delay_{src}_{dst}", "source": src, "destination": dst,
             "m": delay_to_pairs(float(spec.link_delays_ns[dst, src]), spec.inverter_delay_ns)}
            for src, dst in links
        ],
        "output_weights": f"{packed:x}" if readout is not None else None,
    }
    if provenance:
        manifest["provenance"] = {str(k): str(v) for k, v in provenance.items()}
    _check_unique(manifest)

    bundle = HdlBundle(
        node_module=header + _node_module(),
        delay_line_module=header + _delay_line_module(),
        reservoir_module=header + _reservoir_module(spec, n_bits),
        top_module=header + _top_module(n, n_bits, packed),
        manifest=manifest,
    )
    logger.info("Emitted %d nodes and %d delay lines", n, len(links))
    return bundle


def _check_unique(manifest: Mapping[str, object]) -> None:
    names: List[str] = [entry["name"] for entry in manifest["nodes"]]
    names += [entry["name"] for entry in manifest["delay_lines"]]
    if len(set(names)) != len(names):
        raise HdlEmissionError("emitted instance names are not unique")


def write_bundle(bundle: HdlBundle, out_dir: Union[str, Path]) -> List[Path]:
    """Write every file as UTF-8 with LF line endings."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, text in bundle.files().items():
            path = out_dir / name
            path.write_text(text, encoding="utf-8", newline="\n")
            paths.append(path)
    except OSError as e:
        raise HdlEmissionError(f"could not write HDL bundle to {out_dir}: {e}") from e
    return paths
