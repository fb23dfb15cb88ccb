"""
Random reservoir construction.

``build_reservoir`` is a pure function of its hyperparameters (seed
included). It draws from ``numpy.random.Generator(PCG64(seed))`` in this
fixed order:

1. for each node in index order: ``k`` distinct sources (uniform, without
   replacement, self-loops allowed), then their ``k`` weights on [-1, 1];
2. the ``floor(sigma * N + 0.5)`` input nodes (uniform, without replacement);
3. their effective input weights on [-1, 1];
4. one delay on [tau_bar/2, 3 tau_bar/2] per link, links ordered by
   destination then source;
5. node time constants from a normal distribution truncated to positive
   values by redrawing.

Delays are rounded to the nearest multiple of ``2 * tau_inv`` (at least
one pair of inverters).
"""

import logging
import math
from typing import List

import numpy as np
from scipy import linalg

from ..exceptions import NetworkConstructionError
from ..models import Hyperparams, ReservoirSpec
from .lut import attach_luts

logger = logging.getLogger(__name__)

MAX_DENSE_NODES = 200
SPECTRAL_RADIUS_RTOL = 1e-9


def spectral_radius(matrix) -> float:
    """Largest absolute eigenvalue of a square matrix."""
    array = np.asarray(matrix, dtype=float)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ValueError(f"spectral radius needs a square matrix, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("spectral radius needs finite entries")
    if array.size == 0:
        return 0.0
    return float(np.max(np.abs(linalg.eigvals(array))))


def input_node_count(n_nodes: int, input_density: float) -> int:
    return int(math.floor(input_density * n_nodes + 0.5))


def quantize_delay(delay_ns: float, inverter_delay_ns: float) -> float:
    pairs = max(1, int(math.floor(delay_ns / (2.0 * inverter_delay_ns) + 0.5)))
    return pairs * 2.0 * inverter_delay_ns


def _nonzero_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    values = rng.uniform(-1.0, 1.0, size=size)
    while np.any(values == 0.0):
        zeros = values == 0.0
        values[zeros] = rng.uniform(-1.0, 1.0, size=int(zeros.sum()))
    return values


def _positive_normal(rng: np.random.Generator, mean: float, std: float, size: int) -> np.ndarray:
    values = rng.normal(mean, std, size=size)
    while np.any(values <= 0.0):
        bad = values <= 0.0
        values[bad] = rng.normal(mean, std, size=int(bad.sum()))
    return values


def build_reservoir(hp: Hyperparams) -> ReservoirSpec:
    """Build a random reservoir instance and derive its LUTs."""
    n, k = hp.n_nodes, hp.in_degree
    if k > n:
        raise NetworkConstructionError(f"in_degree k={k} exceeds the number of nodes N={n}")
    if n > MAX_DENSE_NODES:
        raise NetworkConstructionError(
            f"N={n} exceeds {MAX_DENSE_NODES}; the spectral radius is only computed densely"
        )
    n_input = input_node_count(n, hp.input_density)
    if n_input == 0:
        raise NetworkConstructionError(
            f"input density sigma={hp.input_density} with N={n} rounds to zero input nodes"
        )

    rng = np.random.Generator(np.random.PCG64(hp.seed))

    weights = np.zeros((n, n))
    for i in range(n):
        sources = np.sort(rng.choice(n, size=k, replace=False))
        weights[i, sources] = _nonzero_uniform(rng, k)

    radius = spectral_radius(weights)
    if radius == 0.0:
        raise NetworkConstructionError("sampled weight matrix is nilpotent; cannot scale to rho")
    weights *= hp.spectral_radius / radius

    input_weights = np.zeros(n)
    input_nodes = np.sort(rng.choice(n, size=n_input, replace=False))
    input_weights[input_nodes] = _nonzero_uniform(rng, n_input)

    delays = np.zeros((n, n))
    rows, cols = np.nonzero(weights)
    raw = rng.uniform(hp.mean_delay_ns / 2.0, 1.5 * hp.mean_delay_ns, size=rows.size)
    for row, col, value in zip(rows, cols, raw):
        delays[row, col] = quantize_delay(value, hp.inverter_delay_ns)

    gammas = _positive_normal(rng, hp.node_gamma_mean_ns, hp.node_gamma_std_ns, n)

    spec = ReservoirSpec(
        hyperparams=hp,
        input_bits=hp.input_bits,
        weights=weights,
        input_weights_effective=input_weights,
        link_delays_ns=delays,
        node_time_constants_ns=gammas,
        node_thresholds=np.full(n, hp.node_threshold),
        inverter_delay_ns=hp.inverter_delay_ns,
        literal_input_weights=hp.literal_input_weights,
    )
    spec = attach_luts(spec)

    violations = check_generated_invariants(spec, hp)
    if violations:
        raise NetworkConstructionError("generated spec violates: " + "; ".join(violations))
    logger.debug("Built reservoir N=%d k=%d rho=%g seed=%d", n, k, hp.spectral_radius, hp.seed)
    return spec


def check_generated_invariants(spec: ReservoirSpec, hp: Hyperparams) -> List[str]:
    """Violated generated-spec invariants; an empty list means all hold."""
    problems = []
    degrees = spec.in_degrees
    if np.any(degrees != hp.in_degree):
        problems.append(f"rows with in-degree != {hp.in_degree}")
    radius = spectral_radius(spec.weights)
    if abs(radius - hp.spectral_radius) > SPECTRAL_RADIUS_RTOL * hp.spectral_radius:
        problems.append(f"spectral radius {radius!r} != {hp.spectral_radius!r}")
    delays = spec.link_delays_ns[spec.weights != 0]
    tau = hp.mean_delay_ns
    slack = spec.inverter_delay_ns
    if np.any(delays < tau / 2.0 - slack) or np.any(delays > 1.5 * tau + slack):
        problems.append("link delay outside [tau_bar/2, 3 tau_bar/2] beyond quantization")
    pairs = delays / (2.0 * spec.inverter_delay_ns)
    if not np.allclose(pairs, np.round(pairs), rtol=0, atol=1e-9):
        problems.append("link delay not a multiple of 2 tau_inv")
    expected_inputs = input_node_count(hp.n_nodes, hp.input_density)
    if np.count_nonzero(spec.input_weights_effective) != expected_inputs:
        problems.append(f"input node count != {expected_inputs}")
    if spec.luts:
        for i, lut in enumerate(spec.luts):
            if len(lut) != 2 ** (hp.in_degree + spec.input_bits):
                problems.append(f"LUT {i} has wrong length")
                break
    return problems
