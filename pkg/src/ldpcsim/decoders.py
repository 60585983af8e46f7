"""Decoder front ends.

Five schedules over one fixed-point message model:

* ``decode_flooding``: all checks, then all variables, once per iteration.
* ``decode_row_layered``: checks grouped by row layer, totals updated in
  place as each layer's outputs land.
* ``decode_column_original``: column layers; every check touching the
  active layer rescans its stored messages for the min and sign product.
* ``decode_column_incremental``: column layers; checks keep only the
  sorted small-magnitude vector plus the exact sign product, removal
  yields the check output and sorted reinsertion absorbs the update.
* ``decode_column_pipelined``: the incremental schedule with the check
  output of a layer computed ``pipeline_depth`` layers early from the
  then-current (stale) vector state, as a pipelined datapath would.

All decoders stop early on a zero syndrome (configurable), record the
per-iteration syndrome history, and report whether the final word is a
codeword. The column decoders can record a per-edge message trace for
lockstep comparisons; the vector-based decoders also return the census
of their update events.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .channel import FixedLlrs, FixedPointFormat
from .codes import ParityCheckMatrix
from .core import MODES, EmptyVectorError, alpha_params
from .instrumentation import EVENT_CLASSES, EventCounters

__all__ = [
    "DecodeConfig",
    "DecodeResult",
    "DecodeTrace",
    "TraceDivergence",
    "decode_flooding",
    "decode_row_layered",
    "decode_column_original",
    "decode_column_incremental",
    "decode_column_pipelined",
    "DECODERS",
]


@dataclass(frozen=True)
class DecodeConfig:
    """Knobs shared by every decoder.

    ``vector_capacity`` is the per-check sorted-vector length for the
    incremental schedules; ``None`` keeps every magnitude (and ``exact``
    mode always does, whatever the capacity says). Irregular codes clamp
    the capacity at each check's degree. ``pipeline_depth`` only
    affects the pipelined decoder and must stay below the layer count.
    """

    max_iterations: int = 10
    alpha: float = 0.75
    vector_capacity: Optional[int] = 3
    mode: str = "three_min"
    pipeline_depth: int = 0
    early_termination: bool = True
    fmt: FixedPointFormat = field(default_factory=FixedPointFormat)

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.vector_capacity is not None and self.vector_capacity < 1:
            raise ValueError("vector_capacity must be positive or None for full")
        if self.pipeline_depth < 0:
            raise ValueError("pipeline_depth must be nonnegative")
        alpha_params(self.alpha)  # validates range

    def with_(self, **kw) -> "DecodeConfig":
        return replace(self, **kw)


class TraceDivergence(NamedTuple):
    """Location of the first mismatch between two decode traces."""
    iteration: int
    layer: int
    check: int
    var: int
    field: str


@dataclass
class DecodeTrace:
    """Per-edge message log in canonical order.

    Within each iteration, edges are visited layer by layer, variables
    ascending inside a layer, each variable's check slots in adjacency
    order; ``edge_var``/``edge_check``/``edge_layer`` spell that order
    out once. Four parallel arrays of ``iterations * edges`` rows hold
    the check-output sign and magnitude and the refreshed outgoing
    message sign and magnitude.
    """

    iterations: int
    edge_var: np.ndarray
    edge_check: np.ndarray
    edge_layer: np.ndarray
    r_sign: np.ndarray
    r_mag: np.ndarray
    l_sign: np.ndarray
    l_mag: np.ndarray

    def first_divergence(self, other: "DecodeTrace") -> Optional[TraceDivergence]:
        """First row where two traces disagree, or None when the shorter
        trace is a prefix of the longer and both ran equally long."""
        e = self.edge_var.size
        rows = min(self.iterations, other.iterations) * e
        best_row, best_name = rows, None
        for name in ("r_sign", "r_mag", "l_sign", "l_mag"):
            a = getattr(self, name)[:rows]
            b = getattr(other, name)[:rows]
            if not np.array_equal(a, b):
                row = int(np.nonzero(a != b)[0][0])
                if row < best_row:
                    best_row, best_name = row, name
        if best_name is not None:
            k = best_row % e
            return TraceDivergence(best_row // e, int(self.edge_layer[k]),
                                   int(self.edge_check[k]),
                                   int(self.edge_var[k]), best_name)
        if self.iterations != other.iterations:
            k = 0
            return TraceDivergence(min(self.iterations, other.iterations),
                                   int(self.edge_layer[k]), int(self.edge_check[k]),
                                   int(self.edge_var[k]), "iterations")
        return None


@dataclass
class DecodeResult:
    """Outcome of one decode.

    ``converged`` is true iff the returned bits satisfy every check at
    the point the decoder stopped. ``syndrome_per_iteration`` records
    that test after each executed iteration. ``counters`` carries the
    update-event census for the vector-based decoders, None otherwise.
    """

    bits: np.ndarray
    converged: bool
    iterations_used: int
    counters: Optional[EventCounters]
    trace: Optional[DecodeTrace]
    syndrome_per_iteration: np.ndarray


def _canonical_edge_order(matrix: ParityCheckMatrix):
    cached = getattr(matrix, "_edge_order_cache", None)
    if cached is not None:
        return cached
    parts = [matrix.var_edges[matrix.var_ptr[v]:matrix.var_ptr[v + 1]]
             for v in matrix.layer_vars]
    order = np.concatenate(parts).astype(np.int32)
    evar = np.repeat(matrix.layer_vars,
                     matrix.var_deg[matrix.layer_vars]).astype(np.int32)
    echeck = matrix.edge_check[order]
    elayer = matrix.layer_of[evar]
    cached = (order, evar, echeck, elayer)
    matrix._edge_order_cache = cached
    return cached


def _check_inputs(matrix: ParityCheckMatrix, llrs: FixedLlrs,
                  config: DecodeConfig) -> tuple[np.ndarray, np.ndarray]:
    if int(matrix.check_deg.min()) < 2:
        raise ValueError("decoders need every check to tap at least two variables")
    signs = np.ascontiguousarray(llrs.signs, dtype=np.int8)
    mags = np.ascontiguousarray(llrs.mags, dtype=np.int32)
    if signs.shape != (matrix.n,) or mags.shape != (matrix.n,):
        raise ValueError(f"expected {matrix.n} quantized channel values")
    if not np.all((signs == 1) | (signs == -1)):
        raise ValueError("signs must be +1 or -1")
    if mags.min() < 0 or mags.max() > config.fmt.magnitude_max:
        raise ValueError("magnitudes must fit the message format")
    return signs, mags


def _new_outputs(matrix: ParityCheckMatrix, config: DecodeConfig):
    bits = np.zeros(matrix.n, dtype=np.uint8)
    synd = np.zeros(config.max_iterations, dtype=np.uint8)
    return bits, synd


def _trace_buffers(matrix: ParityCheckMatrix, config: DecodeConfig, on: bool):
    rows = config.max_iterations * matrix.num_edges if on else 0
    return (np.empty(rows, np.int8), np.empty(rows, np.int32),
            np.empty(rows, np.int8), np.empty(rows, np.int32))


def _build_trace(matrix, iterations, bufs) -> DecodeTrace:
    _, evar, echeck, elayer = _canonical_edge_order(matrix)
    rows = iterations * matrix.num_edges
    rs, rm, ls, lm = bufs
    return DecodeTrace(iterations, evar, echeck, elayer,
                       rs[:rows].copy(), rm[:rows].copy(),
                       ls[:rows].copy(), lm[:rows].copy())


def _caps(matrix: ParityCheckMatrix, config: DecodeConfig):
    deg = matrix.check_deg.astype(np.int32)
    if config.mode == "exact" or config.vector_capacity is None:
        caps = deg.copy()
    else:
        caps = np.minimum(deg, np.int32(config.vector_capacity))
    return caps, int(caps.max())


_MODE_CODES = {"exact": 0, "three_min": 1, "simplified": 2}


def decode_flooding(matrix: ParityCheckMatrix, llrs: FixedLlrs,
                    config: DecodeConfig = DecodeConfig()) -> DecodeResult:
    """Flooding schedule: every check output from the previous
    iteration's messages, then every variable update."""
    signs, mags = _check_inputs(matrix, llrs, config)
    num, shift = alpha_params(config.alpha)
    bits, synd = _new_outputs(matrix, config)
    iters, conv, _ = _kernels.flood_kernel(
        matrix.n, matrix.check_ptr, matrix.check_vars, matrix.var_ptr,
        matrix.var_edges, signs, mags, config.max_iterations, num, shift,
        config.fmt.magnitude_max, config.fmt.accumulator_max,
        config.early_termination, bits, synd)
    return DecodeResult(bits, bool(conv), iters, None, None, synd[:iters].copy())


def decode_row_layered(matrix: ParityCheckMatrix, llrs: FixedLlrs,
                       config: DecodeConfig = DecodeConfig()) -> DecodeResult:
    """Row-layered schedule: per layer, each check refreshes its stored
    output from the variables' current wires; a single layer reproduces
    flooding exactly."""
    signs, mags = _check_inputs(matrix, llrs, config)
    num, shift = alpha_params(config.alpha)
    bits, synd = _new_outputs(matrix, config)
    iters, conv, _ = _kernels.row_layered_kernel(
        matrix.n, matrix.check_ptr, matrix.check_vars, matrix.var_ptr,
        matrix.var_edges, matrix.row_layer_ptr, matrix.row_layer_checks,
        signs, mags, matrix.max_check_degree, config.max_iterations, num,
        shift, config.fmt.magnitude_max, config.fmt.accumulator_max,
        config.early_termination, bits, synd)
    return DecodeResult(bits, bool(conv), iters, None, None, synd[:iters].copy())


def decode_column_original(matrix: ParityCheckMatrix, llrs: FixedLlrs,
                           config: DecodeConfig = DecodeConfig(), *,
                           record_trace: bool = False) -> DecodeResult:
    """Column-layered schedule with full per-check message storage; every
    touched check rescans its neighbors for the sign product and min."""
    signs, mags = _check_inputs(matrix, llrs, config)
    num, shift = alpha_params(config.alpha)
    bits, synd = _new_outputs(matrix, config)
    bufs = _trace_buffers(matrix, config, record_trace)
    iters, conv, _ = _kernels.col_original_kernel(
        matrix.n, matrix.check_ptr, matrix.check_vars, matrix.var_ptr,
        matrix.var_checks, matrix.var_edges, matrix.layer_ptr,
        matrix.layer_vars, matrix.max_var_degree, signs, mags,
        config.max_iterations, num, shift, config.fmt.magnitude_max,
        config.fmt.accumulator_max, config.early_termination, bits, synd,
        record_trace, *bufs)
    trace = _build_trace(matrix, iters, bufs) if record_trace else None
    return DecodeResult(bits, bool(conv), iters, None, trace, synd[:iters].copy())


def _vector_result(matrix, config, bits, synd, counters, iters, conv,
                   status, bufs, record_trace):
    if status != 0:
        raise EmptyVectorError(
            "removal emptied a check vector; configured capacity "
            f"{config.vector_capacity} cannot serve this schedule")
    frames = np.zeros(iters, dtype=np.int64)
    frames[:] = 1
    census = EventCounters(counters[:iters].copy(), frames, matrix.m)
    trace = _build_trace(matrix, iters, bufs) if record_trace else None
    return DecodeResult(bits, bool(conv), iters, census, trace, synd[:iters].copy())


def decode_column_incremental(matrix: ParityCheckMatrix, llrs: FixedLlrs,
                              config: DecodeConfig = DecodeConfig(), *,
                              record_trace: bool = False,
                              _skip_remove_layer: int = -1) -> DecodeResult:
    """Column-layered schedule on compressed check state.

    Each check keeps its sorted small-magnitude vector and exact sign
    product; one layer update removes the stale entry (yielding the
    check output on the fly), runs the variable update, and reinserts
    the refreshed magnitude under the configured mode. The private
    ``_skip_remove_layer`` suppresses removal in the check-output path
    of one layer; it exists so harness sensitivity tests can plant a
    known fault.
    """
    signs, mags = _check_inputs(matrix, llrs, config)
    num, shift = alpha_params(config.alpha)
    caps, capmax = _caps(matrix, config)
    bits, synd = _new_outputs(matrix, config)
    counters = np.zeros((config.max_iterations, len(EVENT_CLASSES)), dtype=np.int64)
    bufs = _trace_buffers(matrix, config, record_trace)
    iters, conv, status = _kernels.col_incremental_kernel(
        matrix.n, matrix.check_ptr, matrix.check_vars, matrix.var_ptr,
        matrix.var_checks, matrix.var_edges, matrix.layer_ptr,
        matrix.layer_vars, matrix.edge_key, caps, capmax,
        matrix.max_var_degree, signs, mags, config.max_iterations, num, shift,
        config.fmt.magnitude_max, config.fmt.accumulator_max,
        config.early_termination, _MODE_CODES[config.mode],
        _skip_remove_layer, bits, synd, counters, record_trace, *bufs)
    return _vector_result(matrix, config, bits, synd, counters, iters, conv,
                          status, bufs, record_trace)


def decode_column_pipelined(matrix: ParityCheckMatrix, llrs: FixedLlrs,
                            config: DecodeConfig = DecodeConfig(), *,
                            record_trace: bool = False) -> DecodeResult:
    """Incremental column-layered schedule with check outputs computed
    ``pipeline_depth`` layers ahead of their commit, reading whatever
    vector state the last committed layer left behind. Depth 0 matches
    the unpipelined decoder update for update."""
    if config.pipeline_depth >= matrix.num_layers:
        raise ValueError(
            f"pipeline depth {config.pipeline_depth} must be smaller than "
            f"the layer count {matrix.num_layers}")
    signs, mags = _check_inputs(matrix, llrs, config)
    num, shift = alpha_params(config.alpha)
    caps, capmax = _caps(matrix, config)
    bits, synd = _new_outputs(matrix, config)
    counters = np.zeros((config.max_iterations, len(EVENT_CLASSES)), dtype=np.int64)
    bufs = _trace_buffers(matrix, config, record_trace)
    iters, conv, status = _kernels.col_pipelined_kernel(
        matrix.n, matrix.check_ptr, matrix.check_vars, matrix.var_ptr,
        matrix.var_checks, matrix.var_edges, matrix.layer_ptr,
        matrix.layer_vars, matrix.edge_key, caps, capmax,
        matrix.max_var_degree, signs, mags, config.max_iterations, num, shift,
        config.fmt.magnitude_max, config.fmt.accumulator_max,
        config.early_termination, _MODE_CODES[config.mode],
        config.pipeline_depth, bits, synd, counters, record_trace, *bufs)
    return _vector_result(matrix, config, bits, synd, counters, iters, conv,
                          status, bufs, record_trace)


DECODERS = {
    "flooding": decode_flooding,
    "row": decode_row_layered,
    "col-original": decode_column_original,
    "col-incremental": decode_column_incremental,
    "col-pipelined": decode_column_pipelined,
}
