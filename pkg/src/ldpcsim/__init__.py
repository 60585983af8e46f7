"""Fixed-point LDPC decoding playground.

A library and CLI for studying column-layered scaled min-sum decoding
with incremental sorted-magnitude check updates, next to flooding and
row-layered baselines. Everything runs on a small sign-magnitude
integer format so that two implementations of the same schedule can be
compared bit for bit, and a Monte-Carlo harness measures frame-error
rate, iteration counts, and update-event statistics.

Layout:

- :mod:`ldpcsim.codes` -- parity-check matrices, quasi-cyclic
  construction, alist and shift-table file formats, layer grouping.
- :mod:`ldpcsim.channel` -- BPSK over AWGN, LLR computation, and the
  sign-magnitude quantizer.
- :mod:`ldpcsim.core` -- the fixed-point arithmetic contracts and a
  deliberately plain reference model of the sorted-vector state
  (remove, reinsert, check-output reconstruction, vertical update).
- :mod:`ldpcsim.decoders` -- the five schedules, compiled for speed,
  with optional full message traces for equivalence proofs.
- :mod:`ldpcsim.instrumentation` -- update-event census plus hardware
  cost models (comparator count, message memory, throughput).
- :mod:`ldpcsim.sim` -- deterministic Monte-Carlo sweeps, census and
  equivalence runs, stable CSV emitters.
- :mod:`ldpcsim.cli` -- the ``ldpcsim`` command.
"""

from .channel import (FixedLlrs, FixedPointFormat, NoiseSpec, SignMag,
                      llr_of, quantize, quantize_array, transmit_all_zero)
from .codes import (AlistFormatError, ParityCheckMatrix, QcBase,
                    QcConstructionError, dumps_alist, dumps_qc_base,
                    expand_qc, has_four_cycles, load_alist, load_qc_base,
                    random_qc_base, regroup_layers, syndrome_ok,
                    wimax_r12_base)
from .core import (EmptyVectorError, SortedMagVector, TempMagVector,
                   alpha_params, compute_rcv, hard_decision, init_state,
                   saturate, scale_three_quarters, scale_value, step_a_remove,
                   step_b_insert, vertical_update)
from .decoders import (DECODERS, DecodeConfig, DecodeResult, DecodeTrace,
                       TraceDivergence, decode_column_incremental,
                       decode_column_original, decode_column_pipelined,
                       decode_flooding, decode_row_layered)
from .instrumentation import (EVENT_CLASSES, EventCounters, ThroughputModel,
                              classify_event, comparator_savings,
                              memory_savings, throughput)
from .sim import (DecoderAbort, EquivalenceReport, FerPoint, SimConfig,
                  fer_csv, frame_seed, resolve_code, run_census,
                  run_equivalence_check, run_fer_sweep)

__version__ = "0.1.0"

__all__ = [
    "AlistFormatError",
    "DECODERS",
    "DecodeConfig",
    "DecodeResult",
    "DecodeTrace",
    "DecoderAbort",
    "EmptyVectorError",
    "EquivalenceReport",
    "EVENT_CLASSES",
    "EventCounters",
    "FerPoint",
    "FixedLlrs",
    "FixedPointFormat",
    "NoiseSpec",
    "ParityCheckMatrix",
    "QcBase",
    "QcConstructionError",
    "SignMag",
    "SimConfig",
    "SortedMagVector",
    "TempMagVector",
    "ThroughputModel",
    "TraceDivergence",
    "alpha_params",
    "classify_event",
    "comparator_savings",
    "compute_rcv",
    "decode_column_incremental",
    "decode_column_original",
    "decode_column_pipelined",
    "decode_flooding",
    "decode_row_layered",
    "dumps_alist",
    "dumps_qc_base",
    "expand_qc",
    "fer_csv",
    "frame_seed",
    "hard_decision",
    "has_four_cycles",
    "init_state",
    "llr_of",
    "load_alist",
    "load_qc_base",
    "memory_savings",
    "quantize",
    "quantize_array",
    "random_qc_base",
    "regroup_layers",
    "resolve_code",
    "run_census",
    "run_equivalence_check",
    "run_fer_sweep",
    "saturate",
    "scale_three_quarters",
    "scale_value",
    "step_a_remove",
    "step_b_insert",
    "syndrome_ok",
    "throughput",
    "transmit_all_zero",
    "vertical_update",
    "wimax_r12_base",
]
