"""Event census and hardware cost models.

The sorted-vector decoders classify every check update into one of five
classes, keyed only on whether removal found the stale entry and where
(if anywhere) the refreshed magnitude landed:

* ``type_i_removed_and_inserted``: the stale entry was in the vector,
  so the update is a true replace.
* ``kept_full_new_is_min1`` / ``min2`` / ``min3``: nothing was removed
  but the new magnitude earned slot 1, 2, or 3 of a full vector.
* ``discarded``: nothing was removed and the new magnitude lost, so the
  kept magnitudes did not change at all (only the sign product moved).

The cost formulas express what the compressed check state saves over
keeping every incoming magnitude: fewer comparators in the min search
and fewer stored bits per check, plus the clock-cycle throughput model
of the pipelined schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EVENT_CLASSES",
    "EventCounters",
    "classify_event",
    "comparator_savings",
    "memory_savings",
    "ThroughputModel",
    "throughput",
]

EVENT_CLASSES = (
    "type_i_removed_and_inserted",
    "kept_full_new_is_min1",
    "kept_full_new_is_min2",
    "kept_full_new_is_min3",
    "discarded",
)


def classify_event(removed_flag: bool, position: int) -> str:
    """Name the census class of one update.

    ``position`` is the 1-based insert slot reported by the insertion
    step, 0 for a discard. Any update that removed its stale entry is
    Type I regardless of where the new value landed (zero magnitudes
    included). Positions above 3 only occur at large capacities and
    also count as Type I updates only when removed; without removal
    they are binned with the deepest named slot.
    """
    if removed_flag:
        return EVENT_CLASSES[0]
    if position == 0:
        return EVENT_CLASSES[4]
    if position < 0:
        raise ValueError(f"position must be >= 0, got {position}")
    return EVENT_CLASSES[min(position, 3)]


@dataclass
class EventCounters:
    """Census totals: one row per executed iteration, one column per
    class in ``EVENT_CLASSES`` order, plus how many frames executed
    each iteration and how many checks one frame contributes."""

    counts: np.ndarray
    frames: np.ndarray
    checks_per_frame: int

    @classmethod
    def zeros(cls, iterations: int, checks_per_frame: int) -> "EventCounters":
        return cls(np.zeros((iterations, len(EVENT_CLASSES)), dtype=np.int64),
                   np.zeros(iterations, dtype=np.int64), checks_per_frame)

    def merge(self, other: "EventCounters") -> "EventCounters":
        if self.checks_per_frame != other.checks_per_frame:
            raise ValueError("cannot merge counters from different codes")
        rows = max(self.counts.shape[0], other.counts.shape[0])
        out = EventCounters.zeros(rows, self.checks_per_frame)
        for src in (self, other):
            r = src.counts.shape[0]
            out.counts[:r] += src.counts
            out.frames[:r] += src.frames
        return out

    def average_per_check(self, iteration: int) -> np.ndarray:
        """Per-class events per check in a 1-based iteration, averaged
        over the frames that executed it."""
        i = iteration - 1
        if not 0 <= i < self.counts.shape[0]:
            raise ValueError(f"iteration {iteration} out of range")
        f = int(self.frames[i])
        if f == 0:
            return np.full(len(EVENT_CLASSES), np.nan)
        return self.counts[i] / (f * self.checks_per_frame)


def comparator_savings(d_c: int) -> float:
    """Fraction of min-search comparators removed by keeping a sorted
    three-entry vector instead of rescanning all d_c inputs.

    A full serial rescan of one check needs d_c - 2 comparators; the
    sorted vector needs 2 (insertion against two boundaries), saving
    ((d_c - 2) - 2) / (d_c - 2). Requires d_c >= 4.
    """
    if d_c < 4:
        raise ValueError(f"check degree must be >= 4, got {d_c}")
    return ((d_c - 2) - 2) / (d_c - 2)


def memory_savings(d_c: int, q: int, idx_bits: int) -> float:
    """Fraction of per-check message storage saved by the compressed state.

    Full storage keeps d_c magnitudes of q - 1 bits plus d_c signs:
    d_c * q bits. The compressed state keeps the signs (d_c bits), three
    tagged magnitudes of (q - 1) + idx_bits bits each, and one sign
    product bit: 3 * ((q - 1) + idx_bits) + 1. ``idx_bits`` must cover
    the layer count of the schedule.
    """
    if d_c < 1:
        raise ValueError(f"check degree must be positive, got {d_c}")
    if q < 2:
        raise ValueError(f"message width must be >= 2 bits, got {q}")
    if idx_bits < 1:
        raise ValueError(f"index width must be positive, got {idx_bits}")
    vector_bits = 3 * ((q - 1) + idx_bits) + 1
    full_bits = d_c * q
    return (full_bits - d_c - vector_bits) / full_bits


@dataclass(frozen=True)
class ThroughputModel:
    """Clock-cycle model of the pipelined decoder.

    ``init_cycles`` loads the channel values (one layer per cycle),
    each iteration costs one cycle per layer, and the pipeline adds a
    constant flush latency.
    """

    f_clk_hz: float
    info_bits: int
    init_cycles: int
    iter_cycles: int
    pipeline_cycles: int

    def __post_init__(self):
        if self.f_clk_hz <= 0 or self.info_bits <= 0:
            raise ValueError("clock and info bits must be positive")
        if min(self.init_cycles, self.iter_cycles, self.pipeline_cycles) < 0:
            raise ValueError("cycle counts must be nonnegative")
        if self.init_cycles + self.iter_cycles + self.pipeline_cycles <= 0:
            raise ValueError("total cycles must be positive")


def throughput(model: ThroughputModel) -> float:
    """Information throughput in bits per second: f_clk * info_bits
    over the total cycles of one decode."""
    cycles = model.init_cycles + model.iter_cycles + model.pipeline_cycles
    return model.f_clk_hz * model.info_bits / cycles
