"""Scalar building blocks of the column-layered min-sum decoders.

Each check node keeps a compressed view of its incoming message
magnitudes: a small vector of the smallest magnitudes, sorted
ascending, each tagged with the index of the column layer (or column)
it came from, plus the exact running product of all incoming signs.
One column-layer update then touches a check in two steps: removal of
the stale entry for the active layer (which also yields the min-sum
check output on the fly), and sorted reinsertion of the refreshed
message after the variable update.

The functions here are the reference semantics. The production
decoders run the same logic inside compiled kernels; dedicated tests
hold the two routes bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import FixedLlrs, FixedPointFormat, SignMag
from .codes import ParityCheckMatrix

__all__ = [
    "EmptyVectorError",
    "SortedMagVector",
    "TempMagVector",
    "DecoderState",
    "MODES",
    "alpha_params",
    "scale_three_quarters",
    "scale_value",
    "saturate",
    "init_state",
    "step_a_remove",
    "compute_rcv",
    "vertical_update",
    "step_b_insert",
    "hard_decision",
]

MODES = ("exact", "three_min", "simplified")


class EmptyVectorError(RuntimeError):
    """Removal left no magnitude to take a minimum over; the configured
    vector capacity is too small for this schedule."""


@dataclass
class SortedMagVector:
    """Per-check compressed state: up to ``capacity`` magnitudes sorted
    ascending with their source indices, and the exact product of all
    incoming message signs (+1 or -1)."""

    capacity: int
    mags: list = field(default_factory=list)
    idxs: list = field(default_factory=list)
    sign_product: int = 1

    @property
    def valid_count(self) -> int:
        return len(self.mags)

    def copy(self) -> "SortedMagVector":
        return SortedMagVector(self.capacity, list(self.mags), list(self.idxs),
                               self.sign_product)


@dataclass
class TempMagVector:
    """A vector mid-update: the entry for one index removed (when it was
    present) and that message's sign divided out of the product."""

    capacity: int
    mags: list
    idxs: list
    sign_product: int
    removed_flag: bool


def saturate(value: int, limit: int) -> int:
    """Clamp to the symmetric range [-limit, +limit]; never wraps."""
    if value > limit:
        return limit
    if value < -limit:
        return -limit
    return value


def scale_three_quarters(value: int) -> int:
    """Multiply by 3/4 in shift-add hardware style.

    The magnitude becomes (|v| >> 1) + (|v| >> 2), each shift truncating
    toward zero, and the sign is reattached, so the map is odd-symmetric
    and never grows a magnitude. Note (7 >> 1) + (7 >> 2) = 4, one less
    than floor(0.75 * 7): both shifts drop fractional bits.
    """
    mag = abs(value)
    scaled = (mag >> 1) + (mag >> 2)
    return -scaled if value < 0 else scaled


def alpha_params(alpha: float) -> tuple[int, bool]:
    """Resolve a scaling factor to (numerator/256, use_shift_datapath).

    0.75 selects the shift-add datapath of :func:`scale_three_quarters`;
    any other factor in (0, 1] is quantized to num/256 and applied as
    (mag * num) >> 8.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"scaling factor must be in (0, 1], got {alpha}")
    if alpha == 0.75:
        return 192, True
    return int(round(alpha * 256.0)), False


def scale_value(value: int, alpha_num: int, use_shift: bool) -> int:
    if use_shift:
        return scale_three_quarters(value)
    mag = (abs(value) * alpha_num) >> 8
    return -mag if value < 0 else mag


def init_state(matrix: ParityCheckMatrix, llrs: FixedLlrs,
               capacity: int | None = None) -> "DecoderState":
    """Build the decode-start state from quantized channel values.

    Every edge message starts as the variable's intrinsic value, every
    total as the intrinsic alone, and every check vector holds its
    min(capacity, degree) smallest incoming magnitudes ascending, ties
    kept in neighbor order, alongside the exact product of all its
    incoming signs. ``capacity=None`` keeps every magnitude (full,
    exact-mode storage).
    """
    signs, mags = llrs
    signs = np.asarray(signs, dtype=np.int8)
    mags = np.asarray(mags, dtype=np.int32)
    if signs.shape != (matrix.n,) or mags.shape != (matrix.n,):
        raise ValueError(f"expected {matrix.n} quantized values")
    if mags.min() < 0:
        raise ValueError("magnitudes must be nonnegative")
    edge_sign = signs[matrix.check_vars].copy()
    edge_mag = mags[matrix.check_vars].copy()
    total = (signs.astype(np.int32) * mags).astype(np.int32)
    vectors = []
    for c in range(matrix.m):
        lo, hi = int(matrix.check_ptr[c]), int(matrix.check_ptr[c + 1])
        cap = hi - lo if capacity is None else min(capacity, hi - lo)
        vec = SortedMagVector(cap)
        sp = 1
        for e in range(lo, hi):
            sp *= int(edge_sign[e])
            _stream_insert(vec, int(edge_mag[e]), int(matrix.edge_key[e]))
        vec.sign_product = sp
        vectors.append(vec)
    return DecoderState(
        intrinsic_sign=signs.copy(), intrinsic_mag=mags.copy(),
        edge_sign=edge_sign, edge_mag=edge_mag, total=total,
        vectors=vectors)


def _stream_insert(vec: SortedMagVector, mag: int, idx: int) -> None:
    # keep the smallest `capacity` values seen so far; stable on ties
    if vec.valid_count == vec.capacity:
        if vec.capacity == 0 or mag >= vec.mags[-1]:
            return
        vec.mags.pop()
        vec.idxs.pop()
    pos = _insert_pos(vec.mags, mag)
    vec.mags.insert(pos, mag)
    vec.idxs.insert(pos, idx)


def _insert_pos(mags: list, mag: int) -> int:
    # first strictly larger slot, so an equal incumbent keeps the lower position
    for i, m in enumerate(mags):
        if mag < m:
            return i
    return len(mags)


@dataclass
class DecoderState:
    """Mutable per-frame decoder state.

    Edge arrays are indexed by the matrix's check-major edge ids. The
    incremental decoders never read ``edge_mag``; outgoing magnitudes
    are consumed the moment they are produced and only the compressed
    vectors persist.
    """

    intrinsic_sign: np.ndarray
    intrinsic_mag: np.ndarray
    edge_sign: np.ndarray
    edge_mag: np.ndarray
    total: np.ndarray
    vectors: list


def step_a_remove(vec: SortedMagVector, index: int, old_sign: int) -> TempMagVector:
    """Remove the stale contribution of ``index`` from a check vector.

    The entry whose tag equals ``index`` is dropped when present; the
    magnitudes pass through unchanged when it is not (it was evicted
    earlier by a fuller vector). Either way ``old_sign`` is divided out
    of the sign product, because the sign product is exact over all
    incoming messages. The input vector is not modified.
    """
    if old_sign not in (-1, 1):
        raise ValueError(f"old_sign must be +1 or -1, got {old_sign}")
    mags, idxs, removed = [], [], False
    for m, i in zip(vec.mags, vec.idxs):
        if not removed and i == index:
            removed = True
            continue
        mags.append(m)
        idxs.append(i)
    return TempMagVector(vec.capacity, mags, idxs,
                         vec.sign_product * old_sign, removed)


def compute_rcv(temp: TempMagVector, *, empty_is_zero: bool = False) -> SignMag:
    """Min-sum check output from a removal result: the reduced sign
    product paired with the smallest remaining magnitude.

    An empty remainder means the capacity cannot serve this schedule;
    that aborts with :class:`EmptyVectorError` unless the caller opts
    into treating it as magnitude zero.
    """
    if not temp.mags:
        if empty_is_zero:
            return SignMag(temp.sign_product, 0)
        raise EmptyVectorError(
            "no magnitude left after removal; vector capacity too small")
    return SignMag(temp.sign_product, temp.mags[0])


def vertical_update(intrinsic: int, incoming: Sequence[int],
                    fmt: FixedPointFormat, *, alpha: float = 0.75
                    ) -> tuple[list, int]:
    """Variable-node update from check outputs.

    For each connected check, the outgoing message is the intrinsic
    plus the scaled sum of the other checks' outputs, saturated to the
    accumulator and requantized to message format. The returned total
    adds in all outputs and stays at accumulator width; only its sign
    feeds hard decisions. A zero outgoing value carries sign +1.
    """
    num, use_shift = alpha_params(alpha)
    acc = fmt.accumulator_max
    mmax = fmt.magnitude_max
    s = sum(incoming)
    out = []
    for r in incoming:
        wide = saturate(intrinsic + scale_value(s - r, num, use_shift), acc)
        sign = -1 if wide < 0 else 1
        out.append(SignMag(sign, min(abs(wide), mmax)))
    total = saturate(intrinsic + scale_value(s, num, use_shift), acc)
    return out, total


def step_b_insert(temp: TempMagVector, index: int, mag: int, sign: int,
                  mode: str = "three_min") -> tuple[SortedMagVector, int]:
    """Reinsert a refreshed message into a check vector.

    Returns the updated vector and the 1-based insert position, 0 when
    the magnitude was discarded. The new sign always enters the sign
    product, discarded or not; the product stays exact while the
    magnitudes are the approximate part.

    Insertion keeps ascending order with equal incumbents ahead of the
    newcomer. With a full vector, ``three_min`` admits the value only
    when it beats the largest kept entry, and ``simplified`` admits it
    only when it beats the second largest, skipping the final compare
    entirely (one comparator less; a value between the last two entries
    is thrown away as the price). ``exact`` expects never to see a full
    vector, since removal always precedes insertion at full capacity.
    """
    if mode not in MODES:
        raise ValueError(f"unknown insertion mode {mode!r}")
    if sign not in (-1, 1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if mag < 0:
        raise ValueError("magnitude must be nonnegative")
    if index in temp.idxs:
        raise ValueError(f"index {index} already present; removal must precede")
    new_sign_product = temp.sign_product * sign
    mags, idxs = list(temp.mags), list(temp.idxs)
    cap = temp.capacity
    if len(mags) >= cap:
        if mode == "exact":
            raise ValueError("full vector in exact mode; capacity too small")
        if mode == "simplified" and not temp.removed_flag:
            admit = cap >= 2 and mag < mags[cap - 2]
        else:
            admit = mag < mags[cap - 1]
        if not admit:
            return SortedMagVector(cap, mags, idxs, new_sign_product), 0
        mags.pop()
        idxs.pop()
    pos = _insert_pos(mags, mag)
    mags.insert(pos, mag)
    idxs.insert(pos, index)
    return SortedMagVector(cap, mags, idxs, new_sign_product), pos + 1


def hard_decision(state: DecoderState) -> np.ndarray:
    """Bits from totals: 1 where the total is negative, 0 otherwise
    (a zero total decodes to 0)."""
    return (state.total < 0).astype(np.uint8)
