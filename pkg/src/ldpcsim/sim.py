"""Monte-Carlo simulation harness.

Drives frame-level sweeps over Eb/N0 points with the classic stopping
rule (collect at least ``min_frame_errors`` frame errors, capped at
``max_frames``), plus two special runs: an update-event census for the
vector decoders and a lockstep equivalence check between the rescanning
and incremental column decoders.

Determinism is absolute: every frame draws its noise from a substream
keyed by (master_seed, snr_index, frame_index), frames are tallied in
frame order, and the stop decision is made during that in-order walk.
Worker threads only compute; they never influence which frames count.
CSV emitters format numbers with fixed rules so repeated runs -- at any
worker count -- produce byte-identical files.

A frame counts as a frame error when the decoder failed to converge OR
the decoded word differs from the transmitted all-zero codeword; the
converged-but-wrong subset is additionally reported as undetected.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .channel import FixedLlrs, NoiseSpec, llr_of, quantize_array, transmit_all_zero
from .codes import (ParityCheckMatrix, expand_qc, load_alist, load_qc_base,
                    random_qc_base, wimax_r12_base)
from .core import EmptyVectorError
from .decoders import (DECODERS, DecodeConfig, decode_column_incremental,
                       decode_column_original, decode_column_pipelined)
from .instrumentation import EVENT_CLASSES

__all__ = [
    "SimConfig",
    "FerPoint",
    "DecoderAbort",
    "resolve_code",
    "run_fer_sweep",
    "fer_csv",
    "run_census",
    "run_equivalence_check",
    "EquivalenceReport",
    "frame_seed",
]

CHUNK = 256  # frames per worker task; fixed so scheduling cannot leak into results


class DecoderAbort(RuntimeError):
    """A decode aborted mid-sweep; carries what is needed to replay it."""

    def __init__(self, snr_db: float, frame_index: int, seed: int, cause: str):
        super().__init__(
            f"decoder abort at snr={snr_db} dB, frame {frame_index} "
            f"(frame seed {seed}): {cause}")
        self.snr_db = snr_db
        self.frame_index = frame_index
        self.seed = seed


@dataclass(frozen=True)
class SimConfig:
    """One simulation campaign: a code, a decoder, and sweep controls."""

    code: str
    decoder: str = "col-incremental"
    decode: DecodeConfig = field(default_factory=DecodeConfig)
    snr_points: tuple = (2.0,)
    min_frame_errors: int = 50
    max_frames: int = 100_000
    master_seed: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(
                f"unknown decoder {self.decoder!r}; pick one of {sorted(DECODERS)}")
        if not self.snr_points:
            raise ValueError("need at least one SNR point")
        if self.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be at least 1")
        if self.max_frames < self.min_frame_errors:
            raise ValueError("max_frames must be at least min_frame_errors")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def with_(self, **kw) -> "SimConfig":
        return replace(self, **kw)


@dataclass
class FerPoint:
    """Tally of one SNR point of a sweep."""

    snr_db: float
    frames: int
    frame_errors: int
    undetected_errors: int
    bit_errors: int
    sum_iterations: int
    converged_frames: int
    sum_iterations_converged: int
    block_length: int

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.block_length)

    @property
    def avg_iter(self) -> float:
        return self.sum_iterations / self.frames

    @property
    def avg_iter_converged(self) -> float:
        if self.converged_frames == 0:
            return float("nan")
        return self.sum_iterations_converged / self.converged_frames


def resolve_code(spec: str) -> ParityCheckMatrix:
    """Build a parity-check matrix from a code spec string.

    Accepted forms: ``wimax-r12`` (the embedded 802.16e rate-1/2 table
    at z=96), ``qc:ROWS,COLS,Z,SEED`` (deterministic random 4-cycle-free
    shift table), a ``.alist`` path, or a ``.qcb``/``.qc`` shift-table
    path.
    """
    if spec == "wimax-r12":
        return expand_qc(wimax_r12_base())
    if spec.startswith("qc:"):
        parts = spec[3:].split(",")
        if len(parts) != 4:
            raise ValueError("qc spec must be qc:ROWS,COLS,Z,SEED")
        try:
            rb, cb, z, seed = (int(p) for p in parts)
        except ValueError as exc:
            raise ValueError(f"bad qc spec {spec!r}: {exc}") from None
        return expand_qc(random_qc_base(rb, cb, z, seed))
    if spec.endswith(".alist"):
        with open(spec, "r", encoding="ascii") as fh:
            return load_alist(fh)
    if spec.endswith((".qcb", ".qc")):
        with open(spec, "r", encoding="ascii") as fh:
            return expand_qc(load_qc_base(fh))
    raise ValueError(
        f"cannot interpret code spec {spec!r}: expected wimax-r12, "
        "qc:ROWS,COLS,Z,SEED, or a .alist/.qcb/.qc path")


def frame_seed(master_seed: int, snr_index: int, frame_index: int) -> int:
    """Substream seed for one frame, independent of scheduling."""
    ss = np.random.SeedSequence(entropy=(master_seed, snr_index, frame_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _make_llrs(matrix: ParityCheckMatrix, noise: NoiseSpec, seed: int,
               config: SimConfig) -> FixedLlrs:
    samples = transmit_all_zero(matrix.n, noise, seed)
    return quantize_array(llr_of(samples, noise), config.decode.fmt)


def _decode_chunk(matrix, config: SimConfig, noise: NoiseSpec, snr_index: int,
                  start: int, count: int):
    """Decode frames [start, start+count); returns per-frame records."""
    decode = DECODERS[config.decoder]
    err = np.zeros(count, np.uint8)
    und = np.zeros(count, np.uint8)
    bev = np.zeros(count, np.int32)
    itv = np.zeros(count, np.int32)
    cnv = np.zeros(count, np.uint8)
    abort = np.zeros(count, np.uint8)
    for i in range(count):
        seed = frame_seed(config.master_seed, snr_index, start + i)
        llrs = _make_llrs(matrix, noise, seed, config)
        try:
            res = decode(matrix, llrs, config.decode)
        except EmptyVectorError:
            abort[i] = 1
            continue
        nbits = int(res.bits.sum())
        wrong = (not res.converged) or nbits > 0
        err[i] = wrong
        und[i] = res.converged and nbits > 0
        bev[i] = nbits
        itv[i] = res.iterations_used
        cnv[i] = res.converged
    return err, und, bev, itv, cnv, abort


def _sweep_point(matrix, config: SimConfig, snr_index: int,
                 pool: ThreadPoolExecutor) -> FerPoint:
    snr_db = config.snr_points[snr_index]
    noise = NoiseSpec(snr_db, matrix.rate)
    point = FerPoint(snr_db, 0, 0, 0, 0, 0, 0, 0, matrix.n)
    pending = {}
    next_submit = 0
    window = config.workers + 2

    def submit():
        nonlocal next_submit
        while len(pending) < window and next_submit < config.max_frames:
            count = min(CHUNK, config.max_frames - next_submit)
            pending[next_submit] = pool.submit(
                _decode_chunk, matrix, config, noise, snr_index,
                next_submit, count)
            next_submit += count

    walk = 0
    submit()
    while walk < config.max_frames:
        err, und, bev, itv, cnv, abort = pending.pop(walk).result()
        submit()
        for i in range(err.size):
            if abort[i]:
                raise DecoderAbort(
                    snr_db, walk + i,
                    frame_seed(config.master_seed, snr_index, walk + i),
                    "removal emptied a check vector")
            point.frames += 1
            point.frame_errors += int(err[i])
            point.undetected_errors += int(und[i])
            point.bit_errors += int(bev[i])
            point.sum_iterations += int(itv[i])
            if cnv[i]:
                point.converged_frames += 1
                point.sum_iterations_converged += int(itv[i])
            if point.frame_errors >= config.min_frame_errors:
                return point
        walk += err.size
    return point


def run_fer_sweep(config: SimConfig,
                  matrix: Optional[ParityCheckMatrix] = None) -> list:
    """Run every SNR point of ``config``; deterministic for any worker
    count. Pass ``matrix`` to reuse an already-expanded code."""
    if matrix is None:
        matrix = resolve_code(config.code)
    points = []
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        for snr_index in range(len(config.snr_points)):
            points.append(_sweep_point(matrix, config, snr_index, pool))
    return points


def _meta_lines(config: SimConfig) -> list:
    d = config.decode
    cap = "full" if d.vector_capacity is None else str(d.vector_capacity)
    return [
        f"# code={config.code} decoder={config.decoder} mode={d.mode} "
        f"capacity={cap} pipeline={d.pipeline_depth} alpha={d.alpha:g} "
        f"qbits={d.fmt.message_bits} qstep={d.fmt.step:g} "
        f"max_iter={d.max_iterations} seed={config.master_seed}",
        "# frame error = not converged OR decoded word differs from the "
        "all-zero codeword; undetected = converged AND wrong",
    ]


def fer_csv(config: SimConfig, points) -> str:
    """Byte-stable CSV for a sweep (leading # metadata, then rows)."""
    out = io.StringIO()
    for line in _meta_lines(config):
        out.write(line + "\n")
    out.write("snr_db,frames,frame_errors,undetected_errors,bit_errors,"
              "fer,ber,avg_iter,avg_iter_converged\n")
    for p in points:
        out.write(f"{p.snr_db:g},{p.frames},{p.frame_errors},"
                  f"{p.undetected_errors},{p.bit_errors},{p.fer:.8g},"
                  f"{p.ber:.8g},{p.avg_iter:.6f},{p.avg_iter_converged:.6f}\n")
    return out.getvalue()


def run_census(config: SimConfig, snr_db: float, frames: int,
               matrix: Optional[ParityCheckMatrix] = None) -> str:
    """Decode ``frames`` frames at one SNR and return the update-event
    census as CSV: per iteration, the average count of each event class
    per check over the frames that executed that iteration."""
    d = config.decode
    if config.decoder not in ("col-incremental", "col-pipelined"):
        raise ValueError("census needs a vector-based decoder "
                         "(col-incremental or col-pipelined)")
    if d.mode not in ("three_min", "simplified"):
        raise ValueError("census needs mode three_min or simplified")
    if frames < 1:
        raise ValueError("census needs at least one frame")
    if matrix is None:
        matrix = resolve_code(config.code)
    noise = NoiseSpec(snr_db, matrix.rate)
    decode = DECODERS[config.decoder]
    rows = d.max_iterations
    ncls = len(EVENT_CLASSES)

    def census_chunk(start: int, count: int):
        counts = np.zeros((rows, ncls), np.int64)
        fpi = np.zeros(rows, np.int64)
        for i in range(count):
            seed = frame_seed(config.master_seed, 0, start + i)
            llrs = _make_llrs(matrix, noise, seed, config)
            res = decode(matrix, llrs, config.decode)
            it = res.counters.counts.shape[0]
            counts[:it] += res.counters.counts
            fpi[:it] += 1
        return counts, fpi

    counts = np.zeros((rows, ncls), np.int64)
    fpi = np.zeros(rows, np.int64)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futs = [pool.submit(census_chunk, s, min(CHUNK, frames - s))
                for s in range(0, frames, CHUNK)]
        for f in futs:
            c, fp = f.result()
            counts += c
            fpi += fp

    out = io.StringIO()
    for line in _meta_lines(config):
        out.write(line + "\n")
    out.write(f"# snr_db={snr_db:g} frames={frames} checks={matrix.m}\n")
    out.write("iteration,event_class,average_per_check,frames_counted\n")
    for it in range(rows):
        if fpi[it] == 0:
            continue
        denom = float(fpi[it]) * matrix.m
        for cls, name in enumerate(EVENT_CLASSES):
            out.write(f"{it + 1},{name},{counts[it, cls] / denom:.6f},"
                      f"{fpi[it]}\n")
    return out.getvalue()


@dataclass
class EquivalenceReport:
    """Outcome of a lockstep equivalence run."""

    ok: bool
    frames: int
    detail: str

    def __str__(self):
        return self.detail


def run_equivalence_check(config: SimConfig, frames: int,
                          corrupt_step_a: bool = False,
                          matrix: Optional[ParityCheckMatrix] = None
                          ) -> EquivalenceReport:
    """Lockstep the rescanning and incremental column decoders (exact
    mode, full capacity) over ``frames`` frames, comparing full message
    traces, decoded bits, and iteration counts; also lockstep the
    depth-0 pipelined decoder against the incremental one under the
    configured mode. ``corrupt_step_a`` suppresses the removal step in
    the first layer of the incremental side, a planted fault that a
    healthy harness must locate.
    """
    if matrix is None:
        matrix = resolve_code(config.code)
    exact = config.decode.with_(mode="exact", vector_capacity=None,
                                pipeline_depth=0)
    samemode = config.decode.with_(pipeline_depth=0)
    snr_db = config.snr_points[0]
    noise = NoiseSpec(snr_db, matrix.rate)
    skip = 0 if corrupt_step_a else -1
    for idx in range(frames):
        seed = frame_seed(config.master_seed, 0, idx)
        llrs = _make_llrs(matrix, noise, seed, config)
        ro = decode_column_original(matrix, llrs, exact, record_trace=True)
        ri = decode_column_incremental(matrix, llrs, exact, record_trace=True,
                                       _skip_remove_layer=skip)
        div = ro.trace.first_divergence(ri.trace)
        pair = "original-vs-incremental"
        if div is None:
            rj = decode_column_incremental(matrix, llrs, samemode,
                                           record_trace=True)
            rp = decode_column_pipelined(matrix, llrs, samemode,
                                         record_trace=True)
            div = rj.trace.first_divergence(rp.trace)
            pair = "incremental-vs-pipelined-depth-0"
        if div is not None:
            detail = (f"DIVERGED [{pair}] frame {idx} (seed {seed}) at "
                      f"iteration {div.iteration}, layer {div.layer}, "
                      f"check {div.check}, var {div.var}, field {div.field}")
            return EquivalenceReport(False, idx + 1, detail)
    return EquivalenceReport(
        True, frames,
        f"PASS: {frames} frames bit-identical on {config.code} "
        f"(traces, bits, iteration counts)")
