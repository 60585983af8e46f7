"""Command-line front end.

Three subcommands: ``fer`` sweeps frame-error rate over SNR points,
``census`` tabulates vector-update event statistics, and ``equiv``
locksteps the rescanning and incremental column decoders to prove (or
locate the first break of) bit-exact equivalence.

Exit codes: 0 on success, 1 for configuration errors or an equivalence
divergence, 2 when a decode aborts mid-run.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .channel import FixedPointFormat
from .core import EmptyVectorError
from .decoders import DecodeConfig
from .sim import (DecoderAbort, SimConfig, fer_csv, run_census,
                  run_equivalence_check, run_fer_sweep)

__all__ = ["main", "entry"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; this tool reserves 2 for decoder
    aborts, so parser errors are rerouted to exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _parse_snr(text: str) -> tuple:
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("range form is START:STOP:STEP")
            start, stop, step = (float(p) for p in parts)
            if step <= 0:
                raise ValueError("step must be positive")
            if stop < start:
                raise ValueError("empty range")
            count = int(round((stop - start) / step)) + 1
            return tuple(round(start + i * step, 6) for i in range(count))
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad --snr {text!r}: {exc}") from None


def _parse_capacity(text: str) -> Optional[int]:
    if text == "full":
        return None
    try:
        return int(text)
    except ValueError:
        raise ValueError(
            f"bad --capacity {text!r}: expected an integer or 'full'") from None


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--code", required=True,
                   help="wimax-r12 | qc:ROWS,COLS,Z,SEED | path.alist | path.qcb")
    p.add_argument("--decoder", default="col-incremental",
                   choices=["flooding", "row", "col-original",
                            "col-incremental", "col-pipelined"])
    p.add_argument("--mode", default="three-min",
                   choices=["exact", "three-min", "simplified"],
                   help="candidate admission rule for the vector decoders")
    p.add_argument("--capacity", default="3", metavar="L",
                   help="sorted-vector capacity (integer or 'full')")
    p.add_argument("--pipeline", type=int, default=0, metavar="P",
                   help="lookahead depth for the pipelined decoder")
    p.add_argument("--alpha", type=float, default=0.75,
                   help="check-output scaling factor")
    p.add_argument("--qbits", type=int, default=4,
                   help="message width in bits, sign included")
    p.add_argument("--qstep", type=float, default=0.5,
                   help="quantizer step size in LLR units")
    p.add_argument("--max-iter", type=int, default=10)
    p.add_argument("--snr", default="2.0",
                   help="Eb/N0 in dB: START:STOP:STEP or comma list")
    p.add_argument("--min-errors", type=int, default=50,
                   help="frame errors to collect per SNR point")
    p.add_argument("--max-frames", type=int, default=100_000,
                   help="hard frame cap per SNR point")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, metavar="CSV",
                   help="write output here instead of stdout")


def _build_config(args) -> SimConfig:
    decode = DecodeConfig(
        max_iterations=args.max_iter,
        alpha=args.alpha,
        vector_capacity=_parse_capacity(args.capacity),
        mode=args.mode.replace("-", "_"),
        pipeline_depth=args.pipeline,
        fmt=FixedPointFormat(message_bits=args.qbits, step=args.qstep),
    )
    return SimConfig(
        code=args.code,
        decoder=args.decoder,
        decode=decode,
        snr_points=_parse_snr(args.snr),
        min_frame_errors=args.min_errors,
        max_frames=args.max_frames,
        master_seed=args.seed,
        workers=args.workers,
    )


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = _Parser(prog="ldpcsim",
                     description="fixed-point layered min-sum playground")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_fer = sub.add_parser("fer", parents=[], help="frame-error-rate sweep")
    _add_common(p_fer)

    p_cen = sub.add_parser("census", help="vector update event statistics")
    _add_common(p_cen)
    p_cen.add_argument("--frames", type=int, default=500,
                       help="frames to average over")

    p_eqv = sub.add_parser("equiv", help="lockstep equivalence check")
    _add_common(p_eqv)
    p_eqv.add_argument("--frames", type=int, default=100,
                       help="frames to lockstep")
    p_eqv.add_argument("--corrupt-step-a", action="store_true",
                       help="plant a removal fault to prove the check bites")

    args = parser.parse_args(argv)
    try:
        config = _build_config(args)
        if args.cmd == "fer":
            points = run_fer_sweep(config)
            _emit(fer_csv(config, points), args.out)
        elif args.cmd == "census":
            if len(config.snr_points) != 1:
                raise ValueError("census wants exactly one --snr point")
            text = run_census(config, config.snr_points[0], args.frames)
            _emit(text, args.out)
        else:
            report = run_equivalence_check(config, args.frames,
                                           corrupt_step_a=args.corrupt_step_a)
            _emit(str(report) + "\n", args.out)
            if not report.ok:
                return 1
        return 0
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"ldpcsim: error: {exc}\n")
        return 1
    except (DecoderAbort, EmptyVectorError) as exc:
        sys.stderr.write(f"ldpcsim: decoder abort: {exc}\n")
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
