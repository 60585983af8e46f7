"""BPSK/AWGN channel model and the fixed-point message format.

All simulations send the all-zero codeword, which BPSK maps to +1, so a
positive log-likelihood ratio votes for bit 0. Messages inside the
decoders are sign-magnitude integers: a separate sign (+1 or -1) and a
saturating magnitude, so that a negative sign survives even when the
magnitude quantizes to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "NoiseSpec",
    "FixedPointFormat",
    "SignMag",
    "FixedLlrs",
    "transmit_all_zero",
    "llr_of",
    "quantize",
    "quantize_array",
]


class SignMag(NamedTuple):
    """A sign-magnitude message; ``sign`` is +1 or -1, ``mag`` >= 0."""
    sign: int
    mag: int

    @property
    def value(self) -> int:
        return self.sign * self.mag


class FixedLlrs(NamedTuple):
    """A quantized frame: per-variable sign (int8) and magnitude (int32)."""
    signs: np.ndarray
    mags: np.ndarray


@dataclass(frozen=True)
class NoiseSpec:
    """AWGN operating point for a given code rate.

    sigma**2 = 1 / (2 * rate * 10**(ebno_db / 10)) with unit symbol
    energy, the usual Eb/N0 convention for BPSK.
    """

    ebno_db: float
    code_rate: float

    def __post_init__(self):
        if not 0.0 < self.code_rate <= 1.0:
            raise ValueError(f"code rate must be in (0, 1], got {self.code_rate}")

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * self.code_rate * 10.0 ** (self.ebno_db / 10.0))

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


@dataclass(frozen=True)
class FixedPointFormat:
    """Sign-magnitude message format plus the internal adder width.

    ``message_bits`` counts the sign bit, so the magnitude saturates at
    2**(message_bits - 1) - 1 (7 for the default 4-bit messages).
    ``step`` is the LLR value of one quantizer step. Accumulators
    saturate symmetrically at 2**(accumulator_bits - 1) - 1 and never
    wrap; the width should cover message_bits plus log2 of the largest
    variable degree plus margin.
    """

    message_bits: int = 4
    step: float = 0.5
    accumulator_bits: int = 16

    def __post_init__(self):
        if self.message_bits < 2:
            raise ValueError("message format needs a sign bit and at least one magnitude bit")
        if not self.step > 0.0:
            raise ValueError("quantizer step must be positive")
        if self.accumulator_bits < self.message_bits + 2:
            raise ValueError("accumulator must be wider than the message format")

    @property
    def magnitude_max(self) -> int:
        return (1 << (self.message_bits - 1)) - 1

    @property
    def accumulator_max(self) -> int:
        return (1 << (self.accumulator_bits - 1)) - 1


def transmit_all_zero(n: int, noise: NoiseSpec, seed) -> np.ndarray:
    """BPSK samples of the all-zero codeword through AWGN: 1 + sigma * N(0,1).

    Deterministic in (n, noise, seed); the caller owns seed derivation.
    """
    rng = np.random.default_rng(seed)
    return 1.0 + noise.sigma * rng.standard_normal(n)


def llr_of(sample, noise: NoiseSpec):
    """Channel LLR of a BPSK sample: 2 * sample / sigma**2.

    Accepts a scalar or an ndarray and returns the matching shape.
    """
    return 2.0 * np.asarray(sample, dtype=np.float64) / noise.sigma2 \
        if isinstance(sample, np.ndarray) else 2.0 * sample / noise.sigma2


def quantize(llr: float, fmt: FixedPointFormat) -> SignMag:
    """Quantize one LLR to sign-magnitude.

    The magnitude is round-half-away-from-zero of |llr| / step,
    saturated at ``fmt.magnitude_max``. Zero maps to +0; a tiny
    negative LLR keeps its negative sign even at magnitude zero.
    """
    sign = -1 if llr < 0 else 1
    mag = min(int(math.floor(abs(llr) / fmt.step + 0.5)), fmt.magnitude_max)
    return SignMag(sign, mag)


def quantize_array(llrs: np.ndarray, fmt: FixedPointFormat) -> FixedLlrs:
    """Vectorized :func:`quantize` over a frame of LLRs."""
    llrs = np.asarray(llrs, dtype=np.float64)
    signs = np.where(llrs < 0, -1, 1).astype(np.int8)
    mags = np.floor(np.abs(llrs) / fmt.step + 0.5)
    mags = np.minimum(mags, float(fmt.magnitude_max)).astype(np.int32)
    return FixedLlrs(signs, mags)
