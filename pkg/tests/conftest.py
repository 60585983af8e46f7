"""Shared fixtures: codes are expanded once per session, frames come
from the same seeded substream discipline the harness uses."""

import math

import numpy as np
import pytest

from ldpcsim import (FixedPointFormat, NoiseSpec, llr_of, quantize_array,
                     resolve_code, transmit_all_zero)

SMALL_CODE = "qc:3,6,16,3"      # (48, 96), d_c = 6, fast unit loops
TOY_CODE = "qc:4,8,64,1"        # (256, 512) rate-1/2 toy
BIG_CODE = "qc:4,32,128,1"      # (512, 4096) high-rate, d_c = 32


@pytest.fixture(scope="session")
def small_matrix():
    return resolve_code(SMALL_CODE)


@pytest.fixture(scope="session")
def toy_matrix():
    return resolve_code(TOY_CODE)


@pytest.fixture(scope="session")
def big_matrix():
    return resolve_code(BIG_CODE)


@pytest.fixture(scope="session")
def wimax_matrix():
    return resolve_code("wimax-r12")


def noisy_frame(matrix, ebno_db, seed, fmt=FixedPointFormat()):
    """One quantized all-zero-codeword frame at the given operating point."""
    noise = NoiseSpec(ebno_db, matrix.rate)
    samples = transmit_all_zero(matrix.n, noise, seed)
    return quantize_array(llr_of(samples, noise), fmt)


def binomial_ci95(errors: int, trials: int):
    """Normal-approximation 95 percent confidence interval for a rate."""
    p = errors / trials
    half = 1.96 * math.sqrt(max(p * (1.0 - p), 1e-300) / trials)
    return (p - half, p + half)


def intervals_overlap(a, b) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def welch_z(x: np.ndarray, y: np.ndarray) -> float:
    """Welch z statistic for mean(x) < mean(y) being significant."""
    vx = x.var(ddof=1) / x.size
    vy = y.var(ddof=1) / y.size
    return float((y.mean() - x.mean()) / math.sqrt(vx + vy))
