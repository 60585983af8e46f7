"""Channel model and quantizer unit tests."""

import math

import numpy as np
import pytest

from ldpcsim import (FixedPointFormat, NoiseSpec, llr_of, quantize,
                     quantize_array, transmit_all_zero)
from _invariants import quantizer_cases


def test_noise_sigma_matches_direct_formula():
    spec = NoiseSpec(4.1, 7.0 / 8.0)
    want = math.sqrt(1.0 / (2.0 * (7.0 / 8.0) * 10.0 ** 0.41))
    assert spec.sigma == pytest.approx(want, rel=0, abs=1e-15)
    assert spec.sigma == pytest.approx(0.4714992167812193, abs=1e-15)
    assert spec.sigma2 == pytest.approx(spec.sigma ** 2, rel=1e-15)


def test_noise_rejects_bad_rate():
    with pytest.raises(ValueError):
        NoiseSpec(2.0, 0.0)
    with pytest.raises(ValueError):
        NoiseSpec(2.0, 1.5)


def test_llr_scaling_frozen_value():
    spec = NoiseSpec(4.1, 7.0 / 8.0)
    assert llr_of(-1.0, spec) == pytest.approx(-8.996385239691023, abs=1e-12)
    arr = llr_of(np.array([-1.0, 0.5]), spec)
    assert arr[0] == pytest.approx(-8.996385239691023, abs=1e-12)
    assert arr[1] == pytest.approx(2.0 * 0.5 / spec.sigma2, abs=1e-12)


def test_quantize_worked_examples():
    fmt = FixedPointFormat()  # 4 bits, step 0.5, magnitudes saturate at 7
    assert quantize(1.3, fmt) == (1, 3)
    assert quantize(-10.0, fmt) == (-1, 7)
    assert quantize(0.0, fmt) == (1, 0)
    assert quantize(-0.2, fmt) == (-1, 0)  # sign survives a zero magnitude
    assert quantize(0.25, fmt) == (1, 1)   # halfway rounds away from zero
    assert quantize(0.2499, fmt) == (1, 0)


def test_quantize_array_matches_scalar():
    fmt = FixedPointFormat(message_bits=5, step=0.7)
    xs = np.linspace(-12.0, 12.0, 101)
    signs, mags = quantize_array(xs, fmt)
    for x, s, m in zip(xs, signs, mags):
        assert (int(s), int(m)) == quantize(float(x), fmt)


def test_format_properties_and_validation():
    fmt = FixedPointFormat()
    assert fmt.magnitude_max == 7
    assert fmt.accumulator_max == (1 << 15) - 1
    assert FixedPointFormat(message_bits=6).magnitude_max == 31
    with pytest.raises(ValueError):
        FixedPointFormat(message_bits=1)
    with pytest.raises(ValueError):
        FixedPointFormat(step=0.0)
    with pytest.raises(ValueError):
        FixedPointFormat(message_bits=8, accumulator_bits=9)


def test_transmit_is_deterministic_per_seed():
    spec = NoiseSpec(2.0, 0.5)
    a = transmit_all_zero(64, spec, 123)
    b = transmit_all_zero(64, spec, 123)
    c = transmit_all_zero(64, spec, 124)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.shape == (64,)


def test_quantizer_randomized_properties():
    rng = np.random.default_rng(99)
    assert quantizer_cases(rng, 4000) == 4000
