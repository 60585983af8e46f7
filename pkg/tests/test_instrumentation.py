"""Event classification and the hardware cost models."""

import numpy as np
import pytest

from ldpcsim import (EVENT_CLASSES, EventCounters, ThroughputModel,
                     classify_event, comparator_savings, memory_savings,
                     throughput)


def test_classify_event_table():
    assert classify_event(True, 1) == "type_i_removed_and_inserted"
    assert classify_event(True, 0) == "type_i_removed_and_inserted"
    assert classify_event(True, 3) == "type_i_removed_and_inserted"
    assert classify_event(False, 0) == "discarded"
    assert classify_event(False, 1) == "kept_full_new_is_min1"
    assert classify_event(False, 2) == "kept_full_new_is_min2"
    assert classify_event(False, 3) == "kept_full_new_is_min3"
    assert classify_event(False, 7) == "kept_full_new_is_min3"
    with pytest.raises(ValueError):
        classify_event(False, -1)


def test_comparator_savings_value():
    assert comparator_savings(32) == 28 / 30
    assert comparator_savings(32) == pytest.approx(0.9333, abs=5e-5)
    assert comparator_savings(4) == 0.0
    with pytest.raises(ValueError):
        comparator_savings(3)


def test_memory_savings_value():
    got = memory_savings(32, 4, 5)
    assert got == 0.5546875
    # independent recount: 128 stored bits full, 32 signs kept, and a
    # 3-entry vector of 3-bit magnitudes with 5-bit tags plus one
    # product sign = 25 bits
    full = 32 * 4
    vector = 3 * (3 + 5) + 1
    assert vector == 25
    assert got == (full - 32 - vector) / full
    for bad in ((0, 4, 5), (32, 1, 5), (32, 4, 0)):
        with pytest.raises(ValueError):
            memory_savings(*bad)


def test_throughput_model():
    model = ThroughputModel(f_clk_hz=388e6, info_bits=3584, init_cycles=32,
                            iter_cycles=320, pipeline_cycles=2)
    got = throughput(model)
    assert f"{got / 1e9:.3f}" == "3.928"
    assert got == pytest.approx(388e6 * 3584 / 354, rel=1e-12)
    with pytest.raises(ValueError):
        ThroughputModel(0.0, 3584, 32, 320, 2)
    with pytest.raises(ValueError):
        ThroughputModel(388e6, 3584, -1, 320, 2)
    with pytest.raises(ValueError):
        ThroughputModel(388e6, 3584, 0, 0, 0)


def test_event_classes_order_is_stable():
    assert EVENT_CLASSES == (
        "type_i_removed_and_inserted",
        "kept_full_new_is_min1",
        "kept_full_new_is_min2",
        "kept_full_new_is_min3",
        "discarded",
    )


class TestEventCounters:
    def test_zeros_and_average(self):
        c = EventCounters.zeros(3, checks_per_frame=10)
        c.counts[0] = (4, 3, 2, 1, 0)
        c.frames[0] = 2
        avg = c.average_per_check(1)
        assert avg == pytest.approx([0.2, 0.15, 0.1, 0.05, 0.0])
        assert np.isnan(c.average_per_check(3)).all()
        with pytest.raises(ValueError):
            c.average_per_check(0)
        with pytest.raises(ValueError):
            c.average_per_check(4)

    def test_merge_pads_and_adds(self):
        a = EventCounters.zeros(2, 10)
        b = EventCounters.zeros(3, 10)
        a.counts[:] = 1
        a.frames[:] = 1
        b.counts[:] = 2
        b.frames[:] = 1
        out = a.merge(b)
        assert out.counts.shape == (3, 5)
        assert (out.counts[0] == 3).all()
        assert (out.counts[2] == 2).all()
        assert list(out.frames) == [2, 2, 1]

    def test_merge_rejects_mixed_codes(self):
        with pytest.raises(ValueError):
            EventCounters.zeros(2, 10).merge(EventCounters.zeros(2, 11))
