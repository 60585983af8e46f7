"""Parity-check matrix construction, file formats, and layer plumbing."""

import io

import numpy as np
import pytest

from ldpcsim import (AlistFormatError, ParityCheckMatrix, QcBase,
                     QcConstructionError, dumps_alist, dumps_qc_base,
                     expand_qc, has_four_cycles, load_alist, load_qc_base,
                     random_qc_base, regroup_layers, syndrome_ok,
                     wimax_r12_base)
from _invariants import syndrome_cases


def tiny_matrix():
    # 3 checks, 6 variables, mixed degrees
    return ParityCheckMatrix([[0, 1, 2], [2, 3, 4], [0, 4, 5]], 6)


class TestParityCheckMatrix:
    def test_shapes_and_edges(self):
        m = tiny_matrix()
        assert m.shape == (3, 6)
        assert m.num_edges == 9
        assert m.rate == 0.5
        assert list(m.vars_of_check(1)) == [2, 3, 4]
        assert list(m.checks_of_var(0)) == [0, 2]
        assert m.max_check_degree == 3
        assert m.max_var_degree == 2

    def test_column_view_mirrors_row_view(self):
        m = tiny_matrix()
        for v in range(m.n):
            for c, e in zip(m.checks_of_var(v), m.edges_of_var(v)):
                assert m.check_vars[e] == v
                assert m.edge_check[e] == c

    def test_default_layers_one_per_column(self):
        m = tiny_matrix()
        assert m.num_layers == 6
        assert m.num_row_layers == 3
        assert m.one_per_layer
        assert list(m.edge_key) == list(m.check_vars)

    def test_rejects_malformed_rows(self):
        with pytest.raises(ValueError):
            ParityCheckMatrix([[0, 0]], 2)  # duplicate tap
        with pytest.raises(ValueError):
            ParityCheckMatrix([[0, 7]], 4)  # out of range
        with pytest.raises(ValueError):
            ParityCheckMatrix([[]], 3)      # empty check
        with pytest.raises(ValueError):
            ParityCheckMatrix([[0, 1]], 4, layer_of_column=[0, 0, 2, 2])

    def test_to_dense_roundtrip(self):
        m = tiny_matrix()
        h = m.to_dense()
        assert h.sum() == m.num_edges
        for c in range(m.m):
            assert set(np.flatnonzero(h[c])) == set(m.vars_of_check(c))


class TestQcExpansion:
    def test_hand_expansion(self):
        base = QcBase(z=3, shifts=np.array([[0, 1], [-1, 2]]))
        m = expand_qc(base)
        assert m.shape == (6, 6)
        h = m.to_dense()
        eye = np.eye(3, dtype=np.uint8)
        assert np.array_equal(h[:3, :3], eye)
        assert np.array_equal(h[:3, 3:], np.roll(eye, 1, axis=1))
        assert np.array_equal(h[3:, :3], np.zeros((3, 3), np.uint8))
        assert np.array_equal(h[3:, 3:], np.roll(eye, 2, axis=1))
        assert m.num_layers == 2 and m.num_row_layers == 2
        assert m.one_per_layer

    def test_random_base_is_deterministic_and_clean(self):
        a = random_qc_base(3, 6, 16, seed=5)
        b = random_qc_base(3, 6, 16, seed=5)
        c = random_qc_base(3, 6, 16, seed=6)
        assert np.array_equal(a.shifts, b.shifts)
        assert not np.array_equal(a.shifts, c.shifts)
        assert not has_four_cycles(a)

    def test_four_cycle_detection_against_dense_oracle(self):
        # H has a 4-cycle iff two rows share two columns
        def dense_has_4cycle(matrix):
            h = matrix.to_dense().astype(np.int64)
            gram = h @ h.T
            np.fill_diagonal(gram, 0)
            return bool((gram >= 2).any())

        clean = random_qc_base(3, 6, 8, seed=9)
        assert has_four_cycles(clean) == dense_has_4cycle(expand_qc(clean))
        dirty = QcBase(z=4, shifts=np.array([[0, 0], [0, 0]]))
        assert has_four_cycles(dirty)
        assert dense_has_4cycle(expand_qc(dirty))

    def test_construction_failure_is_reported(self):
        # z=1 leaves no shift freedom: a (3,4)-regular base cannot avoid
        # 4-cycles, so the search must exhaust and say so
        with pytest.raises(QcConstructionError):
            random_qc_base(3, 4, 1, seed=0)

    def test_wimax_base(self):
        base = wimax_r12_base()
        assert base.shifts.shape == (12, 24)
        assert base.z == 96
        assert not has_four_cycles(base)
        m = expand_qc(base)
        assert m.shape == (1152, 2304)
        assert m.rate == 0.5
        assert m.num_layers == 24
        assert m.num_row_layers == 12
        assert m.one_per_layer


class TestFileFormats:
    def test_alist_roundtrip(self):
        m = expand_qc(random_qc_base(3, 6, 8, seed=2))
        text = dumps_alist(m)
        again = load_alist(io.StringIO(text))
        assert again.shape == m.shape
        assert np.array_equal(again.to_dense(), m.to_dense())

    def test_alist_rejects_garbage(self):
        with pytest.raises(AlistFormatError):
            load_alist(io.StringIO("1 2 3"))
        good = dumps_alist(tiny_matrix())
        truncated = "\n".join(good.splitlines()[:-2])
        with pytest.raises(AlistFormatError):
            load_alist(io.StringIO(truncated))
        # declared maximum degree below an actual degree
        lines = good.splitlines()
        lines[1] = "1 1"
        with pytest.raises(AlistFormatError):
            load_alist(io.StringIO("\n".join(lines)))

    def test_qc_base_roundtrip(self):
        base = random_qc_base(4, 8, 16, seed=3)
        text = dumps_qc_base(base)
        again = load_qc_base(io.StringIO(text))
        assert again.z == base.z
        assert np.array_equal(again.shifts, base.shifts)


class TestLayerRegrouping:
    def test_group_size_must_divide(self):
        m = expand_qc(random_qc_base(3, 6, 8, seed=2))
        with pytest.raises(ValueError):
            regroup_layers(m, 7)

    def test_regrouping_counts(self, small_matrix):
        m = small_matrix
        g2 = regroup_layers(m, 32)
        assert g2.num_layers == m.n // 32
        assert np.array_equal(g2.to_dense(), m.to_dense())
        whole = regroup_layers(m, m.n)
        assert whole.num_layers == 1
        assert not whole.one_per_layer
        # column keys take over when a check sees a layer twice
        assert list(whole.edge_key) == list(whole.check_vars)


def test_syndrome_against_dense_oracle(small_matrix, toy_matrix):
    rng = np.random.default_rng(17)
    assert syndrome_cases(rng, [small_matrix, toy_matrix, tiny_matrix()],
                          600) == 600


def test_syndrome_shape_check(small_matrix):
    with pytest.raises(ValueError):
        syndrome_ok(small_matrix, np.zeros(5, np.uint8))
