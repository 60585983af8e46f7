"""Simulation harness and CLI: determinism, stop rules, exit codes."""

import numpy as np
import pytest

from ldpcsim import (DecodeConfig, FixedPointFormat, ParityCheckMatrix,
                     SimConfig, dumps_alist, dumps_qc_base, fer_csv,
                     frame_seed, random_qc_base, resolve_code, run_census,
                     run_equivalence_check, run_fer_sweep)
from ldpcsim.cli import main
from ldpcsim.sim import DecoderAbort

SMALL = "qc:3,6,16,3"

CSV_HEADER = ("snr_db,frames,frame_errors,undetected_errors,bit_errors,"
              "fer,ber,avg_iter,avg_iter_converged")


def small_cfg(**kw):
    base = dict(code=SMALL, decoder="col-incremental",
                decode=DecodeConfig(fmt=FixedPointFormat(step=1.0)),
                snr_points=(2.0,), min_frame_errors=15, max_frames=2000,
                master_seed=11, workers=1)
    base.update(kw)
    return SimConfig(**base)


class TestFrameSeeds:
    def test_deterministic_and_distinct(self):
        a = frame_seed(1, 0, 5)
        assert a == frame_seed(1, 0, 5)
        assert a != frame_seed(1, 0, 6)
        assert a != frame_seed(1, 1, 5)
        assert a != frame_seed(2, 0, 5)

    def test_no_collisions_in_a_sweep(self):
        seen = {frame_seed(9, s, f) for s in range(4) for f in range(500)}
        assert len(seen) == 2000


class TestResolveCode:
    def test_wimax_name(self):
        m = resolve_code("wimax-r12")
        assert m.shape == (1152, 2304)

    def test_qc_spec(self):
        m = resolve_code("qc:3,6,16,3")
        assert m.shape == (48, 96)

    def test_alist_path(self, tmp_path):
        m = resolve_code(SMALL)
        p = tmp_path / "code.alist"
        p.write_text(dumps_alist(m), encoding="ascii")
        again = resolve_code(str(p))
        assert np.array_equal(again.to_dense(), m.to_dense())

    def test_qcb_path(self, tmp_path):
        base = random_qc_base(3, 6, 16, seed=3)
        p = tmp_path / "code.qcb"
        p.write_text(dumps_qc_base(base), encoding="ascii")
        m = resolve_code(str(p))
        assert m.shape == (48, 96)

    def test_bad_specs(self):
        for spec in ("qc:1,2", "qc:a,b,c,d", "nonsense", "file.bin"):
            with pytest.raises(ValueError):
                resolve_code(spec)


class TestConfigValidation:
    def test_rejects_bad_fields(self):
        with pytest.raises(ValueError):
            small_cfg(decoder="unknown")
        with pytest.raises(ValueError):
            small_cfg(snr_points=())
        with pytest.raises(ValueError):
            small_cfg(min_frame_errors=0)
        with pytest.raises(ValueError):
            small_cfg(max_frames=5, min_frame_errors=10)
        with pytest.raises(ValueError):
            small_cfg(workers=0)


class TestSweep:
    def test_worker_count_does_not_change_results(self):
        points = {}
        texts = {}
        for w in (1, 2, 5):
            cfg = small_cfg(workers=w, snr_points=(1.5, 3.0))
            pts = run_fer_sweep(cfg)
            points[w] = [(p.frames, p.frame_errors, p.bit_errors,
                          p.sum_iterations) for p in pts]
            texts[w] = fer_csv(cfg, pts)
        assert points[1] == points[2] == points[5]
        assert texts[1] == texts[2] == texts[5]

    def test_stop_rule_error_target(self):
        pts = run_fer_sweep(small_cfg(snr_points=(1.0,)))
        (p,) = pts
        assert p.frame_errors == 15
        assert p.frames <= 2000

    def test_stop_rule_frame_cap(self):
        pts = run_fer_sweep(small_cfg(snr_points=(12.0,), max_frames=300))
        (p,) = pts
        assert p.frames == 300
        assert p.frame_errors < 15
        assert p.fer == p.frame_errors / 300

    def test_csv_shape(self):
        cfg = small_cfg()
        pts = run_fer_sweep(cfg)
        text = fer_csv(cfg, pts)
        lines = text.strip().splitlines()
        meta = [ln for ln in lines if ln.startswith("#")]
        assert len(meta) == 2
        assert "frame error = not converged OR" in meta[1]
        assert lines[len(meta)] == CSV_HEADER
        assert len(lines) == len(meta) + 1 + len(pts)

    def test_undetected_errors_are_counted_separately(self, tmp_path):
        # a two-check toy code has so few constraints that wrong words
        # regularly satisfy all parities at very low SNR
        m = ParityCheckMatrix([[0, 1, 2], [1, 2, 3]], 4)
        p = tmp_path / "tiny.alist"
        p.write_text(dumps_alist(m), encoding="ascii")
        cfg = SimConfig(code=str(p), decoder="flooding",
                        decode=DecodeConfig(fmt=FixedPointFormat(step=1.0)),
                        snr_points=(-3.0,), min_frame_errors=40,
                        max_frames=4000, master_seed=5)
        (pt,) = run_fer_sweep(cfg)
        assert pt.undetected_errors > 0
        assert pt.undetected_errors <= pt.frame_errors

    def test_decoder_abort_carries_the_frame_seed(self):
        cfg = small_cfg(decode=DecodeConfig(vector_capacity=1,
                                            fmt=FixedPointFormat(step=1.0)))
        with pytest.raises(DecoderAbort) as info:
            run_fer_sweep(cfg)
        assert info.value.seed == frame_seed(11, 0, info.value.frame_index)


class TestCensus:
    def test_rows_and_preconditions(self):
        cfg = small_cfg()
        text = run_census(cfg, 2.0, frames=64)
        lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
        assert lines[0] == "iteration,event_class,average_per_check,frames_counted"
        first = lines[1].split(",")
        assert first[0] == "1" and first[1] == "type_i_removed_and_inserted"
        # five classes per reported iteration, averages summing to d_c
        per_iter = {}
        for ln in lines[1:]:
            it, _, avg, counted = ln.split(",")
            per_iter.setdefault(it, []).append(float(avg))
            assert int(counted) <= 64
        for vals in per_iter.values():
            assert len(vals) == 5
            assert sum(vals) == pytest.approx(6.0, abs=1e-4)

    def test_census_is_worker_independent(self):
        a = run_census(small_cfg(workers=1), 2.0, frames=40)
        b = run_census(small_cfg(workers=4), 2.0, frames=40)
        assert a == b

    def test_precondition_errors(self):
        with pytest.raises(ValueError):
            run_census(small_cfg(decoder="flooding"), 2.0, 10)
        with pytest.raises(ValueError):
            run_census(small_cfg(decode=DecodeConfig(mode="exact")), 2.0, 10)
        with pytest.raises(ValueError):
            run_census(small_cfg(), 2.0, 0)


class TestEquivalence:
    def test_clean_pass(self):
        report = run_equivalence_check(small_cfg(), frames=25)
        assert report.ok
        assert report.frames == 25
        assert "PASS" in str(report)

    def test_corrupted_removal_is_caught(self):
        report = run_equivalence_check(small_cfg(), frames=25,
                                       corrupt_step_a=True)
        assert not report.ok
        assert "DIVERGED" in report.detail
        assert "layer 0" in report.detail
        assert f"seed {frame_seed(11, 0, report.frames - 1)}" in report.detail


class TestCli:
    def test_fer_roundtrip_and_determinism(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        args = ["fer", "--code", SMALL, "--qstep", "1.0", "--snr", "1.5,3.0",
                "--min-errors", "10", "--max-frames", "1500", "--seed", "4"]
        assert main(args + ["--workers", "1", "--out", str(out1)]) == 0
        assert main(args + ["--workers", "3", "--out", str(out2)]) == 0
        b1 = out1.read_bytes()
        assert b1 == out2.read_bytes()
        assert CSV_HEADER.encode() in b1

    def test_snr_range_expansion(self, tmp_path, capsys):
        args = ["fer", "--code", SMALL, "--qstep", "1.0",
                "--snr", "1.0:2.0:0.5", "--min-errors", "5",
                "--max-frames", "200", "--seed", "4"]
        assert main(args) == 0
        rows = [ln for ln in capsys.readouterr().out.splitlines()
                if ln and not ln.startswith("#")]
        assert [r.split(",")[0] for r in rows[1:]] == ["1", "1.5", "2"]

    def test_census_subcommand(self, tmp_path):
        out = tmp_path / "census.csv"
        code = ["census", "--code", SMALL, "--qstep", "1.0", "--snr", "2.0",
                "--frames", "32", "--out", str(out)]
        assert main(code) == 0
        assert "event_class" in out.read_text()

    def test_equiv_subcommand_exit_codes(self):
        base = ["equiv", "--code", SMALL, "--qstep", "1.0", "--snr", "2.0",
                "--frames", "10"]
        assert main(base) == 0
        assert main(base + ["--corrupt-step-a"]) == 1

    def test_config_error_exit_code(self):
        assert main(["fer", "--code", "nonsense"]) == 1
        assert main(["census", "--code", SMALL, "--mode", "exact"]) == 1
        assert main(["fer", "--code", SMALL, "--snr", "3:1:1"]) == 1
        assert main(["fer", "--code", SMALL, "--capacity", "x"]) == 1

    def test_bad_flag_value_exits_one(self):
        with pytest.raises(SystemExit) as info:
            main(["fer", "--code", SMALL, "--decoder", "upside-down"])
        assert info.value.code == 1

    def test_decoder_abort_exit_code(self):
        args = ["fer", "--code", SMALL, "--qstep", "1.0", "--capacity", "1",
                "--snr", "2.0", "--min-errors", "5", "--max-frames", "100"]
        assert main(args) == 2
