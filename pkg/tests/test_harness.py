import json

import pytest

from surfc.chip import ChipModel
from surfc.errors import InfeasibleError, SurfcError
from surfc.harness import (
    RunConfig,
    compare,
    config_from_mapping,
    parse_config_file,
    run,
    run_full,
    sweep,
)

LS = ChipModel.LATTICE_SURGERY
DD = ChipModel.DOUBLE_DEFECT


class TestRun:
    def test_ghz_lattice_surgery_min(self):
        rep = run(RunConfig(benchmark="ghz_state_n23", model=LS, chip="min", d=3, seed=1))
        assert rep.delta == 22
        assert rep.valid

    def test_bv_double_defect_min(self):
        rep = run(RunConfig(benchmark="bv_10", model=DD, chip="min", d=3, seed=1))
        assert rep.delta == 5

    def test_empty_circuit(self, tmp_path):
        path = tmp_path / "empty.qasm"
        path.write_text("qreg q[3];\nh q[0];\n")
        rep = run(RunConfig(qasm_path=str(path), model=DD, chip="min", d=2))
        assert rep.delta == 0
        assert rep.valid

    def test_random_source(self):
        rep = run(RunConfig(random_params=(8, 4, 2), model=DD, chip="min", d=2, seed=3))
        assert rep.alpha == 4
        assert rep.pm_estimate == 2
        assert rep.delta >= 4

    def test_config_validation(self):
        with pytest.raises(InfeasibleError):
            RunConfig(benchmark="bv_10", scheduler="magic")
        with pytest.raises(InfeasibleError):
            RunConfig(benchmark="bv_10", model=LS, cuts="maxcut")
        with pytest.raises(InfeasibleError):
            RunConfig()  # no source

    def test_report_serializable(self):
        rep = run(RunConfig(benchmark="bv_10", model=DD, chip="min", d=2, seed=0))
        payload = json.loads(json.dumps(rep.to_json_dict()))
        assert payload["delta"] == rep.delta
        assert payload["scheduler"] == "ecmas"


class TestSchedulePayload:
    def test_schedule_json_shape(self):
        report, schedule = run_full(
            RunConfig(benchmark="bv_10", model=DD, chip="min", d=2, seed=0)
        )
        payload = schedule.to_json_dict()
        assert payload["delta"] == report.delta
        assert [c["index"] for c in payload["cycles"]] == list(range(report.delta))
        first = payload["cycles"][0]["actions"][0]
        assert set(first) == {"kind", "gate", "route", "tile", "cut", "phase"}


class TestSweep:
    def test_single_row(self):
        rows, text = sweep([RunConfig(benchmark="bv_10", model=DD, chip="min", d=2, label="bv")])
        assert len(rows) == 1
        assert rows[0]["delta"] == 5
        assert text.splitlines()[0].startswith("label,")

    def test_partial_failure_recorded(self):
        ok = RunConfig(benchmark="ghz_state_n23", model=LS, chip="min", d=2, label="good", seed=1)
        bad = RunConfig(benchmark="qft_10", model=LS, chip="min", d=2, label="bad", seed=1)
        rows, text = sweep([ok, bad])
        assert rows[0]["valid"] is True
        assert rows[1]["valid"] is False and rows[1]["error"]
        assert "bad" in text

    def test_reproducible(self):
        configs = [
            RunConfig(random_params=(10, 5, 3), model=DD, chip="min", d=2, seed=s, label=f"r{s}")
            for s in range(3)
        ]
        rows1, text1 = sweep(configs)
        rows2, text2 = sweep(configs)
        for a, b in zip(rows1, rows2):
            a2, b2 = dict(a), dict(b)
            a2.pop("compile_seconds"), b2.pop("compile_seconds")
            a2.pop("time_ratio", None), b2.pop("time_ratio", None)
            assert a2 == b2

    def test_time_ratio_grouping(self):
        base = dict(benchmark="bv_10", model=DD, d=2, label="bv", seed=0)
        rows, _ = sweep([
            RunConfig(chip="min", **base),
            RunConfig(chip="4x", **base),
        ])
        assert rows[0]["time_ratio"] == 1.0
        assert isinstance(rows[1]["time_ratio"], float)


class TestCompare:
    def test_paper_ratio(self):
        a = {"label": "x", "chip_dims": [10, 10], "model": "dd", "delta": 147}
        b = {"label": "x", "chip_dims": [10, 10], "model": "dd", "delta": 48}
        assert compare(a, b) == pytest.approx(67.3469387755102)

    def test_equal_deltas(self):
        a = {"label": "x", "chip_dims": [10, 10], "model": "dd", "delta": 15}
        assert compare(a, dict(a)) == 0.0

    def test_bv_ratio(self):
        a = {"label": "x", "chip_dims": [10, 10], "model": "dd", "delta": 15}
        b = {"label": "x", "chip_dims": [10, 10], "model": "dd", "delta": 5}
        assert round(compare(a, b), 1) == 66.7

    def test_mismatched_inputs(self):
        a = {"label": "x", "chip_dims": [10, 10], "model": "dd", "delta": 15}
        b = {"label": "y", "chip_dims": [10, 10], "model": "dd", "delta": 5}
        with pytest.raises(InfeasibleError):
            compare(a, b)


class TestConfigFile:
    def test_parse_and_build(self):
        text = """
        # benchmark sweep row
        benchmark = bv_10
        model = dd
        chip = min
        d = 2
        seed = 7
        scheduler = ecmas
        """
        config = config_from_mapping(parse_config_file(text))
        assert config.benchmark == "bv_10"
        assert config.d == 2 and config.seed == 7

    def test_random_source_key(self):
        config = config_from_mapping(parse_config_file("random = 8,4,2\nmodel = ls\n"))
        assert config.random_params == (8, 4, 2)
        assert config.model is LS

    def test_bad_line(self):
        with pytest.raises(InfeasibleError):
            parse_config_file("benchmark bv_10\n")

    def test_unknown_key(self):
        with pytest.raises(InfeasibleError):
            config_from_mapping({"notakey": 1})
