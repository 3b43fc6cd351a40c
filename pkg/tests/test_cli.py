import json

import pytest

from mary.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    GRID_MODULI,
    JobConfig,
    default_grid,
    grid_colour_specs,
    main,
    run_verification,
)
from mary import check_hypothesis


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCount:
    def test_text_table(self, capsys):
        code, out, _ = run(capsys, "count", "--m", "3", "--k", "2,1", "--variant", "b",
                           "--range", "0..4")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0].split() == ["n", "count", "mod"]
        assert lines[-1].split() == ["4", "7", "1"]

    def test_json_records(self, capsys):
        code, out, _ = run(capsys, "count", "--m", "3", "--k", "2,1", "--variant", "b",
                           "--n", "4", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out) == [{"n": 4, "count": "7", "mod": 1}]

    def test_csv_header(self, capsys):
        code, out, _ = run(capsys, "count", "--m", "2", "--k", "1", "--variant", "c",
                           "--range", "5..6", "--format", "csv")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == "n,count,mod"
        assert lines[1:] == ["5,3,1", "6,3,1"]

    def test_counts_are_decimal_strings_at_scale(self, capsys):
        code, out, _ = run(capsys, "count", "--m", "2", "--k", "6", "--variant", "b",
                           "--n", "800", "--format", "json")
        assert code == EXIT_OK
        record = json.loads(out)[0]
        assert record["count"].isdigit()
        assert int(record["count"]) % 2 == record["mod"]
        assert len(record["count"]) > 30

    def test_enum_agrees_with_series(self, capsys):
        _, series_out, _ = run(capsys, "count", "--m", "3", "--k", "2,1", "--variant", "c",
                               "--range", "0..25", "--format", "json")
        _, enum_out, _ = run(capsys, "count", "--m", "3", "--k", "2,1", "--variant", "c",
                             "--range", "0..25", "--enum", "--format", "json")
        assert json.loads(series_out) == json.loads(enum_out)

    def test_enum_cap_is_a_config_error(self, capsys):
        code, _, err = run(capsys, "count", "--m", "2", "--k", "1", "--variant", "b",
                           "--n", "301", "--enum")
        assert code == EXIT_CONFIG
        assert "cap" in err

    def test_gapfree_zero_is_zero(self, capsys):
        for extra in ((), ("--enum",)):
            code, out, _ = run(capsys, "count", "--m", "3", "--k", "1", "--variant", "c",
                               "--n", "0", "--format", "json", *extra)
            assert code == EXIT_OK
            assert json.loads(out) == [{"n": 0, "count": "0", "mod": 0}]


class TestResidue:
    def test_unrestricted_record(self, capsys):
        code, out, _ = run(capsys, "residue", "--m", "3", "--k", "2,1", "--variant", "b",
                           "--n", "4", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out) == [{"n": 4, "digits": "1,1", "residue": 1, "note": ""}]

    def test_gapfree_reports_lifted_digits(self, capsys):
        code, out, _ = run(capsys, "residue", "--m", "3", "--k", "1", "--variant", "c",
                           "--n", "4", "--format", "json")
        assert code == EXIT_OK
        # the query lifts to n = 6 with digits 0, 2
        assert json.loads(out) == [{"n": 4, "digits": "0,2", "residue": 2, "note": ""}]

    def test_hypothesis_failure_skips_with_witness(self, capsys):
        code, out, _ = run(capsys, "residue", "--m", "2", "--k", "3", "--variant", "b",
                           "--range", "0..3", "--format", "json")
        assert code == EXIT_OK
        records = json.loads(out)
        assert all(r["note"].startswith("skipped") for r in records)
        assert all("prime 2" in r["note"] for r in records)

    def test_gapfree_zero_is_a_domain_note(self, capsys):
        code, out, _ = run(capsys, "residue", "--m", "3", "--k", "1", "--variant", "c",
                           "--range", "0..1", "--format", "json")
        assert code == EXIT_OK
        records = json.loads(out)
        assert records[0]["note"] == "undefined for n = 0"
        assert records[1]["residue"] == 1


class TestExpand:
    def test_all_match_exits_zero(self, capsys):
        code, out, _ = run(capsys, "expand", "--m", "3", "--k", "1", "--variant", "b",
                           "--N", "27", "--format", "json")
        assert code == EXIT_OK
        records = json.loads(out)
        assert len(records) == 28
        assert all(r["match"] for r in records)
        assert all(r["lhs"] == r["rhs"] for r in records)

    def test_gapfree_constant_term(self, capsys):
        code, out, _ = run(capsys, "expand", "--m", "3", "--k", "2,1", "--variant", "c",
                           "--N", "9", "--format", "json")
        assert code == EXIT_OK
        first = json.loads(out)[0]
        assert first == {"exponent": 0, "lhs": 1, "rhs": 1, "match": True}

    def test_default_truncation_is_fourth_power(self, capsys):
        code, out, _ = run(capsys, "expand", "--m", "2", "--k", "1", "--format", "json")
        assert code == EXIT_OK
        assert len(json.loads(out)) == 17

    def test_hypothesis_failure_is_config_error(self, capsys):
        code, _, err = run(capsys, "expand", "--m", "2", "--k", "3", "--N", "8")
        assert code == EXIT_CONFIG
        assert "prime 2" in err


class TestVerify:
    def test_restricted_grid_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--m", "3", "--N", "50", "--format", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["totals"]["mismatched"] == 0
        assert report["totals"]["checked"] > 0
        assert report["totals"]["checked"] == report["totals"]["matched"]
        assert report["mismatches"] == []

    def test_single_point(self, capsys):
        code, out, _ = run(capsys, "verify", "--m", "5", "--k", "2,3;1", "--N", "60",
                           "--format", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["grid"]["points"] == 1
        assert report["totals"]["mismatched"] == 0

    def test_hypothesis_failing_point_yields_empty_grid(self, capsys):
        code, out, _ = run(capsys, "verify", "--m", "2", "--k", "3", "--format", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["grid"]["points"] == 0
        assert report["totals"]["checked"] == 0
        assert report["totals"]["skipped_hypothesis"] == 1

    def test_probe_mode_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--m", "9", "--probe", "--N", "20",
                           "--format", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["grid"]["probe"] is True
        assert report["totals"]["checked"] > 0

    def test_text_summary(self, capsys):
        code, out, _ = run(capsys, "verify", "--m", "3", "--N", "30")
        assert code == EXIT_OK
        assert out.splitlines()[-1] == "result: PASS"

    def test_wall_time_stays_off_stdout(self, capsys):
        _, out, err = run(capsys, "verify", "--m", "3", "--N", "30")
        assert "completed" in err
        assert "completed" not in out

    def test_output_identical_across_worker_counts(self, capsys):
        _, serial, _ = run(capsys, "verify", "--m", "3", "--N", "40", "--format", "json",
                           "--jobs", "1")
        _, parallel, _ = run(capsys, "verify", "--m", "3", "--N", "40", "--format", "json",
                             "--jobs", "3")
        assert serial == parallel

    def test_csv_is_header_only_on_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--m", "3", "--N", "30", "--format", "csv")
        assert code == EXIT_OK
        assert out.strip() == "check,m,k,n,oracle,formula"


class TestGrid:
    def test_default_grid_is_large_enough(self):
        grid = default_grid()
        assert len(grid) >= 50
        assert {p.m for p in grid} == set(GRID_MODULI)

    def test_every_point_passes_the_hypothesis(self):
        for prob in default_grid():
            assert check_hypothesis(prob, len(prob.colours.explicit) + 1)

    def test_failing_grid_points_fail(self):
        for prob in default_grid(failing=True):
            assert not check_hypothesis(prob, len(prob.colours.explicit) + 1)

    def test_grid_is_deterministic(self):
        first = [(p.m, p.colours) for p in default_grid()]
        second = [(p.m, p.colours) for p in default_grid()]
        assert first == second

    def test_no_duplicate_points(self):
        grid = [(p.m, p.colours) for p in default_grid()]
        assert len(grid) == len(set(grid))

    def test_boundary_specs_present(self):
        for m in GRID_MODULI:
            specs = grid_colour_specs(m, 10)
            assert any(s.explicit == (1,) and s.tail == 1 for s in specs)

    def test_run_verification_report_shape(self):
        cfg = JobConfig(command="verify", m=3, residue_limit=30)
        report = run_verification(cfg)
        assert report.checked == report.matched + report.mismatched
        assert report.mismatched == 0
        assert report.grid["residue_limit"] == 30

    def test_probe_mismatch_records_are_sorted(self):
        cfg = JobConfig(command="verify", m=9, residue_limit=60, probe=True)
        report = run_verification(cfg)
        assert report.mismatches
        keys = [(r["m"], r["k"], r["n"], r["check"]) for r in report.mismatches]
        assert keys == sorted(keys)


class TestConfigErrors:
    def test_bad_colour_literal(self, capsys):
        code, _, err = run(capsys, "count", "--m", "3", "--k", "zebra", "--variant", "b",
                           "--n", "1")
        assert code == EXIT_CONFIG
        assert "colour spec" in err

    def test_bad_range(self, capsys):
        code, _, err = run(capsys, "count", "--m", "3", "--k", "1", "--variant", "b",
                           "--range", "9..2")
        assert code == EXIT_CONFIG

    def test_small_base(self, capsys):
        code, _, err = run(capsys, "count", "--m", "1", "--k", "1", "--variant", "b",
                           "--n", "1")
        assert code == EXIT_CONFIG

    def test_missing_span(self, capsys):
        code, _, _ = run(capsys, "count", "--m", "3", "--k", "1", "--variant", "b")
        assert code == EXIT_CONFIG

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == EXIT_CONFIG

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert main(["count", "--help"]) == 0
