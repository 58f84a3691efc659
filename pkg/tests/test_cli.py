"""Command-line behaviour: exit codes, report schema, determinism."""

import json
import subprocess
import sys

import pytest

from superyang import cli


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


class TestExitCodes:
    def test_passing_suite_exits_zero(self, capsys):
        code, out = run_cli(
            ["relations", "--m", "1", "--n", "1",
             "--a", "3", "--hbar", "1/2", "--order", "6"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["summary"]["fail"] == 0
        assert report["summary"]["pass"] > 0

    def test_failing_check_exits_one(self, capsys, monkeypatch):
        monkeypatch.setattr(
            cli, "check_all_relations",
            lambda cs, catalog=None: [{"check": "forced", "status": "fail"}])
        code, out = run_cli(
            ["relations", "--m", "1", "--n", "1",
             "--a", "3", "--hbar", "1/2", "--order", "4"], capsys)
        assert code == 1
        assert json.loads(out)["summary"]["fail"] >= 1

    def test_usage_error_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["relations", "--m", "0", "--n", "1",
                      "--a", "3", "--hbar", "1/2"])
        assert exc.value.code == 2

    def test_currents_need_both_blocks(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["relations", "--m", "2", "--n", "0",
                      "--a", "3", "--hbar", "1/2"])
        assert exc.value.code == 2

    def test_bad_rational_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["ybe-check", "--m", "1", "--n", "1", "--hbar", "zzz"])
        assert exc.value.code == 2

    def test_bad_points_exit_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["hopf-check", "--m", "1", "--n", "1",
                      "--points", "3", "--hbar", "1/2"])
        assert exc.value.code == 2


class TestReportSchema:
    def test_summary_counts_match_tallies(self, capsys):
        code, out = run_cli(
            ["ybe-check", "--m", "2", "--n", "1", "--hbar", "1/2"], capsys)
        assert code == 0
        report = json.loads(out)
        tally = {"pass": 0, "fail": 0, "skipped": 0}
        for c in report["checks"]:
            key = c["status"] if c["status"] in tally else "fail"
            tally[key] += 1
        assert report["summary"] == tally

    def test_config_echo_uses_rational_strings(self, capsys):
        _, out = run_cli(
            ["rll-check", "--m", "1", "--n", "1", "--a", "3", "--b", "-7",
             "--hbar", "1/2", "--order", "6"], capsys)
        cfg = json.loads(out)["config"]
        assert cfg["hbar"] == "1/2"
        assert cfg["a"] == "3"
        assert cfg["b"] == "-7"

    def test_keys_are_sorted(self, capsys):
        _, out = run_cli(
            ["ybe-check", "--m", "1", "--n", "1", "--hbar", "1"], capsys)
        assert out == json.dumps(json.loads(out), indent=2,
                                 sort_keys=True) + "\n"

    def test_no_timing_fields(self, capsys):
        _, out = run_cli(
            ["ybe-check", "--m", "1", "--n", "1", "--hbar", "1"], capsys)
        assert "time" not in out and "seconds" not in out

    def test_gauss_dump_includes_series_summaries(self, capsys):
        _, out = run_cli(
            ["gauss", "--m", "1", "--n", "1", "--a", "5",
             "--hbar", "1/2", "--order", "6", "--dump"], capsys)
        report = json.loads(out)
        assert set(report["series"]) == {"+", "-"}
        assert set(report["series"]["+"]) == {"e", "k", "f"}

    def test_hopf_two_points_skips_coassociativity(self, capsys):
        _, out = run_cli(
            ["hopf-check", "--m", "1", "--n", "1", "--points", "3,5",
             "--hbar", "1/2", "--order", "5"], capsys)
        names = [c.get("check", c.get("relation", ""))
                 for c in json.loads(out)["checks"]]
        assert not any("coassoc" in n for n in names)


class TestDeterminism:
    def test_identical_config_gives_identical_bytes(self, tmp_path, capsys):
        argv = ["all", "--m", "1", "--n", "1", "--hbar", "1/2",
                "--order", "5", "--points", "3,5,7"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.main(argv + ["--json", str(a)]) == 0
        assert cli.main(argv + ["--json", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_worker_count_does_not_change_bytes(self, tmp_path, monkeypatch,
                                                capsys):
        argv = ["all", "--m", "1", "--n", "1", "--hbar", "1/2",
                "--order", "5", "--points", "3,5,7"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.main(argv + ["--json", str(a)]) == 0
        monkeypatch.setenv("SUPERYANG_WORKERS", "3")
        assert cli.main(argv + ["--json", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_module_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "superyang.cli", "ybe-check",
         "--m", "1", "--n", "1", "--hbar", "1/2"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["fail"] == 0
