import csv
import io
import subprocess
import sys

import pytest

from verikit import cli
from verikit.fcov import CoverageDb, read_coverage_db, write_coverage_db
from verikit.uvm import runner, test as register_test, uvm_test

EXPECTED_TESTS = ["adc.feature_adc", "adc.feature_reg", "adc.stress", "alu.base", "ecc.base"]


def run_cli(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_list_prints_sorted_names():
    code, text = run_cli("list")
    assert code == 0
    assert text.split() == EXPECTED_TESTS


def test_list_with_empty_registry(monkeypatch):
    monkeypatch.setattr(cli, "registered_tests", lambda: [])
    assert run_cli("list") == (0, "")


def test_unknown_test_is_usage_error(tmp_path, capsys):
    cov = tmp_path / "cov.xml"
    code, _ = run_cli("run", "--test", "nope", "--cov-out", str(cov))
    assert code == 64
    assert "alu.base" in capsys.readouterr().err
    assert not cov.exists()


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["run", "--seed", "banana"],
    ["run", "--transactions", "0"],
    ["run", "--fail-under", "lots"],
    ["bench", "--transactions", "10,x"],
    ["run", "--test", "alu.base", "--log-level", "CHATTY"],
])
def test_bad_arguments_exit_64(argv, tmp_path, capsys):
    code, _ = run_cli(*argv, *(["--cov-out", str(tmp_path / "c.xml")] if argv[0] == "run" else []))
    assert code == 64


def test_run_passes_and_writes_coverage(tmp_path, capsys):
    cov = tmp_path / "cov.xml"
    code, text = run_cli("run", "--test", "alu.base", "--seed", "0x1", "--transactions", "50",
                         "--cov-out", str(cov))
    assert code == 0
    line = text.splitlines()[0]
    assert line.startswith("PASS alu.base seed=0x") and "transactions=50" in line
    db = read_coverage_db(cov)
    assert db.test == "" or db.transactions >= 0
    assert "alu.cg_1" in db.groups
    assert "Test: Yay!!! Passed!" in capsys.readouterr().err


def test_fail_under_gives_exit_2(tmp_path):
    code, text = run_cli("run", "--test", "alu.base", "--transactions", "20",
                         "--cov-out", str(tmp_path / "c.xml"), "--fail-under", "101")
    assert code == 2
    assert "below --fail-under" in text


def test_failing_test_gives_exit_1(tmp_path):
    class Broken(uvm_test):
        def check_phase(self):
            raise AssertionError("nope")

    register_test("tmp.broken")(Broken)
    try:
        code, text = run_cli("run", "--test", "tmp.broken", "--cov-out", str(tmp_path / "c.xml"))
    finally:
        runner._registry.pop("tmp.broken", None)
    assert code == 1
    assert text.startswith("FAIL tmp.broken")


def test_report_empty_db(tmp_path):
    path = tmp_path / "empty.xml"
    write_coverage_db(CoverageDb(), path)
    code, text = run_cli("report", str(path))
    assert code == 0
    assert text.splitlines()[-1].split() == ["total", "0.00"]
    assert run_cli("report", str(path), "--fail-under", "1")[0] == 2


def test_report_corrupt_and_missing(tmp_path):
    bad = tmp_path / "bad.xml"
    bad.write_text("<coverage><group")
    assert run_cli("report", str(bad))[0] == 65
    assert run_cli("report", str(tmp_path / "missing.xml"))[0] == 65


def test_report_ecc_database(tmp_path):
    cov = tmp_path / "ecc.xml"
    assert run_cli("run", "--test", "ecc.base", "--transactions", "10000", "--cov-out", str(cov))[0] == 0
    code, text = run_cli("report", str(cov))
    assert code == 0
    assert "ecc.cg_1" in text and "    missing 0|1" in text.splitlines()
    assert text.splitlines()[-1].split() == ["total", "95.00"]


def test_rerun_reproduces_bytes(tmp_path):
    paths = [tmp_path / "a.xml", tmp_path / "b.xml"]
    for p in paths:
        assert run_cli("run", "--test", "adc.stress", "--seed", "9", "--transactions", "200",
                       "--cov-out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_env_var_overrides_log_level(tmp_path, monkeypatch, capsys):
    args = ("run", "--test", "alu.base", "--transactions", "5", "--cov-out", str(tmp_path / "c.xml"))
    monkeypatch.setenv("VERIKIT_LOG", "WARNING")
    assert run_cli(*args)[0] == 0
    assert capsys.readouterr().err == ""
    monkeypatch.setenv("VERIKIT_LOG", "DEBUG")
    assert run_cli(*args, "--log-level", "ERROR")[0] == 0
    assert "Test: Yay!!! Passed!" in capsys.readouterr().err
    monkeypatch.setenv("VERIKIT_LOG", "LOUD")
    assert run_cli(*args)[0] == 64


def test_bench_csv(tmp_path):
    path = tmp_path / "bench.csv"
    assert run_cli("bench", "--transactions", "20,40", "--csv", str(path))[0] == 0
    text = path.read_text()
    assert text.splitlines()[0] == "test,transactions,wall_seconds,sim_ns"
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [(r["test"], r["transactions"]) for r in rows] == [
        ("alu.base", "20"), ("ecc.base", "20"), ("alu.base", "40"), ("ecc.base", "40")]
    assert all(float(r["wall_seconds"]) >= 0 and int(r["sim_ns"]) > 0 for r in rows)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "verikit", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.split() == EXPECTED_TESTS
