import csv
import io
import json
import subprocess
import sys

import pytest

from qdet.cli import ConfigError, _normalize_argv, check_odd, main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_matrix_text(capsys):
    code, out, _ = run(capsys, "matrix", "--kind", "floor-qint", "-a", "1", "-n", "3")
    assert code == 0
    assert len(out.splitlines()) == 3 and "-q^-1" in out


def test_matrix_json(capsys):
    code, out, _ = run(capsys, "matrix", "--kind", "q-fractional", "-a", "1", "-n", "3",
                       "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["variable"] == "t" and obj["kind"] == "q-fractional"
    assert all(e == "1" or e.startswith("t^-") for r in obj["entries"] for e in r)


def test_matrix_even_n(capsys):
    code, _, err = run(capsys, "matrix", "--kind", "floor-qint", "-a", "1", "-n", "4")
    assert code == 2 and "n must be odd" in err


def test_det_outputs(capsys):
    assert run(capsys, "det", "--kind", "floor-qint", "-a", "1", "-n", "3")[:2] == (0, "q^-4\n")
    assert run(capsys, "det", "--kind", "ceil-qint", "-a", "1", "-n", "3",
               "--expected")[:2] == (0, "-q  PASS\n")
    assert run(capsys, "det", "--kind", "floor-qint", "-a", "2", "-n", "3")[:2] == (0, "0\n")


def test_det_json_expected(capsys):
    code, out, _ = run(capsys, "det", "--kind", "floor-x", "-a", "1", "-n", "5",
                       "--expected", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["pass"] is True and obj["det"] == obj["expected"]


def test_det_to_file(tmp_path, capsys):
    path = tmp_path / "d.txt"
    code, out, _ = run(capsys, "det", "--kind", "q-prime-fractional", "-a", "1", "-n", "3",
                       "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().strip() == "-t^6 + 2*t^3 - 1"


def test_verify_text_summary(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "thm-floor", "-a", "-2..2", "-n", "1..5")
    assert code == 0
    assert out.splitlines()[-1] == "15 checks: 15 passed, 0 skipped, 0 failures"


def test_verify_zolotarev_default(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "zolotarev", "-n", "1..25")
    assert code == 0 and out.rstrip().endswith("0 failures")


def test_verify_even_range_rejected(capsys):
    code, _, err = run(capsys, "verify", "--identity", "thm-floor", "-n", "2..4")
    assert code == 2 and "offending values: 2, 4" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--identity", "nope", "-n", "3"],
    ["verify", "-n", "3"],
    ["verify", "--identity", "thm-floor", "-n", "5..3"],
    ["verify", "--identity", "thm-floor", "-n", "3", "--tol", "-1"],
    ["verify", "--identity", "thm-floor", "-n", "3", "--jobs", "0"],
    ["matrix", "--kind", "bogus", "-a", "1", "-n", "3"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_verify_failure_exit_1(capsys, monkeypatch):
    from qdet import verify
    from qdet.reports import IdentityId, VerificationReport

    def broken(a, n, qs, tol):
        return [VerificationReport(IdentityId.THM_FLOOR, a, n, "1", "2", False)]

    monkeypatch.setitem(verify._REGISTRY, IdentityId.THM_FLOOR, (broken, None))
    code, out, _ = run(capsys, "verify", "--identity", "thm-floor", "-a", "1", "-n", "3")
    assert code == 1 and out.startswith("FAIL")


def test_verify_json_lines(capsys):
    code, out, err = run(capsys, "verify", "--identity", "prop-qinv", "--identity", "thm-ceil",
                         "-a", "0..2", "-n", "3", "--format", "json")
    assert code == 0 and "0 failures" in err
    objs = [json.loads(line) for line in out.splitlines()]
    assert [(o["identity"], o["a"]) for o in objs] == [
        ("thm-ceil", 0), ("thm-ceil", 1), ("thm-ceil", 2),
        ("prop-qinv", 0), ("prop-qinv", 1), ("prop-qinv", 2)]
    assert objs[-1]["skipped"] is True and objs[-1]["pass"] is False
    assert all(isinstance(o["elapsed_ms"], float) for o in objs)


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "ucv-factor", "-a", "1", "-n", "3",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert list(rows[0]) == ["identity", "a", "n", "pass", "lhs", "rhs", "elapsed_ms"]
    assert {r["pass"] for r in rows} == {"true"}


def test_verify_output_independent_of_jobs(capsys, tmp_path):
    outs = []
    for jobs in ("1", "2"):
        path = tmp_path / f"r{jobs}.csv"
        code = main(["verify", "--identity", "thm-floor", "--identity", "cor-neg1",
                     "-a", "-3..3", "-n", "1..7", "--format", "csv", "--out", str(path),
                     "--jobs", jobs])
        assert code == 0
        rows = list(csv.reader(io.StringIO(path.read_text())))
        outs.append([r[:6] for r in rows])
    assert outs[0] == outs[1]


def test_tol_override(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "vandermonde-inv", "-n", "15",
                       "--tol", "1e-30")
    assert code == 1


def test_qdet_jobs_env(monkeypatch):
    from qdet.verify import default_jobs
    monkeypatch.setenv("QDET_JOBS", "3")
    assert default_jobs() == 3


def test_range_helpers():
    assert parse_range("1..5", step=2) == [1, 3, 5]
    assert parse_range("-6..6") == list(range(-6, 7))
    assert parse_range("7") == [7]
    with pytest.raises(ConfigError):
        parse_range("1...3")
    with pytest.raises(ConfigError):
        check_odd([1, 2, 3])
    assert _normalize_argv(["-a", "-6..6", "-n", "3"]) == ["-a-6..6", "-n3"]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdet.cli", "det", "--kind", "ceil-qint",
                           "-a", "1", "-n", "3", "--expected"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "-q  PASS\n"
