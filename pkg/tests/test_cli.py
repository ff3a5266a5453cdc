import json
import subprocess
import sys
from pathlib import Path

import pytest

from anorm.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
CUSP = str(FIXTURES / "cusp.job")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_cusp(capsys):
    code, out, _ = run(capsys, "run", CUSP, "--json")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 5 and all(r["status"] == "ok" for r in reports)


def test_denominator_subcommand(capsys):
    code, out, _ = run(capsys, "denominator", CUSP, "--variety", "A", "--json")
    assert code == 0
    assert json.loads(out)[0]["payload"]["Q"] == "2*y"


def test_represent_subcommand(capsys):
    code, out, _ = run(capsys, "represent", CUSP, "--function", "f", "--json")
    assert code == 0
    assert json.loads(out)[0]["payload"]["R"] == "2*x^2"


def test_normalize_subcommand(capsys):
    code, out, _ = run(capsys, "normalize", CUSP, "--variety", "A", "--generators", "H")
    assert code == 0 and "w^2 - x" in out


def test_growth_subcommand(capsys):
    code, out, _ = run(capsys, "growth", CUSP, "--function", "f", "--seed", "7", "--json")
    assert code == 0
    payload = json.loads(out)[0]["payload"]
    assert payload["snapped"] == {"p": 1, "q": 3}
    assert payload["config"]["seed"] == 7


def test_check_runs_embedded_tasks(capsys):
    code, out, _ = run(capsys, "check", CUSP, "--json")
    assert code == 0
    assert [r["kind"] for r in json.loads(out)] == ["check prop52"]


def test_nullsatz_subcommand(capsys):
    code, out, _ = run(capsys, "nullsatz", CUSP, "--json")
    assert code == 0
    assert json.loads(out)[0]["payload"]["q"] == [{"num": "y", "den": "x"}]


def test_no_certificate_exit_1(capsys):
    code, _, err = run(capsys, "run", str(FIXTURES / "cusp_nocert.job"))
    assert code == 1
    assert "no certificate: radical membership failed" in err


def test_syntax_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.job"
    bad.write_text("variety A { vars: x, y; ideal: y^2 - ; dim: 1; }\n")
    code, _, err = run(capsys, "run", str(bad))
    assert code == 2
    assert "line 1" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "run", str(tmp_path / "nope.job"))
    assert code == 2 and "cannot read" in err


def test_unknown_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", CUSP, "--frobnicate"])
    assert info.value.code == 2


def test_unknown_selector_name_exit_2(capsys):
    code, _, err = run(capsys, "denominator", CUSP, "--variety", "B")
    assert code == 2 and "'B'" in err


def test_limit_exit_3(capsys, tmp_path):
    job = tmp_path / "hard.job"
    job.write_text("variety A { vars: x, y, z; ideal: x^3 - y*z + 1, y^3 - x*z - 2, z^3 - x*y + 3; dim: 0; }\n"
                   "task denominator A\n")
    code, out, _ = run(capsys, "run", str(job), "--max-pairs", "2")
    assert code == 3 and "LIMIT" in out


def test_numeric_exit_4(capsys, tmp_path):
    # fiber coordinates at radius 1e300 overflow double precision
    job = tmp_path / "num.job"
    job.write_text("variety A { vars: x, y; ideal: y^2 - x^3; dim: 1; }\n"
                   "function f on A = (y) / (x)\ntask growth f { rmax=1e300; }\n")
    code, out, _ = run(capsys, "run", str(job))
    assert code == 4 and "NUMERIC" in out


def test_invalid_cap_exit_2(capsys):
    code, _, _ = run(capsys, "run", CUSP, "--max-pairs", "0")
    assert code == 2


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ANORM_SEED", "11")
    code, out, _ = run(capsys, "growth", CUSP, "--function", "f", "--json")
    assert json.loads(out)[0]["payload"]["config"]["seed"] == 11
    monkeypatch.setenv("ANORM_SEED", "eleven")
    code, _, _ = run(capsys, "growth", CUSP, "--function", "f")
    assert code == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "reports.json"
    code, out, _ = run(capsys, "run", CUSP, "--json", "--out", str(target))
    assert code == 0 and out == ""
    assert len(json.loads(target.read_text())) == 5


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--json")
    assert code == 0
    assert {r["task"] for r in json.loads(out)} >= {"cusp-denominator", "groebner-soundness"}


def test_selftest_filter(capsys):
    code, out, _ = run(capsys, "selftest", "--filter", "growth", "--json")
    assert code == 0
    assert {r["kind"] for r in json.loads(out)} == {"growth"}


def test_selftest_corrupted_golden(capsys, tmp_path):
    from anorm.corpus import load_golden
    golden = load_golden()
    golden["cusp-denominator"]["Q"] = "3*y"
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(golden))
    code, _, err = run(capsys, "selftest", "--golden", str(path))
    assert code == 1
    assert "cusp-denominator" in err


def test_selftest_is_bitwise_deterministic(capsys):
    _, first, _ = run(capsys, "selftest", "--json", "--seed", "0")
    _, second, _ = run(capsys, "selftest", "--json", "--seed", "0")
    assert first == second


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "anorm.cli", "denominator", CUSP, "--variety", "A", "--json"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["payload"]["Q"] == "2*y"
