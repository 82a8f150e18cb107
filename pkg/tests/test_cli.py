import json
import subprocess
import sys
from pathlib import Path

import pytest

from partcong.cli import main
from partcong.jobs import JobError, run_job, validate

HERE = Path(__file__).parent
JOBS = HERE / "fixtures" / "jobs"
GOLDEN = HERE / "golden"

BBAR_66 = "407868414339840"

# job file -> expected exit code
EXPECTED = {
    "thm1.json": 0,
    "thm2.json": 0,
    "thm1_mod343.json": 1,
    "thm1_t0.json": 2,
    "bbar66.json": 0,
    "cubic_pair_5n4.json": 0,
    # fails: bbar(7) = 1888 = 32 mod 64
    "bbar_8n7_mod64.json": 1,
    "B4.json": 0,
    "B3.json": 1,
    "dissection.json": 0,
    "lin.json": 0,
    "density_abar.json": 0,
    "bad_t.json": 3,
    "bad_field.json": 3,
}


def run_cli(args, capsys):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_fixture_suite_is_complete():
    assert sorted(p.name for p in JOBS.glob("*.json")) == sorted(EXPECTED)
    assert len(EXPECTED) >= 10


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_exit_codes(name, cache_root, capsys):
    code, out, err = run_cli(["run", str(JOBS / name)], capsys)
    assert code == EXPECTED[name], err
    if code == 3:
        assert "error" in err and out == ""
    else:
        json.loads(out)


@pytest.mark.parametrize("name", ["thm1", "thm2"])
def test_certificate_golden(name, cache_root, capsys):
    code, out, _ = run_cli(["verify", "--preset", name], capsys)
    assert code == 0
    assert json.loads(out) == json.loads((GOLDEN / f"{name}_certificate.json").read_text())


def test_certificate_fields(cache_root, capsys):
    _, out, _ = run_cli(["verify", "--preset", "thm1"], capsys)
    doc = json.loads(out)
    assert doc["nu_floor"] == "48" and doc["p_set"] == ["37"] and doc["verdict"] == "proven"


def test_coefficients_big_integers_are_strings(cache_root, capsys):
    code, out, _ = run_cli(["coeff", "--sequence", "overcubic-pair", "--n", "66"], capsys)
    assert code == 0
    assert json.loads(out)["values"] == {"66": BBAR_66}


def test_flags_override_job_file(cache_root, capsys, tmp_path):
    job = tmp_path / "j.json"
    job.write_text(json.dumps({"kind": "radu-verify", "preset": "thm1"}))
    code, out, _ = run_cli(["verify", "--job", str(job), "--u", "343"], capsys)
    assert code == 1 and json.loads(out)["verdict"] == "counterexample"


def test_job_kind_must_match_subcommand(cache_root, capsys):
    code, _, err = run_cli(["coeff", "--job", str(JOBS / "thm1.json")], capsys)
    assert code == 3 and "radu-verify" in err


def test_out_file(cache_root, capsys, tmp_path):
    out = tmp_path / "rep.json"
    code, stdout, _ = run_cli(["lin", "--T", "60", "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["holds"] is True


def test_custom_sequence_flag(cache_root, capsys):
    # custom:2:-1,-1 is the cubic partition function a(n)
    code, out, _ = run_cli(["coeff", "--sequence", "custom:2:-1,-1", "--n", "0,1,2,3,4"], capsys)
    assert code == 0
    assert json.loads(out)["values"] == {"0": "1", "1": "1", "2": "3", "3": "4", "4": "9"}


def test_eta_custom_exponents(cache_root, capsys):
    code, out, _ = run_cli(["eta", "--level", "384", "--r", "24:-4,48:14,96:-6", "--characters-at", "5,7"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["weight"] == {"num": "2", "den": "1"} and doc["holomorphic"] is True


def test_eta_report_names_negative_cusps(cache_root, capsys):
    code, out, _ = run_cli(["run", str(JOBS / "B3.json")], capsys)
    assert code == 1
    assert json.loads(out)["negative_cusps"]


def test_density_csv(cache_root, capsys, tmp_path):
    csv = tmp_path / "d.csv"
    code, out, _ = run_cli(
        ["density", "--sequence", "overcubic", "--u", "4", "--X-max", "1000", "--checkpoints", "100,1000", "--csv", str(csv)],
        capsys,
    )
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "X,count,density_num,density_den" and len(lines) == 3


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["verify", "--m", "notanint"],
        ["family", "--sequence", "cubic", "--m", "5", "--t", "7", "--u", "5", "--n-max", "10"],
        ["coeff", "--sequence", "nosuch", "--n", "1"],
        ["coeff", "--sequence", "cubic"],
        ["verify", "--m", "49"],
        ["density", "--sequence", "cubic", "--u", "2", "--X-max", "10", "--checkpoints", "20"],
        ["run", "/nonexistent/job.json"],
        ["eta", "--build", "B", "--k", "1"],
    ],
)
def test_usage_errors(argv, cache_root, capsys):
    code, _, _ = run_cli(argv, capsys)
    assert code == 3


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_validate_rejects_unknown_kind():
    with pytest.raises(JobError):
        validate({"kind": "nope"})
    with pytest.raises(JobError):
        run_job({"kind": "coefficients", "sequence": "cubic", "n": 3, "T": 4})


def test_cache_subcommand(cache_root, capsys):
    run_cli(["coeff", "--sequence", "cubic", "--n", "30"], capsys)
    code, out, _ = run_cli(["cache", "list"], capsys)
    assert code == 0 and "qscache v1" in out
    code, out, _ = run_cli(["cache", "clear"], capsys)
    assert "removed 1" in out
    code, out, _ = run_cli(["cache", "path"], capsys)
    assert out.strip() == str(cache_root)


def test_cache_dir_flag(tmp_path, capsys, cache_root):
    d = tmp_path / "flagcache"
    run_cli(["--cache-dir", str(d), "coeff", "--sequence", "cubic", "--n", "5"], capsys)
    assert len(list(d.glob("*.qs"))) == 1


def test_module_entry_point(cache_root):
    proc = subprocess.run(
        [sys.executable, "-m", "partcong.cli", "coeff", "--sequence", "overcubic-pair", "--n", "66"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert BBAR_66 in proc.stdout


def test_subprocess_exit_code_hypothesis(cache_root):
    proc = subprocess.run(
        [sys.executable, "-m", "partcong.cli", "run", str(JOBS / "thm1_t0.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["verdict"] == "hypothesis-failed"
