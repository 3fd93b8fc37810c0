"""CLI surface: subcommands, exit codes, emission formats."""

import json

import pytest

from pru_lab import cli_main, strip_timing_fields


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_no_arguments_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli_main([])
    assert exc.value.code == 2


def test_unknown_flag_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli_main(["verify", "--bogus"])
    assert exc.value.code == 2


def test_verify_json(capsys):
    code, out = run_cli(
        capsys, "verify", "--n", "1", "--t", "2", "--seed", "7",
        "--samples", "200", "--samples-unitary", "500", "--keys", "16", "--format", "json",
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "pru-lab/1"
    assert rep["passed"] is True
    assert rep["checks"]


def test_verify_single_check_selection(capsys):
    code, out = run_cli(
        capsys, "verify", "--n", "1", "--t", "2", "--check", "character_orthogonality",
    )
    assert code == 0
    rep = json.loads(out)
    assert {c["check_id"] for c in rep["checks"]} == {"character_orthogonality"}


def test_verify_deterministic_repeat(capsys):
    args = ("verify", "--n", "1", "--t", "2", "--seed", "11",
            "--samples", "100", "--samples-unitary", "300", "--keys", "8")
    _, out1 = run_cli(capsys, *args)
    _, out2 = run_cli(capsys, *args)
    a = strip_timing_fields(json.loads(out1))
    b = strip_timing_fields(json.loads(out2))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_security_command(capsys):
    code, out = run_cli(
        capsys, "security", "--n", "2", "--t", "2", "--state", "random_pure",
        "--dim-e", "2", "--seed", "3",
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["kind"] == "security"
    assert "trace_distance_fr_hr" in rep["quantities"]


def test_csv_and_json_same_numbers(capsys, tmp_path):
    json_path = tmp_path / "r.json"
    csv_path = tmp_path / "r.csv"
    base = ("security", "--n", "1", "--t", "2", "--seed", "4", "--dim-e", "2")
    assert cli_main([*base, "--format", "json", "--out", str(json_path)]) == 0
    assert cli_main([*base, "--format", "csv", "--out", str(csv_path)]) == 0
    rep = json.loads(json_path.read_text())
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "check_id,n,t,dim_e,measured,bound,pass,seed,wall_ms"
    for line, check in zip(lines[1:], rep["checks"]):
        cells = line.split(",")
        assert cells[0] == check["check_id"]
        assert float(cells[4]) == check["measured"]
        assert float(cells[5]) == check["bound"]


def test_twirl_summary_and_dump(capsys):
    code, out = run_cli(
        capsys, "twirl", "--channel", "pf", "--n", "1", "--t", "2",
        "--state", "random_pure", "--seed", "1",
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["quantities"]["trace"] == pytest.approx(1.0, abs=1e-9)
    assert "operator" not in rep["quantities"]

    code, out = run_cli(
        capsys, "twirl", "--channel", "haar", "--n", "1", "--t", "2",
        "--state", "computational_basis", "--dump-operator", "--seed", "0",
    )
    rep = json.loads(out)
    op = rep["quantities"]["operator"]
    assert op["dim"] == 4 and len(op["entries"]) == 16


def test_sweep_grid(capsys):
    code, out = run_cli(
        capsys, "sweep", "--n", "1", "--n", "2", "--t", "1", "--t", "2",
        "--state", "random_pure", "--seed", "2",
    )
    assert code == 0
    rep = json.loads(out)
    assert set(rep["quantities"]) == {"n1_t1", "n1_t2", "n2_t1", "n2_t2"}


def test_error_reported_as_exit_one(capsys):
    code = cli_main(["security", "--n", "1", "--t", "3", "--seed", "0"])  # t > 2^n
    captured = capsys.readouterr()
    assert code == 1
    assert "error" in captured.err
