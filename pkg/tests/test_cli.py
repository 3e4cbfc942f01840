"""Front-end contract: pinned outputs, formats, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from wzw import cli
from wzw.errors import InternalError


def run_cli(*args):
    code = ("import sys; from wzw.cli import main; "
            "sys.exit(main(sys.argv[1:]))")
    return subprocess.run([sys.executable, "-c", code, *args],
                          capture_output=True, text=True)


def test_dim_example():
    out = run_cli("dim", "--algebra", "A1", "--level", "1", "--genus", "2")
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"dimension": 4}


def test_dehn_example():
    out = run_cli("dehn", "--algebra", "A1", "--level", "1", "--label", "1")
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"exponent": "1/2",
                                      "eigenvalue": "exp(-i*pi/2)"}


def test_oracle_example():
    out = run_cli("oracle", "three-point", "--level", "1", "--labels", "1,1,0")
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"rank": 1, "classical_rank": 1}


def test_fusion_table_schema():
    out = run_cli("fusion-table", "--algebra", "A1", "--level", "2")
    data = json.loads(out.stdout)
    assert data["algebra"] == "A1" and data["level"] == 2
    assert data["labels"] == [[0], [1], [2]]
    for entry in data["coeffs"]:
        assert set(entry) == {"labels", "n"}
        assert all(0 <= i < 3 for i in entry["labels"])
        assert entry["n"] > 0
    # unit row: 0 fuses with m to m alone
    assert {"labels": [0, 1, 1], "n": 1} in data["coeffs"]


def test_fusion_table_tsv():
    out = run_cli("fusion-table", "--algebra", "A1", "--level", "1",
                  "--format", "tsv")
    lines = out.stdout.splitlines()
    assert lines[0].split("\t") == ["labels", "0", "1"]
    assert len(lines) == 5


def test_kz_matrices_rational_strings():
    out = run_cli("kz", "matrices", "--level", "2", "--labels", "1,1,2")
    data = json.loads(out.stdout)
    assert data["dim"] == 1 and data["classical_dim"] == 1
    entries = {(m["i"], m["j"]): m["entries"] for m in data["matrices"]}
    assert entries[(0, 1)] == [["-1/8"]]
    assert entries[(0, 2)] == [["1/2"]]
    assert data["base_point"] == ["2", "0", "-2"]


def test_kz_transport_round_trip(tmp_path):
    path = tmp_path / "loop.json"
    path.write_text(json.dumps({
        "points": [[[2, 0], [0, 0], [-2, 0]], [[2, 1], [0, 0], [-2, 0]],
                   [[3, 1], [0, 0], [-2, 0]], [[3, 0], [0, 0], [-2, 0]]],
        "closed": True}))
    out = run_cli("kz", "transport", "--level", "2", "--labels", "1,1,2",
                  "--path", str(path), "--steps", "1000")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["converged"] is True
    re, im = data["matrix"][0][0]
    assert abs(re - 1) < 1e-6 and abs(im) < 1e-6


def test_kz_transport_bad_path_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\"points\": 3}")
    out = run_cli("kz", "transport", "--level", "2", "--labels", "1,1,2",
                  "--path", str(path))
    assert out.returncode == 1
    assert "points" in out.stderr


def test_verify_virasoro_report():
    out = run_cli("verify", "virasoro", "--kmax", "1", "--degree", "6")
    data = json.loads(out.stdout)
    assert out.returncode == 0
    assert all(set(row) == {"name", "window", "residual_norm"}
               for row in data["checks"])
    assert all(row["residual_norm"] == "0" for row in data["checks"])


def test_verify_sugawara_report():
    out = run_cli("verify", "sugawara", "--algebra", "A1", "--level", "1",
                  "--label", "1", "--degree", "4")
    data = json.loads(out.stdout)
    assert out.returncode == 0
    names = [row["name"] for row in data["checks"]]
    assert any(n.startswith("sugawara-bracket") for n in names)
    assert any(n.startswith("current") for n in names)
    assert any(n.startswith("L0-spectrum") for n in names)
    assert all(row["residual_norm"] == "0" for row in data["checks"])


def test_verify_single_check_by_name():
    out = run_cli("verify", "virasoro-bracket")
    data = json.loads(out.stdout)
    assert out.returncode == 0
    assert data["checks"][0]["name"] == "virasoro-bracket"
    assert data["checks"][0]["status"] == "pass"


def test_byte_identical_reruns():
    for args in (("fusion-table", "--algebra", "A2", "--level", "1"),
                 ("kz", "matrices", "--level", "1", "--labels", "1,1,1,1"),
                 ("dim", "--algebra", "A1", "--level", "3", "--genus", "1")):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.stdout == second.stdout
        assert first.returncode == second.returncode == 0


def test_exit_code_one_on_bad_input():
    assert run_cli("dim", "--algebra", "A1", "--level", "1",
                   "--genus", "-3").returncode == 1
    assert run_cli("dehn", "--algebra", "A1", "--level", "1",
                   "--label", "9").returncode == 1
    assert run_cli("nonsense").returncode == 1
    assert run_cli("dim", "--algebra", "A1", "--level", "1",
                   "--genus", "2", "--bogus-flag").returncode == 1


def test_exit_code_two_on_internal_error(monkeypatch, capsys):
    def boom(kmax, degree):
        raise InternalError("synthetic invariant violation")
    monkeypatch.setattr(cli.checks, "virasoro_rows", boom)
    code = cli.main(["verify", "virasoro"])
    assert code == 2
    assert "internal error" in capsys.readouterr().err


def test_main_returns_zero_in_process(capsys):
    assert cli.main(["dehn", "--algebra", "A1", "--level", "2",
                     "--label", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"exponent": "1", "eigenvalue": "-1"}
