from __future__ import annotations

import csv
import io
import json

import pytest

from powerbounds.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main, parse_poly
from powerbounds.generators import load_fixture
from powerbounds.graph import encode_edge_list, encode_graph6


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def reports(text):
    data = json.loads(text)
    return {r["method"]: r for g in data["graphs"] for r in g["reports"]}


def test_bounds_odd_graph(capsys):
    code, out, _ = run(capsys, "bounds", "--gen", "odd:4", "--k", "2", "--method", "milp-wr", "--format", "json")
    assert code == EXIT_OK
    rep = reports(out)["milp-wr"]
    assert rep["int_value"] == 7 and rep["verified"]
    assert rep["certificate"]["sign_pattern"] == "+--+"


def test_bounds_prism_with_oracle(capsys):
    code, out, _ = run(capsys, "bounds", "--gen", "prism:10", "--k", "2", "--method", "milp-wr,oracle",
                       "--format", "json")
    assert code == EXIT_OK
    reps = reports(out)
    assert reps["milp-wr"]["int_value"] == 6
    assert reps["oracle"]["int_value"] == 4


def test_bounds_corollary_on_generated_graph(capsys):
    code, out, _ = run(capsys, "bounds", "--gen", "gp:8,3", "--k", "2", "--method", "cor22-ratio", "--format", "json")
    assert code == EXIT_OK
    assert reports(out)["cor22-ratio"]["int_value"] == 4


def test_bounds_default_methods(capsys):
    code, out, _ = run(capsys, "bounds", "--gen", "cycle:8", "--k", "2", "--format", "json")
    assert code == EXIT_OK
    assert set(reports(out)) == {"cor22-ratio", "milp-wr", "milp-vertex"}


def test_bounds_custom_polynomial(capsys):
    code, out, _ = run(capsys, "bounds", "--g6", "fixtures/heawood.g6", "--k", "2", "--method", "ratio",
                       "--poly=-3,1,1", "--format", "json")
    assert code == EXIT_OK
    assert reports(out)["ratio"]["raw_value"] == pytest.approx(2.9611317, abs=1e-6)


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--gen", "prism:10", "--k", "2", "--method", "milp-wr", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["method"] == "milp-wr" and rows[0]["int_value"] == "6"


def test_bounds_text(capsys):
    code, out, _ = run(capsys, "bounds", "--gen", "prism:7", "--k", "2", "--method", "milp-wr")
    assert code == EXIT_OK
    assert "milp-wr" in out and "Prism7" in out


def test_json_is_deterministic(capsys):
    argv = ("bounds", "--gen", "prism:9", "--k", "2", "--method", "milp-wr,milp-vertex,cor22-ratio",
            "--format", "json", "--jobs", "1")

    def strip(text):
        data = json.loads(text)
        for g in data["graphs"]:
            for r in g["reports"]:
                r.pop("millis")
        return data

    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert strip(a) == strip(b)


def test_edge_list_and_stdin(capsys, monkeypatch, tmp_path):
    path = tmp_path / "pet.txt"
    path.write_text(encode_edge_list(load_fixture("petersen")))
    code, out, _ = run(capsys, "bounds", "--edges", str(path), "--k", "1", "--method", "hoffman", "--format", "json")
    assert code == EXIT_OK and reports(out)["hoffman"]["int_value"] == 4
    monkeypatch.setattr("sys.stdin", io.StringIO(encode_graph6(load_fixture("hexahedron")) + "\n"))
    code, out, _ = run(capsys, "oracle", "--g6", "-", "--k", "2", "--chi", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["results"][0]["value"] == 4


def test_oracle_commands(capsys):
    code, out, _ = run(capsys, "oracle", "--gen", "prism:7", "--k", "2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["results"][0]["value"] == 3
    code, out, _ = run(capsys, "oracle", "--g6", "fixtures/heawood.g6", "--k", "2", "--chi", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["results"][0]["value"] == 7


def test_oracle_timeout_exit_code(capsys):
    code, _, _ = run(capsys, "oracle", "--g6", "fixtures/coxeter.g6", "--k", "1", "--budget", "2")
    assert code == 3


def test_spectrum_command(capsys):
    code, out, _ = run(capsys, "spectrum", "--gen", "cycle:8", "--format", "json")
    assert code == EXIT_OK
    assert "1.414" in out


@pytest.mark.parametrize("argv", [
    ("bounds", "--gen", "nosuch:3", "--k", "2"),
    ("bounds", "--g6", "/no/such/file.g6", "--k", "2"),
    ("bounds", "--gen", "cycle:8", "--k", "2", "--method", "bogus"),
    ("bounds", "--gen", "cycle:8", "--k", "2", "--poly", "1,x"),
    ("oracle", "--gen", "odd:x", "--k", "2"),
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert "error" in err


def test_parse_poly():
    assert parse_poly("-3,1,1").to_list() == [-3.0, 1.0, 1.0]


@pytest.mark.parametrize("table", ["t1", "t2", "t4", "t5"])
def test_reproduce_tables(capsys, table):
    code, out, _ = run(capsys, "reproduce", table)
    assert code == EXIT_OK
    assert "0 mismatch(es)" in out


def test_reproduce_json(capsys):
    code, out, _ = run(capsys, "reproduce", "t5", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["mismatches"] == 0
    assert EXIT_MISMATCH != EXIT_OK


def test_not_applicable_is_not_verified(capsys):
    code, out, _ = run(capsys, "bounds", "--gen", "path:5", "--k", "2", "--method", "milp-wr", "--format", "json")
    assert code == EXIT_MISMATCH
    assert reports(out)["milp-wr"]["status"] == "not-applicable"
