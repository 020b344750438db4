import csv
import io
import json

import pytest

from timevortex.cli import main
from timevortex.dem import from_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_distance_examples(capsys):
    code, out, _ = run(capsys, "distance", "--L1", "4,1,0", "--L2", "1,-5,0")
    body = json.loads(out)
    assert code == 0
    assert (body["D"], body["N"], body["R"], body["constraints_ok"]) == (3, 42, "42/9", True)
    assert len(body["fingerprint"]) == 64 and body["run_config"]["command"] == "distance"
    code, out, _ = run(capsys, "distance", "--L1", "1,1,0", "--L2", "2,-1,0")
    assert (json.loads(out)["D"], json.loads(out)["N"]) == (1, 6)
    code, out, _ = run(capsys, "distance", "--cdn", "0,1,1,-5,2,0")
    assert code == 0 and json.loads(out)["L1"] == [3, 0, -6]


def test_distance_constraint_violation(capsys):
    code, out, _ = run(capsys, "distance", "--L1", "1,1,-30", "--L2", "2,-1,0")
    body = json.loads(out)
    assert code == 2
    assert body["constraints_ok"] is False and "warning" in body and body["D"] >= 1


@pytest.mark.parametrize("argv", [
    ["distance", "--L1", "4,1", "--L2", "1,-5,0"],
    ["distance", "--L1", "4,1,0"],
    ["distance", "--L1", "1,2,0", "--L2", "2,4,0"],
    ["nonsense"],
    ["table", "--max-qubits", "3"],
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as ei:
        code = main(argv)
        raise SystemExit(code)
    assert ei.value.code == 1


def test_io_error_exit_3(tmp_path, capsys):
    code = main(["distance", "--L1", "4,1,0", "--L2", "1,-5,0", "--out",
                 str(tmp_path / "missing" / "x.json")])
    assert code == 3


def test_table_small(capsys):
    code, out, _ = run(capsys, "table", "--max-qubits", "100", "--vortices", "off")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [(r["D"], r["N"]) for r in rows] == [("1", "6"), ("2", "18"), ("3", "42"), ("4", "72")]
    code, out, _ = run(capsys, "table", "--max-qubits", "6")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {(r["family"], r["D"], r["N"]) for r in rows} == {
        ("vortex-free", "1", "6"), ("vortexed", "1", "6")}


def test_table_meta_sidecar(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["table", "--max-qubits", "50", "--out", str(out)]) == 0
    meta = json.loads((tmp_path / "t.csv.meta.json").read_text())
    assert meta["run_config"]["max_qubits"] == 50


def test_export_dem(tmp_path, capsys):
    a, b = tmp_path / "a.dem", tmp_path / "b.dem"
    args = ["export-dem", "--L1", "1,1,0", "--L2", "2,-1,0", "--p", "0.01", "--rounds", "1"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    g = from_text(a.read_text())
    assert g.rounds == 1 and g.mechanisms
    code, out, _ = run(capsys, "export-dem", "--L1", "1,1,0", "--L2", "2,-1,0", "--p", "0.01",
                       "--rounds", "0")
    assert code == 0
    assert all(line.startswith("#") for line in out.splitlines())


def test_simulate_and_sweep(capsys):
    code, out, _ = run(capsys, "simulate", "--L1", "3,0,-6", "--L2", "1,-5,0", "--p", "0.01",
                       "--shots", "500", "--seed", "3")
    st = json.loads(out)["stats"]
    assert code == 0 and st["shots"] == 500 and st["D"] == 3
    code, out, _ = run(capsys, "sweep", "--config", "3,0,-6;1,-5,0", "--p", "0.01", "0.02",
                       "--shots", "300")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    code, out, _ = run(capsys, "simulate", "--L1", "1,1,-30", "--L2", "2,-1,0", "--p", "0.01")
    assert code == 2


def test_variants(capsys):
    _, out, _ = run(capsys, "variants", "repetition", "--qubits", "16", "--vortices", "1")
    assert json.loads(out)["distance"] == 17
    _, out, _ = run(capsys, "variants", "toric", "--Lx", "4", "--no-diagonals")
    assert json.loads(out)["distance"] == 4
    _, out, _ = run(capsys, "variants", "tradeoff", "--p", "0.01", "--alpha", "0.1", "--y", "1",
                    "--z", "1", "--D0", "5")
    assert json.loads(out)["beneficial"] is True
    assert main(["variants", "repetition", "--qubits", "5"]) == 1


def test_deterministic_outputs(capsys):
    argv = ["distance", "--L1", "19,1,36", "--L2", "1,-20,-72"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
