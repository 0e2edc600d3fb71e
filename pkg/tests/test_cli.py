import json
import re
import subprocess
import sys

from catfield.cli import main, parse_objects, resolve_category
from catfield.causal import minkowski_lattice

ERROR_LINE = re.compile(r"^error: [a-z_]+\.[A-Za-z]+: ", re.M)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys, data_dir):
    code, out, _ = run(capsys, "validate", str(data_dir / "indiscrete2.json"))
    assert code == 0
    assert out.strip() == "2 objects, 4 arrows, category axioms OK"


def test_validate_standard_name(capsys):
    code, out, _ = run(capsys, "validate", "indiscrete:3")
    assert code == 0 and out.startswith("3 objects, 9 arrows")


def test_usage_errors_exit_2(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "usage:" in err and ERROR_LINE.search(err)
    code, _, err = run(capsys, "validate", "no/such/file.json")
    assert code == 2 and ERROR_LINE.search(err)
    code, _, err = run(capsys, "demo", "minkowski", "--t", "3")
    assert code == 2


def test_invalid_state_exits_1_with_code(capsys, data_dir):
    code, _, err = run(capsys, "state", "check", str(data_dir / "indiscrete2_bad.json"))
    assert code == 1
    assert err.startswith("error: states.NotPSD: ")


def test_state_check_and_gns(capsys, data_dir):
    code, out, _ = run(capsys, "state", "check", str(data_dir / "indiscrete2_trace.json"))
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "gns", str(data_dir / "indiscrete2.json"), str(data_dir / "indiscrete2_trace.json"))
    assert code == 0 and json.loads(out)["dimension"] == 4
    code, out, _ = run(capsys, "gns", str(data_dir / "indiscrete2.json"), str(data_dir / "indiscrete2_vector.json"), "--representation")
    rep = json.loads(out)
    assert rep["dimension"] == 2 and set(rep["representation"]) == {"1->1", "1->2", "2->1", "2->2"}


def test_env_tolerance(capsys, data_dir, monkeypatch):
    monkeypatch.setenv("CATFIELD_TOLERANCE", "not-a-number")
    code, _, err = run(capsys, "state", "check", str(data_dir / "indiscrete2_trace.json"))
    assert code == 2 and "CATFIELD_TOLERANCE" in err
    monkeypatch.setenv("CATFIELD_TOLERANCE", "1e-6")
    code, out, _ = run(capsys, "gns", str(data_dir / "indiscrete2.json"), str(data_dir / "indiscrete2_trace.json"))
    assert code == 0 and json.loads(out)["rank_tolerance"] == 1e-6


def test_walk_csv_matches_fixture(capsys, data_dir):
    code, out, _ = run(capsys, "walk", str(data_dir / "hadamard4.json"), "--steps", "3")
    assert code == 0
    got = out.strip().splitlines()
    ref = (data_dir / "hadamard4_oracle.csv").read_text().strip().splitlines()
    assert got[0] == ref[0] == "t,observable,re,im"
    assert len(got) == len(ref) == 1 + 4 * 6
    for a, b in zip(got[1:], ref[1:]):
        ta, na, ra, ia = a.split(",")
        tb, nb, rb, ib = b.split(",")
        assert (ta, na) == (tb, nb)
        assert abs(float(ra) - float(rb)) <= 1e-9 and abs(float(ia) - float(ib)) <= 1e-9


def test_walk_json_and_output_file(capsys, data_dir, tmp_path):
    target = tmp_path / "walk.json"
    code, out, _ = run(capsys, "walk", str(data_dir / "hadamard4.json"), "--format", "json", "-o", str(target))
    assert code == 0 and out == ""
    payload = json.loads(target.read_text())
    assert len(payload["unit"]) == 4


def test_algebra_and_center(capsys, tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"category": "indiscrete:2", "weights": {"2->1": [1, 0]}}))
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"category": "indiscrete:2", "weights": {"1->2": [1, 0]}}))
    code, out, _ = run(capsys, "algebra", "mul", str(a), str(b))
    assert code == 0 and set(json.loads(out)["weights"]) == {"1->1"}
    code, out, _ = run(capsys, "center", "cyclic:3")
    assert code == 0 and json.loads(out)["dimension"] == 3


def test_relevant_and_local_algebra(capsys, tmp_path):
    cc = minkowski_lattice(3, 3)
    path = tmp_path / "lattice.json"
    raw = cc.ambient.to_json()
    raw["causal"] = sorted(cc.causal_arrows)
    raw["involution"] = {"kind": "reversal"}
    path.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "relevant", str(path), "--objects", "1,1")
    assert code == 0
    payload = json.loads(out)
    assert payload["objects"] == ["1,1"] and len(payload["relevant_arrows"]) > 9
    code, out, _ = run(capsys, "local-algebra", str(path), "--objects", "1,1", "--involution")
    assert code == 0 and json.loads(out)["with_involution"] is True
    code, _, err = run(capsys, "local-algebra", str(path), "--objects", "0,0;2,0")
    assert code == 1 and "NotARegion" in err


def test_parse_objects_forms():
    cat = minkowski_lattice(2, 2).ambient
    assert parse_objects(cat, ["0,0,1,1"]) == ["0,0", "1,1"]
    assert parse_objects(cat, ["0,0;1,1"]) == ["0,0", "1,1"]
    assert parse_objects(cat, ["0,0", "1,1"]) == ["0,0", "1,1"]
    cat, _ = resolve_category("indiscrete:3")
    assert parse_objects(cat, ["1,3"]) == ["1", "3"]


def test_check_theorems_table(capsys):
    code, out, _ = run(capsys, "check-theorems", "indiscrete:3")
    assert code == 0
    assert out.splitlines()[0].split()[:2] == ["check", "result"]


def test_demo_is_byte_identical(capsys):
    first = run(capsys, "demo", "minkowski", "--t", "3", "--x", "3")
    second = run(capsys, "demo", "minkowski", "--t", "3", "--x", "3")
    assert first[0] == 0 and first == second
    rows = first[1].splitlines()[3:]
    assert len(rows) == 4 and all(" PASS " in r for r in rows)
    code, out, _ = run(capsys, "demo", "minkowski", "--t", "2", "--x", "2", "--format", "json", "--seed", "5")
    assert code == 0 and json.loads(out)["seed"] == 5


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "catfield.cli", "validate", "indiscrete:2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "category axioms OK" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "catfield.cli"], capture_output=True, text=True)
    assert proc.returncode == 2
