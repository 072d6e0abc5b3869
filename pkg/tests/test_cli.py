import io
import json
import subprocess
import sys
from pathlib import Path

from capvertex.cli import read_manifest, run
from capvertex.exactalg import parse_field

ROOT = Path(__file__).resolve().parents[1]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_hpoly_json():
    code, out, _ = call("hpoly", "--l", "2", "--lambda", "2")
    assert code == 0
    data = json.loads(out)
    assert data["lambda"] == "2" and data["l"] == 2 and data["core"] == ""
    assert data["norm"] == str(parse_field("(1-t1^2)*(1-t2/t1)"))
    coeffs = [t["coeff"] for t in data["H"]["terms"]]
    assert coeffs == ["1", "t1"]


def test_hpoly_bases_and_text():
    for basis in ("p", "schur", "vecschur"):
        code, out, _ = call("hpoly", "--l", "2", "--lambda", "2,2", "--basis", basis, "--format", "text")
        assert code == 0 and out.startswith("H[2,2] l=2")
    code, _, err = call("hpoly", "--l", "2", "--lambda", "2", "--rotation", "2")
    assert code == 2 and "rotation" in err


def test_norm():
    code, out, _ = call("norm", "--l", "1", "--lambda", "1", "--format", "text")
    assert code == 0
    assert parse_field(out.strip()) == parse_field("(1-t1)*(1-t2)")


def test_vertex_text_round_trips():
    code, out, _ = call("vertex", "--l", "1", "--lambda", "1", "--format", "text")
    assert code == 0
    assert out == "(h^2*u*w+h*u+h+w)/(h+w)\n"
    assert parse_field(out) == parse_field("(h*(1+u)+w*(1+h^2*u))/(h+w)")
    assert str(parse_field(out)) == out.strip()


def test_vertex_json_and_bindings():
    code, out, _ = call("vertex", "--l", "2", "--lambda", "2")
    data = json.loads(out)
    assert code == 0 and data["routes_agree"] is True
    assert set(data) == {"lambda", "l", "value", "classical", "routes_agree"}
    _, zero, _ = call("vertex", "--l", "2", "--lambda", "2", "--w", "0")
    assert json.loads(zero)["value"] == data["classical"]
    _, a, _ = call("vertex", "--l", "2", "--lambda", "2", "--w", "6")
    _, b, _ = call("vertex", "--l", "2", "--lambda", "2", "--z", "2,3")
    assert a == b
    code, _, err = call("vertex", "--l", "2", "--lambda", "2", "--z", "2")
    assert code == 2 and "--z" in err
    code, _, _ = call("vertex", "--l", "2", "--lambda", "2", "--w", "1", "--z", "1,1")
    assert code == 2


def test_vertex_geometric():
    _, out, _ = call("vertex", "--l", "1", "--lambda", "1", "--format", "text", "--geometric")
    assert parse_field(out) == parse_field("(t1*t2*u*w+h*u+h+w)/(h+w)")


def test_vertex_pole_binding_is_usage_error():
    code, _, err = call("vertex", "--l", "1", "--lambda", "1", "--w=-h")
    assert code == 2 and "w->" in err


def test_eval():
    code, out, _ = call("eval", "--l", "2", "--lambda", "3,1", "--m", "1")
    data = json.loads(out)
    assert code == 0 and data["equal"] and data["lhs"] == data["rhs"]
    code, _, _ = call("eval", "--l", "2", "--lambda", "3,1", "--m", "2")
    assert code == 2
    code, _, _ = call("eval", "--l", "2", "--lambda", "1")
    assert code == 2


def test_verify_pass_and_fail():
    code, out, err = call("verify", "--check", "cauchy", "--l", "2", "--degree", "2")
    assert code == 0
    assert json.loads(out) == {
        "check": "cauchy",
        "params": {"l": 2, "degree": 2, "core": ""},
        "status": "pass",
        "failures": [],
    }
    assert "pass" in err
    code, out, _ = call("verify", "--check", "fail", "--l", "1")
    assert code == 1 and json.loads(out)["failures"]
    code, out, _ = call("verify", "--check", "abrr", "--l", "1", "--degree", "1", "--timing")
    assert "wall_time" in json.loads(out)


def test_usage_errors():
    for argv in (
        [],
        ["hpoly", "--l", "2"],
        ["hpoly", "--l", "0", "--lambda", "1"],
        ["hpoly", "--l", "2", "--lambda", "1,2"],
        ["norm", "--l", "2", "--lambda", "x"],
        ["verify", "--check", "nope", "--l", "2"],
        ["verify", "--check", "cauchy", "--l", "2", "--core", "2"],
        ["verify", "--check", "classical", "--l", "2", "--m", "5"],
        ["frobnicate"],
    ):
        code, out, err = call(*argv)
        assert code == 2, argv
        assert out == "" and err.startswith("error:")


def test_batch(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n\n")
    code, out, _ = call("batch", str(empty))
    data = json.loads(out)
    assert code == 0 and data["status"] == "pass" and data["results"] == []

    man = tmp_path / "m.txt"
    man.write_text("capvertex norm --l 1 --lambda 1\nverify --check fail --l 1\nverify --check abrr --l 1 --degree 1\n")
    serial = call("batch", str(man))
    parallel = call("batch", str(man), "--jobs", "2")
    assert serial[0] == parallel[0] == 1
    assert serial[1] == parallel[1]
    data = json.loads(serial[1])
    assert len(data["failures"]) == 1
    assert data["failures"][0]["command"] == "verify --check fail --l 1"
    assert [r["status"] for r in data["results"]] == ["pass", "fail", "pass"]

    code, _, err = call("batch", str(tmp_path / "missing.txt"))
    assert code == 2 and "cannot read" in err
    nested = tmp_path / "n.txt"
    nested.write_text("batch other.txt\n")
    assert call("batch", str(nested))[0] == 2


def test_bundled_manifest_lists_valid_commands():
    entries = read_manifest(str(ROOT / "manifests" / "acceptance.txt"))
    assert len(entries) >= 20
    assert all(e.startswith("verify ") for e in entries)


def test_output_is_deterministic_across_processes():
    argv = [sys.executable, "-m", "capvertex", "hpoly", "--l", "2", "--lambda", "3,1", "--basis", "vecschur"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
    data = json.loads(a)
    assert data["lambda"] == "3,1"


def test_console_script_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "capvertex", "verify", "--check", "fail", "--l", "1"], capture_output=True
    )
    assert proc.returncode == 1
