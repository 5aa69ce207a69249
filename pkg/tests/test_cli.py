import json
import subprocess
import sys

import pytest

from ordercomplex.cli import EXIT_FAIL, EXIT_PASS, EXIT_REJECTED, main, render_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_group_order(capsys):
    code, out, _ = run(capsys, "group", "--family", "pgl2", "--p", "3", "--k", "2")
    doc = json.loads(out)
    assert code == EXIT_PASS and doc["group"]["order"] == 720
    labels = {c["label"]: c for c in doc["group"]["classes"]}
    assert labels["2B"]["centralizer_order"] == 20 and not labels["2B"]["in_socle"]
    code, out, _ = run(capsys, "group", "--family", "cyclic", "--n", "9")
    assert json.loads(out)["group"]["order"] == 9


@pytest.mark.parametrize("argv", [
    ["group", "--family", "pgl2", "--p", "4", "--k", "1"],
    ["group", "--family", "pgl2"],
    ["group", "--family", "nonsense"],
    ["group", "--family", "cyclic", "--n", "5", "--element-cap", "0"],
    ["verify", "paper", "--p", "2", "--n", "1"],
    ["verify", "paper", "--p", "3"],
    ["topology", "mobius", "--in", "/nonexistent/lattice.json"],
])
def test_rejections(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_REJECTED


def test_size_limit_is_failure(capsys):
    code, _, err = run(capsys, "group", "--family", "pgl2", "--p", "3", "--k", "4")
    assert code == EXIT_FAIL and "SizeLimit" in err


def test_lattice_file_handoff(tmp_path, capsys):
    lat, dot = tmp_path / "a5.json", tmp_path / "a5.dot"
    code, _, _ = run(capsys, "lattice", "--family", "psl2", "--p", "2", "--k", "2",
                     "--out", str(lat), "--dot", str(dot))
    assert code == EXIT_PASS
    doc = json.loads(lat.read_text())
    assert doc["summary"]["nodes"] == 59 and dot.read_text().startswith("digraph")

    code, out, _ = run(capsys, "topology", "mobius", "--in", str(lat))
    m = json.loads(out)["mobius"]
    assert code == EXIT_PASS and m["mu_1_G"] == -60 and m["rota"]["chi"] == -59

    code, out, _ = run(capsys, "topology", "homology", "--in", str(lat))
    assert json.loads(out)["homology"]["betti"]["1"] == 60

    code, out, _ = run(capsys, "topology", "reduce", "--in", str(lat))
    red = json.loads(out)["reduce"]
    assert red["quillen"]["after"] == 46 and red["hall"]["passed"]


def test_lattice_dot_format(capsys):
    code, out, _ = run(capsys, "lattice", "--family", "cyclic", "--n", "9", "--format", "dot")
    assert code == EXIT_PASS and out.count("->") == 2


def test_topology_examples(capsys):
    code, out, _ = run(capsys, "topology", "homology", "--family", "elem_abelian", "--p", "3")
    assert json.loads(out)["homology"]["betti"]["0"] == 3
    code, out, _ = run(capsys, "topology", "collapse", "--family", "q8", "--certificates")
    col = json.loads(out)["collapse"]
    assert col["terminal"] == [1] and col["point"] and "certificate" in col


def test_verify_paper_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "paper", "--p", "3", "--n", "1", "--out", str(a)]) == EXIT_PASS
    assert main(["verify", "paper", "--p", "3", "--n", "1", "--out", str(b), "--threads", "4"]) == EXIT_PASS
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["verdict"] == "contractible" and doc["config"]["p"] == 3 and doc["version"]


def test_verify_paper_symbolic(capsys):
    code, out, _ = run(capsys, "verify", "paper", "--p", "3", "--n", "2")
    assert code == EXIT_FAIL and json.loads(out)["verdict"] == "size_limit"


def test_text_format(capsys):
    code, out, _ = run(capsys, "group", "--family", "q8", "--format", "text")
    assert code == EXIT_PASS and "order: 8" in out
    assert render_text({"a": [1, {"b": 2}]}) == "a:\n  - 1\n  -\n    b: 2"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ordercomplex", "group", "--family", "s4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["group"]["order"] == 24
