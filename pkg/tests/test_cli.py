import subprocess
import sys

import pytest

from cvxgeo import write_family, write_points
from cvxgeo.cli import main


@pytest.fixture
def files(tmp_path, extension_pair, sharp_family, triangle_centroid):
    G, H = extension_pair
    paths = {}
    for name, fam in (("G", G), ("H", H), ("sharp", sharp_family)):
        paths[name] = tmp_path / f"{name}.fam"
        write_family(fam, paths[name])
    paths["tri"] = tmp_path / "tri.pts"
    write_points(triangle_centroid, paths["tri"])
    return {k: str(v) for k, v in paths.items()}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_realize(capsys, files):
    code, out, _ = run(capsys, "realize", files["tri"])
    assert code == 0
    assert out.splitlines()[0] == "ground a b c m"
    assert sum(line.startswith("closed") for line in out.splitlines()) == 15
    code, out, _ = run(capsys, "realize", "--check", files["tri"])
    assert code == 0 and out.startswith("convex geometry: holds")


def test_realize_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.pts"
    bad.write_text("dim 2\np a 0 0\np b 1/0 0\n")
    code, _, err = run(capsys, "realize", str(bad))
    assert code == 2 and "line 3" in err
    code, _, err = run(capsys, "realize", str(tmp_path / "missing.pts"))
    assert code == 2 and err.startswith("cvxgeo: error:")


def test_rule(capsys, files):
    code, out, _ = run(capsys, "rule", files["H"], "--rule", "caratheodory", "-n", "2")
    assert code == 1 and out.splitlines()[0] == "caratheodory(2): fails at x=x, S={a,b,c,d}"
    assert out.splitlines()[1].startswith("tuples examined: ")
    code, _, _ = run(capsys, "rule", files["H"], "--rule", "caratheodory", "-n", "3")
    assert code == 0
    code, _, _ = run(capsys, "rule", files["sharp"], "--rule", "carousel", "-n", "2")
    assert code == 0
    code, out, _ = run(capsys, "rule", files["sharp"], "--rule", "sharp2")
    assert code == 1 and "X={x}, Y={y}, A={a}, B={b}, C={c}" in out
    code, _, _ = run(capsys, "rule", files["sharp"], "--rule", "sharp-elem")
    assert code == 1
    code, _, _ = run(capsys, "rule", files["tri"], "--rule", "caratheodory", "-n", "2")
    assert code == 0


def test_rule_usage_errors(capsys, files):
    with pytest.raises(SystemExit) as exc:
        main(["rule", files["H"], "--rule", "carousel"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["rule", files["H"], "--rule", "bogus", "-n", "1"])
    assert exc.value.code == 2


def test_embed(capsys, files, tmp_path):
    code, out, _ = run(capsys, "embed", files["G"], files["H"])
    assert code == 0 and "{a,b} -> {a,b}" in out.splitlines()
    code, out, _ = run(capsys, "embed", "--count-all", files["G"], files["H"])
    assert code == 0 and out.strip() == "embeddings: 24"
    one = tmp_path / "one.fam"
    one.write_text("ground a\nclosed\nclosed a\n")
    chain = tmp_path / "chain.fam"
    chain.write_text("ground a b\nclosed\nclosed a\nclosed a b\n")
    code, out, _ = run(capsys, "embed", str(chain), str(one))
    assert code == 1 and out.strip() == "none"


def test_export_dot(capsys, files):
    code, out, _ = run(capsys, "export-dot", files["H"])
    assert code == 0
    assert out.startswith("digraph lattice {")
    assert sum("[label=" in line for line in out.splitlines()) == 31


def test_paper(capsys):
    code, out, _ = run(capsys, "paper", "--item", "sharp", "--item", "extension")
    assert code == 0 and out.splitlines()[-1] == "21/21 claims as expected"
    with pytest.raises(SystemExit) as exc:
        main(["paper", "--item", "nope"])
    assert exc.value.code == 2


def test_search(capsys, monkeypatch):
    monkeypatch.setenv("CVXGEO_THREADS", "1")
    code, out, _ = run(capsys, "search", "--max-ground", "3", "--budget", "3")
    assert code == 0 and "candidates: 0" in out
    code, _, err = run(capsys, "search", "--max-ground", "8")
    assert code == 2 and err.startswith("cvxgeo: cap exceeded:")
    monkeypatch.setenv("CVXGEO_THREADS", "nope")
    code, _, err = run(capsys, "search", "--max-ground", "2")
    assert code == 2 and "CVXGEO_THREADS" in err


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "cvxgeo.cli", "export-dot", files["G"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("digraph")
