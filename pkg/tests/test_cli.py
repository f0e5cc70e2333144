import json
import subprocess
import sys

import pytest

from petrilive.cli import main

from conftest import FIXTURES

RUNNING = str(FIXTURES / "running.net")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_live_yes(capsys):
    code, out, _ = run(capsys, "live", "--net", RUNNING, "--marking", "p1=3,p2=1")
    assert code == 0 and json.loads(out)["answer"] == "yes"


def test_live_no_with_path(capsys):
    code, out, _ = run(capsys, "live", "--net", RUNNING, "--marking", "p1=4,p2=1")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] == "no"
    assert doc["certificate"]["sequence"] == ["t1", "t1"]


def test_file_marking_is_default(capsys):
    code, out, _ = run(capsys, "live", "--net", RUNNING, "--transitions", "t1")
    assert code == 0 and json.loads(out)["answer"] == "yes"


def test_deadset(capsys):
    code, out, _ = run(capsys, "deadset", "--net", RUNNING)
    doc = json.loads(out)
    assert code == 0
    assert sorted(doc["dead_set"], key=str) == sorted([[0, "w", 0], ["w", 0, 0]], key=str)


def test_structural_starved(capsys):
    code, out, _ = run(capsys, "structural", "--net", RUNNING, "--budget", "1")
    assert code == 2 and json.loads(out)["answer"] == "unknown"


def test_structural_yes_and_reduction_file(capsys, tmp_path):
    target = tmp_path / "red.net"
    code, out, _ = run(capsys, "structural", "--net", RUNNING, "--emit-reduction", str(target))
    assert code == 0 and json.loads(out)["answer"] == "yes"
    code, out, _ = run(capsys, "parse", "--net", str(target))
    doc = json.loads(out)
    assert code == 0 and len(doc["places"]) == 7 and len(doc["transitions"]) == 9


def test_fire(capsys):
    code, out, _ = run(capsys, "fire", "--net", RUNNING, "--marking", "p1=4,p2=1",
                       "--sequence", "t1,t1")
    assert code == 0 and json.loads(out)["marking"] == [0, 1, 0]


def test_fire_disabled_is_input_error(capsys):
    code, out, err = run(capsys, "fire", "--net", RUNNING, "--marking", "p1=1",
                         "--sequence", "t1")
    diag = json.loads(err)
    assert code == 1 and out == ""
    assert diag["error"] == "FiringError" and diag["transition"] == "t1"


def test_reach(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "reach", "--net", RUNNING, "--budget", "50", "--emit-dot", str(dot))
    assert code == 2 and json.loads(out)["truncated"]
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "reach", "--net", RUNNING, "--accelerate")
    assert code == 0 and json.loads(out)["status"] == "closed-exact"


def test_weaklive_and_scan(capsys):
    code, out, _ = run(capsys, "weaklive", "--net", RUNNING, "--marking", "p1=4,p2=1")
    assert code == 0 and json.loads(out)["answer"] == "no"
    code, out, _ = run(capsys, "live", "--net", RUNNING, "--box", "2")
    doc = json.loads(out)
    assert code == 0 and len(doc["verdicts"]) == 27 and doc["unknown"] == 0


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--net", RUNNING)
    doc = json.loads(out)
    assert code == 0 and doc["initial"] == [0, 0, 0, 1, 0, 0, 0]


def test_decide_formula(capsys):
    code, out, _ = run(capsys, "decide-formula",
                       "(forall x (exists y (or (= x (+ y y)) (= x (+ y y 1)))))")
    assert code == 0 and json.loads(out)["value"] is True


@pytest.mark.parametrize("argv", [
    ["live", "--net", "/nonexistent.net"],
    ["live", "--net", RUNNING, "--marking", "p9=1"],
    ["live", "--net", RUNNING, "--transitions", "t9"],
    ["decide-formula", "(<= x"],
])
def test_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert "message" in json.loads(err)


def test_malformed_net(capsys, tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("net x\nplaces p\ntransitions t\narc p q 1\n")
    code, _, err = run(capsys, "parse", "--net", str(bad))
    assert code == 1 and json.loads(err)["line"] == 4


def test_output_is_deterministic():
    argv = [sys.executable, "-m", "petrilive", "structural", "--net", RUNNING, "--budget", "700"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    assert first.returncode == second.returncode
    assert first.stdout == second.stdout and first.stdout
