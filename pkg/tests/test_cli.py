import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from knowhow.cli import main

CURE = str(FIXTURES / "cure.model")
NEG = str(FIXTURES / "neg_introspection.proof")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_check(capsys):
    assert run(capsys, "check", CURE, "s1", "Kh ~p")[:2] == (0, "true")
    assert run(capsys, "check", CURE, "s1", "Kh ~q")[:2] == (1, "false")


def test_check_witness(capsys):
    code, out, _ = run(capsys, "--format=json", "check", CURE, "s1", "Kh ~p", "--witness")
    assert code == 0
    assert json.loads(out) == {"verdict": True,
                               "witness": {"s1": "test", "s3": "pills", "s4": "surgery"}}


def test_synth(capsys):
    code, out, _ = run(capsys, "synth", CURE, "s1", "~p", "--format=json")
    assert (code, out) == (0, '{"s1":"test","s3":"pills","s4":"surgery"}')
    assert run(capsys, "synth", CURE, "s1", "~q")[:2] == (1, "none")


def test_classes(capsys):
    code, out, _ = run(capsys, "classes", CURE, "--format", "json")
    data = json.loads(out)["classes"]
    assert code == 0
    assert data[0] == {"class": "s1", "members": ["s1", "s2"], "uniform": ["test"],
                       "successors": {"test": ["s3", "s4"]}}
    code, out, _ = run(capsys, "classes", CURE, "--dot")
    assert out.startswith("digraph")


def test_parse(capsys):
    assert run(capsys, "parse", "Kh ~p")[:2] == (0, "Kh (~p)")
    code, out, _ = run(capsys, "parse", "p -> q", "--format=json")
    assert json.loads(out) == {"formula": "~(p & ~q)", "sugared": "(p -> q)", "size": 5}


def test_sat_and_valid(capsys):
    code, out, _ = run(capsys, "--format=json", "sat", "~(Kh p & Kh q -> Kh (p & q))")
    assert code == 0 and json.loads(out)["verdict"] == "sat"
    assert run(capsys, "sat", "p & ~p")[0] == 1
    assert run(capsys, "valid", "~Kh p -> K ~Kh p")[0] == 0
    code, out, _ = run(capsys, "valid", "Kh p -> K p", "--format=json")
    assert code == 1 and json.loads(out)["verdict"] == "invalid"


def test_prove(capsys, tmp_path):
    assert run(capsys, "prove", NEG)[:2] == (0, "ok")
    bad = tmp_path / "bad.proof"
    bad.write_text('{"steps": [{"formula": "Kh p -> K p", "rule": "AxKtoKh"}]}')
    code, out, _ = run(capsys, "prove", str(bad), "--format=json")
    assert code == 1
    assert json.loads(out) == {"ok": False, "step": 0, "reason": "not-an-instance"}


def test_fuzz(capsys):
    assert run(capsys, "fuzz", "K p -> Kh p", "--trials", "200", "--seed", "3")[:2] == \
        (0, "survived 200 trials")
    code, out, _ = run(capsys, "fuzz", "Kh p -> K p", "--trials", "1000", "--format=json")
    assert code == 1 and json.loads(out)["survived"] is False
    a = run(capsys, "fuzz", "Kh p -> p", "--seed", "42", "--format=json")
    b = run(capsys, "fuzz", "Kh p -> p", "--seed", "42", "--format=json")
    assert a == b


def test_caps(capsys):
    code, _, err = run(capsys, "--cap", "atoms=2", "sat", "K p & K q")
    assert code == 3 and "cap" in err
    code, out, _ = run(capsys, "--cap", "max-states=1", "fuzz", "Kh p -> p", "--trials", "300")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["check", CURE, "s9", "p"],
    ["check", CURE, "s1", "p &"],
    ["check", "/nonexistent.model", "s1", "p"],
    ["prove", CURE],
    ["parse", "K"],
])
def test_input_errors_exit_3(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 3 and err.startswith("knowhow:")


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["check", CURE], ["--cap", "nope", "parse", "p"],
                                  ["fuzz", "p", "--trials", "0"], ["--format=xml", "parse", "p"]])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "knowhow", "check", CURE, "s1", "Kh (p <-> q)"],
                         capture_output=True, text=True)
    assert (res.returncode, res.stdout.strip()) == (0, "true")
