import json
import subprocess
import sys

import pytest

from rigidweb.cli import main

from conftest import FIXTURES

HOMO = FIXTURES / "homothety"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "X1 + X2", HOMO / "system.json", "--format", "json")
    assert code == 0 and json.loads(out)["dim"] == 2


def test_genpos_positive_and_negative(capsys):
    assert run(capsys, "genpos", HOMO / "system.json")[0] == 0
    code, out, _ = run(capsys, "genpos", FIXTURES / "three-lines-counterexample.json")
    assert code == 1 and "NOT in general position" in out


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", HOMO / "cert.json", HOMO / "system.json")
    assert code == 0 and out.startswith("HOLDS")
    code, out, _ = run(capsys, "verify", FIXTURES / "cert-lines-n3.json", "--trials", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["holds"] and data["trials"] == 10


def test_verify_negative(capsys, tmp_path):
    cert = json.loads((HOMO / "cert.json").read_text())
    cert["P"] = ["X1", "X2"]
    cert["Q"] = ["X3"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cert))
    code, out, _ = run(capsys, "verify", path, "--trials", "3")
    assert code == 1 and "cond1" in out


def test_build_and_search(capsys):
    code, out, _ = run(capsys, "build", "--n", "3", "--dims", "2,2,2,2", "--family", "hyperplanes", "--format", "json")
    assert code == 0 and json.loads(out)["P"] == ["X2 & X3", "X1 & X3", "X1 & X2"]
    code, out, _ = run(capsys, "build", "--n", "2", "--dims", "1,1,1,1,1,1", "--trials", "10")
    assert code == 0 and "P1" in out
    assert run(capsys, "search", "--n", "2", "--dims", "1,1")[0] == 1
    code, out, _ = run(capsys, "search", "--n", "2", "--dims", "1,1,1", "--format", "json")
    assert code == 0 and json.loads(out)["found"]


def test_reconstruct_homothety(capsys):
    code, out, _ = run(capsys, "reconstruct", HOMO / "cert.json", HOMO / "system.json",
                       "--block", HOMO / "block.json", "--format", "json")
    assert code == 0 and json.loads(out)["matrix"] == [["2", "0"], ["0", "2"]]


def test_web(capsys):
    pres = FIXTURES / "presentation-z1-z2-z1z2.json"
    code, out, _ = run(capsys, "web", pres, "--point", "1,1")
    assert code == 0 and "rigid: True" in out
    code, _, err = run(capsys, "web", pres, "--point", "0,0")
    assert code == 3 and "map 3" in err


@pytest.mark.parametrize(
    "argv, code",
    [
        (["genpos", "/nonexistent.json"], 2),
        (["eval", "X1 +", str(HOMO / "system.json")], 2),
        (["eval", "X7", str(HOMO / "system.json")], 3),
        (["build", "--n", "2", "--dims", "1,1,1"], 3),
        (["build", "--n", "2", "--dims", "1,x"], 2),
        (["build", "--n", "3", "--dims", "1,1,1,1", "--family", "hyperplanes"], 3),
        (["search", "--n", "2", "--dims", "1,1,1,1,1,1"], 4),
        (["verify", str(HOMO / "cert.json"), "--trials", "0"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code
    capsys.readouterr()


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "genpos", path)
    assert code == 2 and "invalid JSON" in err


def test_bad_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["genpos", "--method", "magic", "x"])
    assert exc.value.code == 2


def test_module_entry_is_byte_identical():
    argv = [sys.executable, "-m", "rigidweb", "verify", str(FIXTURES / "cert-hyperplanes-n3.json"),
            "--trials", "15", "--seed", "3", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=True)
    second = subprocess.run(argv, capture_output=True, check=True)
    assert first.stdout == second.stdout and first.stdout
