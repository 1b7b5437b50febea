import json
import shutil
import subprocess
import sys

import pytest

from corpus import DATA
from singorder.cli import EXIT_INPUT, EXIT_OK, EXIT_TRUNCATED, main

F2 = str(DATA / "f2_dual.json")
F3 = str(DATA / "f3_cubic.json")
A2 = str(DATA / "a2_quiver.json")
M1 = '{"cyclic_quotient": [0, 1, 0]}'
M1_CUBED = json.dumps({"sum": [json.loads(M1)] * 3})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.mark.parametrize("path", [F2, F3, A2])
def test_algebra_validate(capsys, path):
    code, out = run_json(capsys, "algebra", "validate", path)
    assert code == EXIT_OK and out["valid"]


def test_algebra_build_roundtrip(capsys, tmp_path):
    code, out = run_json(capsys, "algebra", "build", F3)
    assert code == EXIT_OK
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(out))
    code, again = run_json(capsys, "algebra", "validate", str(path))
    assert code == EXIT_OK and again["radical_dim"] == 2


def test_module_check_and_bad_module(capsys):
    code, out = run_json(capsys, "module", "check", F3, M1)
    assert code == EXIT_OK and out["top_dim"] == 1
    bad = '{"d": 1, "action": [[[1]], [[1]], [[0]]]}'
    code, out = run_json(capsys, "module", "check", F3, bad)
    assert not out["valid"]


def test_hom_and_stable_hom(capsys):
    code, out = run_json(capsys, "hom", F2, "S", "S", "--stable")
    assert code == EXIT_OK and (out["full"], out["factoring"], out["stable"]) == (1, 0, 1)


def test_syzygy_iterate(capsys):
    code, out = run_json(capsys, "syzygy", F3, M1, "--iterate", "2")
    assert code == EXIT_OK and out["dims"] == [1, 2, 1]


def test_deg_search_and_verify(capsys, tmp_path):
    out_file = tmp_path / "v.json"
    code, out = run_json(capsys, "--seed", "0", "deg", "search", F3, "A", M1_CUBED,
                         "--json-out", str(out_file))
    assert code == EXIT_OK and out["status"] == "PROVED"
    assert json.loads(out_file.read_text()) == out
    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps(out["certificates"][0]))
    code, check = run_json(capsys, "deg", "verify", F3, str(cert))
    assert code == EXIT_OK and check["ok"]
    code, out = run_json(capsys, "deg", "search", F3, M1_CUBED, "A")
    assert out["status"] == "REFUTED" and out["witness"]["test"] == "S"


def test_st_and_qst(capsys):
    code, out = run_json(capsys, "st", "compare", F2, "A", "0")
    assert code == EXIT_OK and out["status"] == "PROVED"
    code, out = run_json(capsys, "qst", "compare", F2, '{"module": "S", "shift": 0}',
                         '{"module": "S", "shift": -2}', "--triangle")
    assert out["status"] == "PROVED" and out["triangle"]["consistent"]


def test_poset_commands(capsys):
    family = str(DATA / "f3_named.json")
    code, dot = run(capsys, "poset", "dot", F3, family, "--relation", "deg")
    assert code == EXIT_OK and dot.startswith("digraph deg") and dot.count("->") >= 2
    code, out = run_json(capsys, "poset", "check", A2, str(DATA / "a2_family.json"),
                         "--relation", "qst", "--kmax", "4", "--triangle")
    assert code == EXIT_OK and out["report"]["ok"] and out["triangle_consistent"]
    code, out = run_json(capsys, "poset", "build", F2, str(DATA / "f3_family.json"), "--relation", "deg")
    assert code == EXIT_OK and out["relation"] == "deg"


def test_truncated_family_exit_code(capsys, tmp_path):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"enumerate": {"dims": [3], "budget": 50}}))
    code, _ = run(capsys, "poset", "build", F3, str(fam), "--relation", "deg")
    assert code == EXIT_TRUNCATED


@pytest.mark.parametrize("argv", [
    ["algebra", "validate", "/nonexistent.json"],
    ["hom", F2, "S", "nosuchmodule"],
    ["deg", "verify", F2, '{"shape": "riedtmann"}'],
])
def test_input_errors_exit_2(capsys, argv, tmp_path):
    if argv[1] == "verify":
        bad = tmp_path / "bad.json"
        bad.write_text(argv[3])
        argv = [*argv[:3], str(bad)]
    assert main(argv) == EXIT_INPUT


def test_module_entry_point_and_console_script():
    out = subprocess.run([sys.executable, "-m", "singorder", "algebra", "validate", F2],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["valid"]
    exe = shutil.which("singorder")
    if exe:
        out = subprocess.run([exe, "hom", F2, "S", "A"], capture_output=True, text=True, check=True).stdout
        assert json.loads(out)["dim"] == 1
