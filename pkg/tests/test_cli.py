import json
import subprocess
import sys
from pathlib import Path

import pytest

from primtower.algebras import heisenberg, restricted_catalog, sl2
from primtower.cli import run
from primtower.io import (
    InputError,
    b1_from_dict,
    b1_to_dict,
    dump,
    lie_from_dict,
    lie_to_dict,
)
from primtower.lie import b1_from_lie
from primtower.report import Report, emit

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run_json(*argv):
    code, text = run(["--format", "json", *argv])
    return code, json.loads(text) if code != 2 else text


@pytest.mark.parametrize(
    "k,char,D,dims",
    [(2, 0, 4, [2, 1, 2, 3]), (1, 2, 4, [1, 1, 0, 1]), (1, 0, 3, [1, 0, 0])],
)
def test_primitives_dims(k, char, D, dims):
    code, rep = run_json("primitives", "--generators", str(k), "--char", str(char), "--degree", str(D))
    assert code == 0 and rep["data"]["dims"] == dims
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_primitives_text_lists_basis_grammar():
    code, rep = run_json("primitives", "-k", "2", "-D", "2")
    assert rep["data"]["bases"]["2"] == ["1*x.y + -1*y.x"]


def test_verify_tower_sl2():
    code, rep = run_json("verify-tower", "--lie", str(DATA / "sl2.json"), "--degree", "4")
    assert code == 0
    assert {c["status"] for c in rep["checks"]} == {"pass"}
    assert all(c["window"].startswith("degrees <= ") for c in rep["checks"])


def test_verify_tower_f2_abelian(tmp_path):
    path = tmp_path / "ab.json"
    dump(lie_to_dict(restricted_catalog(2)["F2_plane_trivial"]), path)
    code, rep = run_json("verify-tower", "--lie", str(path), "--degree", "3")
    assert code == 0


def test_verify_tower_jacobi_violation(tmp_path):
    bad = {"char": 0, "dim": 3, "names": ["x", "y", "z"], "brackets": [[0, 1, [[2, "1"]]], [1, 2, [[1, "1"]]]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, rep = run_json("verify-tower", "--lie", str(path), "--degree", "3")
    status = {c["name"]: c for c in rep["checks"]}
    assert code == 1
    assert status["check_lie_axioms"]["status"] == "fail" and status["check_lie_axioms"]["witness"]
    for name in ("build_enveloping", "compare_L1_with_enveloping", "primitives_of_enveloping"):
        assert status[name]["status"] == "skipped"


def test_verify_tower_b1_file_and_corruption(tmp_path):
    path = tmp_path / "b1.json"
    dump(b1_to_dict(b1_from_lie(heisenberg(), 4)), path)
    assert run_json("verify-tower", "--b1", str(path))[0] == 0
    code, rep = run_json("verify-tower", "--b1", str(path), "--corrupt-mu0", "--seed", "5")
    assert code == 1
    failed = [c for c in rep["checks"] if c["status"] == "fail"]
    assert failed[0]["name"] == "check_b1_axioms" and failed[0]["witness"]
    assert "corrupt_mu0" in rep["config"]


def test_usage_errors(tmp_path):
    assert run(["verify-tower", "--lie", str(tmp_path / "missing.json")])[0] == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert run(["verify-tower", "--lie", str(tmp_path / "junk.json")])[0] == 2
    assert run(["verify-tower", "--lie", str(DATA / "sl2.json"), "--degree", "1"])[0] == 2
    assert run(["verify-tower", "--lie", str(DATA / "sl2.json"), "--slack", "0"])[0] == 2
    assert run(["verify-tower", "--lie", str(DATA / "affine_line.json"), "--corrupt-bracket"])[0] == 2
    assert run(["primitives", "-k", "2", "--char", "4", "-D", "3"])[0] == 2
    with pytest.raises(SystemExit) as info:
        run(["primitives"])
    assert info.value.code == 2


def test_format_after_subcommand():
    code, text = run(["primitives", "-k", "1", "-D", "2", "--format", "json"])
    assert json.loads(text)["command"] == "primitives"


def test_separability():
    code, rep = run_json("separability", "-k", "3", "-D", "4", "--trials", "20", "--seed", "1")
    assert code == 0
    names = {c["name"]: c["status"] for c in rep["checks"]}
    assert names == {"retraction": "pass", "naturality": "pass", "negative_control": "pass"}


def test_emit_shapes():
    empty = Report("primitives", {})
    assert emit(empty) == "primtower 0.1.0 primitives\n"
    from primtower.checks import Check

    rep = Report("x", {"a": 1})
    rep.add(Check("one", True, 2, "fine"))
    assert emit(rep).count("PASS") == 1
    rep.add(Check("two", False, 3, "", "1*x.y + -1*y.x"))
    assert "witness: 1*x.y + -1*y.x" in emit(rep)
    assert json.loads(emit(rep, "json"))["status"] == "fail"


def test_json_is_deterministic():
    args = ["--format", "json", "verify-tower", "--lie", str(DATA / "heisenberg.json"), "--degree", "3",
            "--corrupt-bracket", "--seed", "2"]
    assert run(args) == run(args)


def test_console_script_runs():
    out = subprocess.run(
        [sys.executable, "-m", "primtower.cli", "primitives", "-k", "1", "-D", "2"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and "P_2" in out.stdout


def test_lie_file_round_trip():
    for L in (sl2(), restricted_catalog(3)["F3_affine"]):
        assert lie_from_dict(lie_to_dict(L)) == L


def test_b1_file_round_trip_and_defaults():
    obj = b1_from_lie(sl2(), 3)
    back = b1_from_dict(b1_to_dict(obj))
    assert back.values() == obj.values()
    bare = b1_from_dict({"char": 0, "dim": 1, "names": ["x"], "cap": 2})
    assert bare.value(1, 0) == {}


@pytest.mark.parametrize(
    "doc",
    [
        {"dim": 1},
        {"char": 6, "dim": 1},
        {"char": 0, "dim": 2, "names": ["x"]},
        {"char": 0, "dim": 2, "brackets": [[1, 0, [[0, "1"]]]]},
        {"char": 0, "dim": 2, "brackets": [[0, 1, [[5, "1"]]]]},
        {"char": 0, "dim": 2, "brackets": [[0, 1, [[0, "x"]]]]},
        {"char": 0, "dim": 1, "p_operation": []},
    ],
)
def test_bad_lie_documents(doc):
    with pytest.raises(InputError):
        lie_from_dict(doc)


def test_bad_b1_documents():
    with pytest.raises(InputError):
        b1_from_dict({"char": 0, "dim": 1, "cap": 2, "mu0": [{"weight": 9, "basis_index": 0, "value": ["1"]}]})
    with pytest.raises(InputError):
        b1_from_dict({"char": 0, "dim": 1, "cap": 2, "mu0": [{"weight": 1, "basis_index": 0, "value": ["1", "2"]}]})
    with pytest.raises(InputError):
        b1_from_dict({"char": 0, "dim": 1})
