import json
import subprocess
import sys

import pytest

from species_crystal import presets
from species_crystal.cli import main
from species_crystal.reps import Representation


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_cartan(capsys):
    code, out, _ = run(capsys, "cartan", "c2")
    assert code == 0
    assert json.loads(out) == {"C": [[2, -2], [-1, 2]], "d": [1, 2]}


def test_kostant(capsys):
    code, out, _ = run(capsys, "kostant", "c2", "--weight", "3,2")
    assert code == 0 and out.strip() == "5"


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "c2")
    assert code == 0 and json.loads(out)["valid"] is True


def test_validate_json_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(presets.a2_lusztig()))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 0 and json.loads(out)["vertices"] == ["1", "2"]


def test_validate_degenerate_file(capsys, tmp_path):
    data = presets.c2()
    data["edges"][0]["form_into_u"] = [[0, 0], [0, 0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "validate", str(path))
    assert code == 1 and "degenerate form" in err


def test_algebra_dims(capsys):
    code, out, _ = run(capsys, "algebra-dims", "c2")
    data = json.loads(out)
    assert code == 0 and data["dims"] == [3, 4, 3, 0] and data["total"] == 10


def test_roots(capsys):
    _, out, _ = run(capsys, "roots", "c2")
    data = json.loads(out)
    assert data["type"] == "B2/C2" and len(data["positive_roots"]) == 4
    _, out, _ = run(capsys, "roots", "sl2hat-z")
    assert json.loads(out)["finite"] is False


def test_ext(capsys, tmp_path):
    g = presets.load("sl2hat-z")
    V = Representation(g, (1, 1), {(0, 1): [[1, 1]]})
    path = tmp_path / "v.json"
    path.write_text(json.dumps(V.to_json()))
    code, out, _ = run(capsys, "ext", "sl2hat-z", "--module-a", str(path), "--module-b", str(path))
    data = json.loads(out)
    assert code == 0 and data["dim_ext1"] == 1 and data["dim_hom"] == 1
    code, out, _ = run(capsys, "ext", "sl2hat-z", "--z", "-1", "--module-a", str(path), "--module-b", str(path))
    assert json.loads(out)["dim_ext1"] == 2


def test_crystal_json_and_dot(capsys):
    code, out, _ = run(capsys, "crystal", "c2", "--depth", "2", "--seed", "7")
    data = json.loads(out)
    assert code == 0 and len(data["nodes"]) == 7 and data["seed"] == 7
    code, out, _ = run(capsys, "--seed", "7", "crystal", "c2", "--depth", "2", "--format", "dot")
    assert code == 0 and out.startswith("digraph")


def test_seed_position(capsys):
    _, before, _ = run(capsys, "--seed", "5", "crystal", "c2", "--depth", "1")
    _, after, _ = run(capsys, "crystal", "c2", "--depth", "1", "--seed", "5")
    assert before == after and json.loads(before)["seed"] == 5


def test_check_axioms(capsys):
    code, out, _ = run(capsys, "check-axioms", "a2-lusztig", "--depth", "4")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["checked_depth"] == 2


def test_domain_errors(capsys):
    assert run(capsys, "kostant", "sl2hat-z", "--weight", "1,1")[0] == 1
    assert run(capsys, "crystal", "sl2hat-z", "--depth", "2")[0] == 1
    code, _, err = run(capsys, "validate", "nope")
    assert code == 1 and "unknown preset" in err
    code, _, err = run(capsys, "validate", "c2", "--z", "3")
    assert code == 1 and "no parameter z" in err
    assert run(capsys, "ext", "c2", "--module-a", "/nonexistent", "--module-b", "/nonexistent")[0] == 1


@pytest.mark.parametrize("args", [[], ["kostant", "c2"], ["kostant", "c2", "--weight", "x"], ["frobnicate"]])
def test_usage_errors(capsys, args):
    with pytest.raises(SystemExit) as exc:
        main(args)
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "species_crystal", "kostant", "c2", "--weight", "1,1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "2"
    proc = subprocess.run([sys.executable, "-m", "species_crystal", "cartan"], capture_output=True, text=True)
    assert proc.returncode == 2
