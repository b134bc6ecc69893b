import json

import pytest

from coverforge import cli
from coverforge.fanlat import FIXTURES


def fan(name):
    return str(FIXTURES / f"{name}.json")


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def run_json(capsys, *argv):
    status, out, err = run(capsys, *argv, "--format", "json")
    return status, json.loads(out) if out.strip() else None, err


def test_clgroup_p2(capsys):
    status, doc, _ = run_json(capsys, "clgroup", "--fan", fan("p2"))
    assert status == 0
    assert doc["class_group"] == {"invariant_factors": [], "free_rank": 1, "order": None}
    assert doc["torsion"]["torsion_free"]


def test_clgroup_square_text(capsys):
    status, out, _ = run(capsys, "clgroup", "--fan", fan("square_torsion"))
    assert status == 0
    assert "class_group: Z^2 + Z_2" in out
    assert "torsion_cover.galois_group: Z_2" in out


def test_exists_success_and_failure(capsys):
    status, doc, _ = run_json(capsys, "exists", "--fan", fan("p2"), "--orders", "2,2,2")
    assert status == 0 and doc["exists"] and doc["g_max"]["invariant_factors"] == [2, 2]
    status, doc, _ = run_json(capsys, "exists", "--fan", fan("p2"), "--orders", "2,3,5")
    assert status == 2 and doc["exists"] is False
    assert "Z_5 -> G_max not injective at divisor 2" in doc["reason"]


def test_trivial_group_is_empty_list(capsys):
    _, doc, _ = run_json(capsys, "exists", "--fan", fan("p2"), "--orders", "1,1,1")
    assert doc["g_max"]["invariant_factors"] == [] and doc["g_max"]["order"] == 1


def test_bad_inputs_exit_1(capsys, tmp_path):
    assert run(capsys, "exists", "--fan", fan("p2"), "--orders", "2,2")[0] == 1
    assert run(capsys, "exists", "--fan", fan("p2"), "--orders", "2,x,2")[0] == 1
    assert run(capsys, "exists", "--fan", fan("p2"), "--orders", "2,0,2")[0] == 1
    assert run(capsys, "exists", "--fan", str(tmp_path / "missing.json"), "--orders", "2")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rank": 2, "rays": [[1, 0], [0, 1], [-1, 0]], "cones": [[0, 1], [1, 2]]}))
    status, _, err = run(capsys, "clgroup", "--fan", str(bad))
    assert status == 1 and "not complete" in err
    assert run(capsys, "exists", "--fan", fan("p2"))[0] == 1


def test_maxcover_then_verify_round_trip(capsys, tmp_path):
    status, doc, _ = run_json(capsys, "maxcover", "--fan", fan("p2"), "--orders", "2,2,2")
    assert status == 0
    assert doc["sublattice"]["index"] == 4
    assert doc["galois_group"]["invariant_factors"] == [2, 2]
    assert doc["building_data"]["fundamental_relations_ok"]
    saved = tmp_path / "cover.json"
    saved.write_text(json.dumps(doc))
    status, ver, _ = run_json(capsys, "verify", "--fan", fan("p2"), "--sublattice", str(saved), "--orders", "2,2,2")
    assert status == 0 and ver["orders_match"]
    assert ver["building_data"]["pairs_checked"] == 16


def test_verify_rejects_wrong_orders(capsys, tmp_path):
    saved = tmp_path / "sub.json"
    saved.write_text(json.dumps({"basis": [[2, 0], [0, 2]]}))
    assert run(capsys, "verify", "--fan", fan("p2"), "--sublattice", str(saved), "--orders", "3,3,3")[0] == 1


def test_maxcover_nonexistence(capsys):
    status, doc, _ = run_json(capsys, "maxcover", "--fan", fan("p2"), "--orders", "2,3,5")
    assert status == 2 and 2 in doc["divisors"]


def test_covers_count(capsys):
    status, doc, _ = run_json(capsys, "covers", "--fan", fan("p2"), "--orders", "2,3,6")
    assert status == 0 and doc["count"] == 4


def test_crosscheck_and_torsion_cover(capsys):
    status, doc, _ = run_json(capsys, "crosscheck", "--fan", fan("p1xp1"), "--orders", "2,2,2,2")
    assert status == 0 and doc["ok"]
    status, doc, _ = run_json(capsys, "torsion-cover", "--fan", fan("square_torsion"))
    assert status == 0
    assert doc["covering_class_group"]["invariant_factors"] == []


def test_abstract_mode(capsys, tmp_path):
    cl_file = tmp_path / "cl.json"
    cl_file.write_text(json.dumps({"cl": {"invariant_factors": [], "free_rank": 1},
                                "divisor_classes": [[1], [1], [1]]}))
    status, doc, _ = run_json(capsys, "maxcover", "--abstract", str(cl_file), "--orders", "2,2,2")
    assert status == 0 and doc["abelian"]["galois_group"]["invariant_factors"] == [2, 2]
    assert run(capsys, "exists", "--abstract", str(cl_file), "--orders", "2,3,5")[0] == 2
    assert run(capsys, "torsion-cover", "--abstract", str(cl_file))[0] == 1


def test_orders_from_file(capsys, tmp_path):
    f = tmp_path / "orders.json"
    f.write_text(json.dumps({"orders": [2, 2, 2]}))
    assert run(capsys, "exists", "--fan", fan("p2"), "--orders", str(f))[0] == 0


def test_bound_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("COVERFORGE_BOUND", "3")
    status, _, err = run(capsys, "covers", "--fan", fan("p2"), "--orders", "2,2,2")
    assert status == 1 and "capacity" in err
    monkeypatch.delenv("COVERFORGE_BOUND")
    assert run(capsys, "covers", "--fan", fan("p2"), "--orders", "2,2,2")[0] == 0


def test_output_deterministic(capsys):
    a = run(capsys, "covers", "--fan", fan("p1xp1"), "--orders", "2,2,2,2", "--format", "json")[1]
    b = run(capsys, "covers", "--fan", fan("p1xp1"), "--orders", "2,2,2,2", "--format", "json")[1]
    assert a == b


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
