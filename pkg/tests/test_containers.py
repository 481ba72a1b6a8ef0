import pytest

import cavitycorr.containers as ccr
from cavitycorr.exceptions import DataNotFound, InvalidResult
from cavitycorr.util import read_json, write_json


def test_default_result():
    r = ccr.Result()
    assert r.name == "Empty"
    assert r.depth == 1
    assert len(r.children) == 0


def test_add_get_data():
    r = ccr.Result(name='subadditivity')
    r.add_data("passed", True)
    assert r.get_data("passed")
    r.add_data("passed", False)
    assert not r.get_data("passed")
    assert r.get_data("passed", step_back=1)
    assert r.get_data("passed", step_back=4)
    assert r.has_data("passed")
    assert not r.has_data("tolerance")

    with pytest.raises(DataNotFound):
        r.get_data("tolerance")


def build_frame():
    r1 = ccr.Result(name='verification')
    r1.add_data("passed", True)
    r2 = ccr.Result(name='trajectories')
    r2.add_data("passed", True)
    r2.add_data("max_violation", 1.5e-13)
    r3 = ccr.Result(name='random-states')
    r3.add_data("seed", 42)
    r4 = ccr.Result(name='integrator-fidelity')
    r4.add_data("max_violation", 3.0e-11)
    r4.add_data("passed", False)
    r1.add_child(r2)
    r1.add_child(r3)
    r2.add_child(r4)
    return r1, r2, r3, r4


def test_add_get_child():
    r1, r2, r3, r4 = build_frame()

    assert r1.depth == 1
    assert r2.depth == 2
    assert r3.depth == 2
    assert r4.depth == 3
    assert len(r1.children) == 2
    assert len(r2.children) == 1
    assert len(r3.children) == 0

    assert r1.get_child("trajectories").depth == 2
    assert r2.get_child("integrator-fidelity").depth == 3

    with pytest.raises(DataNotFound):
        r1.get_child("integrator-fidelity")

    with pytest.raises(InvalidResult):
        r3.add_child({"name": "not a result"})


def test_search_result():
    r1, r2, r3, r4 = build_frame()

    results = r1.search("passed")
    assert len(results) == 3
    assert results['verification']
    assert not results['integrator-fidelity']

    assert len(r3.search("passed")) == 0

    results = r2.search("max_violation")
    assert len(results) == 2
    assert 3.0e-11 in results.values()

    assert 42 in r1.search("seed").values()
    assert 42 not in r2.search("seed").values()


def test_result_string():
    r1, _, _, _ = build_frame()
    text = str(r1)
    assert text.startswith("verification\n")
    assert "::::integrator-fidelity" in text


def test_save_load_result(tmp_path):
    r1, _, _, _ = build_frame()
    filename = str(tmp_path / "report.json")
    write_json(filename, r1)
    r = read_json(filename)
    assert r.name == 'verification'
    assert len(r.children) == 2
    child = r.get_child("trajectories")
    assert child.depth == 2
    grandchild = child.get_child("integrator-fidelity")
    assert grandchild.depth == 3
    assert grandchild.get_data("max_violation") == 3.0e-11
    assert not grandchild.get_data("passed")
