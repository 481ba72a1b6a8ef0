import numpy as np
import pytest

from cavitycorr.containers import Result
from cavitycorr.exceptions import InvalidConfig, InvariantViolation
from cavitycorr.qstate import ExcitationSubspace, norm
from cavitycorr.testing import (
    Invariant,
    Population,
    available_invariants,
    build_invariants,
    raise_on_failure,
    random_state,
    run_suites,
)
from cavitycorr.util import read_json, write_json
from tests.data.utils import almost_equal


@pytest.fixture(scope="module")
def report():
    return run_suites(seed=3, trials=200)


def test_registry():
    names = available_invariants()
    assert names == sorted(names)
    for name in ('subadditivity', 'strong-subadditivity', 'integrator-fidelity'):
        assert name in names
    assert 'singlet-endpoint:closed-form' in names
    assert 'triplet-endpoint:rk4' in names
    for name in ('triplet-early-asymmetry', 'triplet-atom-one-field-lead', 'wstate-handoff-field-entropy'):
        assert name in names


def test_random_state():
    rng = np.random.default_rng(11)
    for n in (1, 2, 5):
        state = random_state(ExcitationSubspace(n), rng)
        assert almost_equal(norm(state), 1.0)


def test_population_reproducible():
    p1 = Population(seed=7, trials=5, samples=8)
    p2 = Population(seed=7, trials=5, samples=8)
    p3 = Population(seed=8, trials=5, samples=8)
    assert np.array_equal(p1.states_n1[0].amplitudes, p2.states_n1[0].amplitudes)
    assert not np.array_equal(p1.states_n1[0].amplitudes, p3.states_n1[0].amplitudes)
    assert len(p1.states_n2) == 5
    assert p1.entropy_table.shape == (len(p1.sampled_states), 6)
    assert len(p1.sampled_states) > len(p1.states_n1)


def test_run_suites(report):
    assert report.name == 'verification'
    assert report.get_data('passed')
    assert report.get_data('failed') == []
    assert report.get_data('seed') == 3
    names = [c.name for c in report.children]
    assert names == available_invariants()
    for child in report.children:
        assert child.get_data('max_violation') <= child.get_data('tolerance')
    raise_on_failure(report)


def test_report_json(report, tmp_path):
    filename = str(tmp_path / "verify.json")
    write_json(filename, report)
    loaded = read_json(filename)
    child = loaded.get_child('subadditivity')
    assert isinstance(child, Result)
    assert child.get_data('passed')


def test_negative_control():
    population = Population(seed=1, trials=10, samples=8)
    inv = Invariant('always-violated', lambda pop: 1.0, 0.5, "deliberately broken")
    assert not inv.calculate(population)
    assert not inv.get_data('passed')

    report = Result(name='verification')
    report.add_data('seed', 1)
    report.add_data('failed', [inv.name])
    report.add_child(inv)
    with pytest.raises(InvariantViolation) as excinfo:
        raise_on_failure(report)
    assert excinfo.value.seed == 1
    assert excinfo.value.invariant == 'always-violated'


def test_tolerance_overrides():
    invariants = build_invariants({'ratio-reciprocity': 1e-3})
    tols = {inv.name: inv.tolerance for inv in invariants}
    assert tols['ratio-reciprocity'] == 1e-3

    with pytest.raises(InvalidConfig):
        build_invariants({'not-an-invariant': 1.0})

    with pytest.raises(InvalidConfig):
        run_suites(trials=0)
