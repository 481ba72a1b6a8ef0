import numpy as np
import pytest

import cavitycorr.scenarios as ccs
from cavitycorr import data
from cavitycorr.coupling import CouplingSchedule, CouplingWindow, Pulse, rabi_angle
from cavitycorr.exceptions import InvalidConfig, InvalidSchedule, InvalidWindow, UnreachableTarget
from tests.data.utils import almost_equal, states_close


def test_build_singlet():
    s = ccs.build_scenario('singlet-djc', samples=8)
    assert s.name == ccs.ScenarioName.SINGLET_DJC
    assert almost_equal(s.schedule.window1.duration, np.pi / 4)
    assert almost_equal(s.schedule.window2.duration, np.pi / 2)
    assert s.targets == {'theta1': np.pi / 4, 'theta2': np.pi / 2}


def test_build_wstate():
    s = ccs.build_scenario('wstate-djc', strength=2.0, samples=8)
    assert almost_equal(s.schedule.window1.duration, np.arccos(1 / np.sqrt(3)) / 2.0)
    assert almost_equal(s.schedule.window2.duration, np.pi / 8)


def test_build_triplet():
    s = ccs.build_scenario('triplet-dd', samples=8)
    r = data.R_PLUS
    assert s.schedule.ratio == r
    assert almost_equal(s.schedule.window2.duration, np.pi / np.sqrt(1 + r * r))
    assert s.model.value == 'dd'


def test_build_sine_squared_hits_targets():
    s = ccs.build_scenario('singlet-djc', shape='sine-squared', strength=1.3, samples=8)
    w1, w2 = s.schedule.window1, s.schedule.window2
    assert abs(rabi_angle(w1, w1.end) - np.pi / 4) <= 1e-10
    assert abs(rabi_angle(w2, w2.end) - np.pi / 2) <= 1e-10


def test_build_errors():
    with pytest.raises(InvalidWindow):
        ccs.build_scenario('singlet-djc', strength=0.0)
    with pytest.raises(InvalidConfig):
        ccs.build_scenario('custom')
    with pytest.raises(InvalidConfig):
        ccs.build_scenario('singlet-djc', samples=1)
    with pytest.raises(ValueError):
        ccs.build_scenario('ghz')


def test_solve_duration():
    assert almost_equal(ccs.solve_duration(Pulse(strength=2.0), 1.0), 0.5)
    tau = ccs.solve_duration(Pulse('sine-squared', 1.0, ramp=0.5), 3.0)
    assert almost_equal(tau, 6.0, thresh=1e-9)
    with pytest.raises(UnreachableTarget):
        ccs.solve_duration(Pulse(strength=0.0), 1.0)
    with pytest.raises(UnreachableTarget):
        ccs.solve_duration(Pulse(), -1.0)


def test_sample_times():
    s = ccs.build_scenario('singlet-djc', samples=5)
    times = s.sample_times()
    assert len(times) == 9
    assert times[0] == 0.0
    assert s.schedule.window1.end in times
    assert times[-1] == s.schedule.end
    assert np.all(np.diff(times) > 0)
    assert len(ccs.build_scenario('triplet-dd', samples=5).sample_times()) == 5


def test_run_singlet():
    for method in ('closed-form', 'rk4'):
        tol = 1e-8 if method == 'closed-form' else 1e-6
        final = ccs.run(ccs.build_scenario('singlet-djc', samples=16), method)[-1]
        assert abs(final.C_aa - 1.0) < tol
        assert abs(final.E_aa - 1.0) < tol
        assert abs(final.M_a1 - 0.5) < tol
        assert abs(final.M_a2 - 0.5) < tol
        assert abs(final.M_f) < tol
        assert final.C_a1f < tol and final.C_a2f < tol


def test_run_wstate():
    final = ccs.run(ccs.build_scenario('wstate-djc', samples=16))[-1]
    assert np.allclose(np.abs(final.state.amplitudes), np.sqrt(1 / 3), atol=1e-8)
    for p in ('aa', 'a1f', 'a2f'):
        assert abs(final.concurrence(p) - 2 / 3) < 1e-8
        assert abs(final.entanglement(p) - 4 / 9) < 1e-8


def test_run_triplet():
    exact = ccs.run(ccs.build_scenario('triplet-dd', samples=16))
    integrated = ccs.run(ccs.build_scenario('triplet-dd', samples=16), 'rk4')
    final = exact[-1]
    assert abs(final.state[2]) < 1e-9
    assert abs(final.C_aa - 1.0) < 1e-8
    assert final.C_a1f < 1e-8 and final.C_a2f < 1e-8
    for a, b in zip(exact, integrated):
        assert states_close(a.state, b.state)


def test_triplet_dynamics():
    records = ccs.run(ccs.build_scenario('triplet-dd', samples=128))
    assert min(r.M_a1 for r in records[1:-1]) < 1e-3
    quarter = records[-1].t / 4
    early = [r for r in records if 0 < r.t <= quarter]
    assert all(r.M_a1 > r.M_a2 for r in early)
    assert all(r.C_a1f > r.C_a2f and r.E_a1f > r.E_a2f for r in early)


def test_separable_and_singlet_dd():
    pulse = Pulse()
    for r, moduli, c_aa in ((1.0, [0, 1, 0], 0.0), (data.R_MINUS, [np.sqrt(0.5)] * 2 + [0], 1.0)):
        tau = np.pi / np.sqrt(1 + r * r)
        sched = CouplingSchedule.simultaneous(CouplingWindow(0.0, tau, pulse), ratio=r)
        s = ccs.build_scenario('custom', schedule=sched, samples=8)
        final = ccs.run(s)[-1]
        assert np.allclose(np.abs(final.state.amplitudes), moduli, atol=1e-8)
        assert abs(final.C_aa - c_aa) < 1e-8
        assert final.C_a1f < 1e-8 and final.C_a2f < 1e-8


def test_djc_phase_one():
    s = ccs.build_scenario('wstate-djc', samples=32)
    tau1 = s.schedule.window1.end
    records = ccs.run(s)
    for r in records:
        if r.t <= tau1:
            assert abs(r.M_a1 - r.M_f) < 1e-10
    frozen = [r.M_a1 for r in records if r.t >= tau1]
    assert max(frozen) - min(frozen) < 1e-10
    handoff = next(r for r in records if r.t == tau1)
    assert almost_equal(handoff.M_f, 4 / 9, thresh=1e-10)


def test_symmetry_check():
    s = ccs.build_scenario('singlet-djc', samples=16)
    result = ccs.symmetry_check(s, points=33)
    assert result.get_data('passed')
    assert result.get_data('entropy_deviation') < 1e-8
    assert result.get_data('entanglement_deviation') < 1e-8
    assert almost_equal(result.get_data('t_prime'), np.pi / 4 + np.pi / 4)
    assert almost_equal(result.get_data('max_offset'), np.pi / 4)
    assert ccs.symmetry_check(s, points=9, method='rk4').get_data('passed')


def test_symmetry_peak():
    s = ccs.build_scenario('singlet-djc', samples=65)
    records = ccs.run(s)
    peak = max(records, key=lambda r: r.E_a2f)
    spacing = s.schedule.window2.duration / 64
    assert abs(peak.t - ccs.symmetry_time(s)) <= spacing
    assert almost_equal(peak.E_a2f, 0.25, thresh=1e-9)


def test_symmetry_check_errors():
    with pytest.raises(InvalidSchedule):
        ccs.symmetry_check(ccs.build_scenario('singlet-djc', shape='sine-squared', samples=8))
    with pytest.raises(InvalidSchedule):
        ccs.symmetry_check(ccs.build_scenario('triplet-dd', samples=8))

    # atom 2 leaves at theta2 = 0.5 < pi/4, so t' is never reached
    pulse = Pulse(strength=1.0)
    short = CouplingSchedule.sequential(CouplingWindow(0.0, 0.5, pulse), 0.5, pulse)
    with pytest.raises(InvalidSchedule):
        ccs.symmetry_check(ccs.build_scenario('custom', schedule=short, samples=8))


def test_scenario_dict():
    s = ccs.build_scenario('triplet-dd', shape='sine-squared', samples=12)
    new_s = ccs.Scenario.from_dict(s.as_dict())
    assert new_s.name == s.name
    assert new_s.samples == 12
    assert new_s.schedule.ratio == s.schedule.ratio
    assert np.array_equal(new_s.sample_times(), s.sample_times())
