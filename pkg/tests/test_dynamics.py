import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cavitycorr.dynamics as ccd
from cavitycorr import data
from cavitycorr.correlations import intrinsic_entanglement_n, record
from cavitycorr.coupling import CouplingSchedule, CouplingWindow, Pulse
from cavitycorr.exceptions import (
    InvalidSchedule,
    InvalidSubspace,
    InvalidTime,
    MethodNotAvailable,
    NotNormalised,
    StepSizeError,
    UnreachableTarget,
)
from cavitycorr.qstate import PureState, new_initial_state, norm
from tests.data.utils import almost_equal, states_close

SQ = np.sqrt(0.5)


def singlet_schedule(pulse=None):
    pulse = pulse or Pulse()
    return CouplingSchedule.sequential(CouplingWindow(0.0, np.pi / 4, pulse), np.pi / 2, pulse)


def dd_schedule(ratio, duration, shape='constant'):
    return CouplingSchedule.simultaneous(CouplingWindow(0.0, duration, Pulse(shape)), ratio=ratio)


def test_coupling_matrix():
    H = ccd.coupling_matrix(ccd.ExcitationSubspace(1), 2.0, 3.0)
    expected = np.array([[0, 0, 2], [0, 0, 3], [2, 3, 0]])
    assert np.array_equal(H, expected)

    H = ccd.coupling_matrix(ccd.ExcitationSubspace(3), 1.0, 2.0)
    assert almost_equal(H[0, 1], 2.0 * np.sqrt(2))
    assert almost_equal(H[0, 2], np.sqrt(2))
    assert almost_equal(H[1, 3], np.sqrt(3))
    assert almost_equal(H[2, 3], 2.0 * np.sqrt(3))
    assert H[0, 3] == 0.0 and H[1, 2] == 0.0


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=10.0),
    st.floats(min_value=0.0, max_value=10.0),
    st.integers(min_value=1, max_value=6),
)
def test_hamiltonian_hermitian(f1, f2, N):
    H = ccd.coupling_matrix(ccd.ExcitationSubspace(N), f1, f2)
    assert np.array_equal(H, H.conj().T)


def test_build_hamiltonian():
    with pytest.raises(InvalidSubspace):
        ccd.build_hamiltonian(singlet_schedule(), 0)
    H = ccd.build_hamiltonian(singlet_schedule(), 1)
    assert H.dim == 3
    assert H(0.1)[0, 2] == 1.0 and H(0.1)[1, 2] == 0.0
    assert H(1.0)[0, 2] == 0.0 and H(1.0)[1, 2] == 1.0


def test_closed_form_djc():
    assert np.allclose(ccd.closed_form_djc(0.0).amplitudes, [1, 0, 0])
    assert np.allclose(ccd.closed_form_djc(np.pi / 2).amplitudes, [0, 0, -1.0j])
    end = ccd.closed_form_djc(np.pi / 4, np.pi / 2, ccd.DJCPhase.ATOM_TWO_INSIDE)
    assert np.allclose(end.amplitudes, [SQ, -SQ, 0], atol=1e-15)
    handoff = ccd.closed_form_djc(0.7, 0.0, ccd.DJCPhase.ATOM_TWO_INSIDE)
    assert np.allclose(handoff.amplitudes, ccd.closed_form_djc(0.7).amplitudes, atol=0.0)


def test_closed_form_dd():
    assert np.allclose(ccd.closed_form_dd(1.0, np.pi).amplitudes, [0, -1, 0], atol=1e-12)
    assert np.allclose(ccd.closed_form_dd(data.R_MINUS, np.pi).amplitudes, [SQ, -SQ, 0], atol=1e-12)
    assert np.allclose(ccd.closed_form_dd(data.R_PLUS, np.pi).amplitudes, [-SQ, -SQ, 0], atol=1e-12)
    assert np.allclose(ccd.closed_form_dd(2.0, 0.0).amplitudes, [1, 0, 0])
    for r in (0.1, 1.0, 7.0):
        for theta in np.linspace(0, 2 * np.pi, 9):
            assert almost_equal(norm(ccd.closed_form_dd(r, theta)), 1.0)
    with pytest.raises(InvalidSchedule):
        ccd.closed_form_dd(0.0, 1.0)


def test_integrate_matches_closed_form():
    sched = singlet_schedule()
    H = ccd.build_hamiltonian(sched, 1)
    final = ccd.integrate(H, new_initial_state(1), 0.0, sched.end, 1e-3)
    expected = ccd.closed_form_djc(np.pi / 4, np.pi / 2, ccd.DJCPhase.ATOM_TWO_INSIDE)
    assert states_close(final, expected)
    assert abs(norm(final) - 1.0) < 1e-8


def test_integrate_dense_output():
    H = ccd.build_hamiltonian(singlet_schedule(), 1)
    final, trajectory = ccd.integrate(H, new_initial_state(1), 0.0, 0.5, 0.01, dense_output=True)
    assert almost_equal(trajectory[-1][0], 0.5)
    assert np.array_equal(trajectory[-1][1].amplitudes, final.amplitudes)
    assert all(a[0] < b[0] for a, b in zip(trajectory[:-1], trajectory[1:]))


def test_integrate_errors():
    H = ccd.build_hamiltonian(singlet_schedule(), 1)
    psi = new_initial_state(1)
    with pytest.raises(StepSizeError):
        ccd.integrate(H, psi, 0.0, 1.0, 0.0)
    with pytest.raises(InvalidTime):
        ccd.integrate(H, psi, 1.0, 0.0, 1e-3)
    with pytest.raises(InvalidSubspace):
        ccd.integrate(H, new_initial_state(2), 0.0, 1.0, 1e-3)
    with pytest.raises(NotNormalised):
        ccd.integrate(H, PureState(1, [0.5, 0, 0]), 0.0, 1.0, 1e-3)


def test_integrate_norm_drift():
    long = CouplingSchedule.sequential(CouplingWindow(0.0, 10.0), 10.0, Pulse())
    H = ccd.build_hamiltonian(long, 1)
    with pytest.raises(StepSizeError):
        ccd.integrate(H, new_initial_state(1), 0.0, 20.0, 1.0)


def test_rk4_accumulated_drift(monkeypatch):
    exact_integrate = ccd.integrate

    def leaky_integrate(H, psi0, t0, t1, dt):
        # each leg stays inside the per-call limit, two legs do not
        psi = exact_integrate(H, psi0, t0, t1, dt)
        return PureState(psi.subspace, psi.amplitudes * np.sqrt(1.0 + 6e-7))

    monkeypatch.setattr(ccd, 'integrate', leaky_integrate)
    with pytest.raises(StepSizeError):
        ccd.evolve_scenario(singlet_schedule(), 1, 'rk4', [0.1, 0.2, 0.3])


def test_integrate_higher_subspace():
    sched = dd_schedule(2.0, 1.5)
    H = ccd.build_hamiltonian(sched, 3)
    final = ccd.integrate(H, new_initial_state(3), 0.0, 1.5, 1e-3)
    assert abs(norm(final) - 1.0) < 1e-8
    rec = record(final, 1.5)
    assert abs(rec.E_aa - intrinsic_entanglement_n(final)) < 1e-9


def test_method_registry():
    assert set(ccd.available_methods()) == {'closed-form', 'rk4'}
    assert ccd.get_method('CLOSED-FORM') is ccd.closed_form
    assert ccd.get_method(ccd.EvolutionMethod.RK4) is ccd.rk4
    with pytest.raises(MethodNotAvailable):
        ccd.get_method('euler')


def test_evolve_scenario():
    sched = singlet_schedule()
    assert ccd.evolve_scenario(sched, 1, 'rk4', []) == []
    times = [0.5, 0.1, 2.0]
    exact = ccd.evolve_scenario(sched, 1, 'closed-form', times)
    integrated = ccd.evolve_scenario(sched, 1, 'rk4', times)
    assert [t for t, _ in integrated] == times
    for (_, a), (_, b) in zip(exact, integrated):
        assert states_close(a, b)


def test_evolve_scenario_sine_squared():
    sched = singlet_schedule(Pulse('sine-squared', 2.0, ramp=0.2))
    times = list(np.linspace(0.0, sched.end, 7))
    exact = ccd.evolve_scenario(sched, 1, 'closed-form', times)
    integrated = ccd.evolve_scenario(sched, 1, 'rk4', times)
    for (_, a), (_, b) in zip(exact, integrated):
        assert states_close(a, b)


def test_evolve_dd_matches_closed_form():
    sched = dd_schedule(data.R_PLUS, 1.0, shape='sine-squared')
    times = list(np.linspace(0.0, 1.0, 5))
    exact = ccd.evolve_scenario(sched, 1, 'closed-form', times)
    integrated = ccd.evolve_scenario(sched, 1, 'rk4', times)
    for (_, a), (_, b) in zip(exact, integrated):
        assert states_close(a, b)


def test_closed_form_not_available():
    sched = singlet_schedule()
    with pytest.raises(MethodNotAvailable):
        ccd.evolve_scenario(sched, 2, 'closed-form', [0.1])
    with pytest.raises(MethodNotAvailable):
        ccd.evolve_scenario(sched, 1, 'closed-form', [0.1], initial=PureState(1, [0, 1, 0]))
    no_ratio = CouplingSchedule(CouplingWindow(0.0, 1.0), CouplingWindow(0.0, 1.0), model='dd')
    with pytest.raises(MethodNotAvailable):
        ccd.evolve_scenario(no_ratio, 1, 'closed-form', [0.1])
    with pytest.raises(InvalidSubspace):
        ccd.evolve_scenario(sched, 0, 'rk4', [0.1])


def test_trapping_time():
    r = data.R_PLUS
    sched = dd_schedule(r, 10.0)
    assert almost_equal(ccd.trapping_time(sched), np.pi / np.sqrt(1 + r * r), thresh=1e-9)
    with pytest.raises(UnreachableTarget):
        ccd.trapping_time(dd_schedule(r, 0.5))
    with pytest.raises(InvalidSchedule):
        ccd.trapping_time(singlet_schedule())


def test_default_step():
    assert almost_equal(ccd.default_step(dd_schedule(4.0, 1.0)), 2.5e-4)
