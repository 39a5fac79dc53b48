import math
from dataclasses import replace

import numpy as np
import pytest

from magnon_cnot.gate import (
    CoupledEvolution,
    GateParameters,
    Idle,
    NotSwitchableError,
    PulseSequence,
    Rotation,
    apply_rotation,
    cnot_sequence,
    cnot_truth_table,
    evolve_coupled,
    h_tr_shift,
    measure_h_tr_protocol,
    run_sequence,
    select_second_axis,
    superposition_test,
)
from magnon_cnot.chain import HyperfineParameters
from magnon_cnot.states import CONTROL, TARGET, Axis, TwoQubitState, purity
from oracles import cnot_unitary_expm

W_PAPER = 14789.667404423551


@pytest.fixture
def params():
    return GateParameters(W=W_PAPER, H_tr=0.1, gamma_n_over_2pi=4.3e7)


def random_state(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    return TwoQubitState(a / np.linalg.norm(a))


def test_rotation_identity_and_inversion():
    s = TwoQubitState.basis(0, 0)
    assert np.allclose(apply_rotation(s, TARGET, Axis.MINUS_X, 0.0).amplitudes, s.amplitudes)
    half = apply_rotation(s, TARGET, Axis.MINUS_X, math.pi / 2)
    flipped = apply_rotation(half, TARGET, Axis.MINUS_X, math.pi / 2)
    assert flipped.populations() == pytest.approx([0, 1, 0, 0], abs=1e-15)


@pytest.mark.parametrize("axis", list(Axis))
@pytest.mark.parametrize("qubit", [CONTROL, TARGET])
def test_rotation_unitary(axis, qubit):
    s = random_state(7)
    out = apply_rotation(s, qubit, axis, 1.234)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)


def test_rotation_sign_convention():
    # pi/2 about -X takes +Z to +Y
    s = apply_rotation(TwoQubitState.basis(0, 0), TARGET, Axis.MINUS_X, math.pi / 2)
    rho = s.reduced(TARGET)
    assert 2 * rho[1, 0].imag == pytest.approx(1.0, abs=1e-15)


def test_evolve_coupled_switch_off():
    s = random_state(3)
    out = evolve_coupled(s, GateParameters(W=0.0), 1e-3)
    assert np.allclose(out.amplitudes, s.amplitudes, atol=1e-15)


def test_conditional_precession(params):
    t = params.gate_time
    for control, expected_x in ((0, -1.0), (1, +1.0)):
        s = TwoQubitState.basis(control, 0)
        s = apply_rotation(s, TARGET, Axis.MINUS_X, math.pi / 2)
        s = evolve_coupled(s, params, t)
        rho = s.reduced(TARGET)
        sx = 2 * rho[1, 0].real
        sy = 2 * rho[1, 0].imag
        assert sx == pytest.approx(expected_x, abs=1e-12)
        assert sy == pytest.approx(0.0, abs=1e-12)


def test_evolve_semigroup(params):
    s = random_state(11)
    bare = replace(params, frame="bare")
    whole = evolve_coupled(s, bare, 2e-5)
    halves = evolve_coupled(evolve_coupled(s, bare, 1e-5), bare, 1e-5)
    assert np.allclose(whole.amplitudes, halves.amplitudes, atol=1e-12)


def test_cnot_sequence_structure(params):
    seq = cnot_sequence(params)
    assert len(seq) == 3
    first, middle, last = seq.steps
    assert first == Rotation(TARGET, Axis.MINUS_X, math.pi / 2)
    assert middle == CoupledEvolution(params.gate_time)
    assert last.axis in (Axis.PLUS_Y, Axis.MINUS_Y)
    assert middle.duration == pytest.approx(1 / (2 * W_PAPER), rel=1e-15)
    doubled = cnot_sequence(replace(params, W=2 * W_PAPER))
    assert doubled.steps[1].duration == pytest.approx(middle.duration / 2, rel=1e-15)


def test_not_switchable():
    with pytest.raises(NotSwitchableError, match="gate not switchable"):
        cnot_sequence(GateParameters(W=0.0))


def test_second_axis_selected_by_simulation(params):
    assert select_second_axis(params) == Axis.PLUS_Y
    wrong = cnot_truth_table(replace(params, second_axis=Axis.MINUS_Y))
    assert max(wrong.values()) < 1e-12
    # sign of the coupling swaps the required closing pulse
    assert select_second_axis(replace(params, W=-W_PAPER)) == Axis.MINUS_Y


def test_truth_table(params):
    table = cnot_truth_table(params)
    assert list(table) == ["00", "01", "10", "11"]
    assert all(f >= 0.999 for f in table.values())


def test_truth_table_against_expm_oracle(params):
    U = cnot_unitary_expm(W_PAPER, params.gate_time)
    for idx in range(4):
        psi = np.zeros(4, dtype=complex)
        psi[idx] = 1
        ours = run_sequence(TwoQubitState(psi), cnot_sequence(params)).amplitudes
        assert np.allclose(ours, U @ psi, atol=1e-12)


def test_superposition_entangles(params):
    pops, target_purity = superposition_test(params)
    assert pops == pytest.approx([0.5, 0, 0, 0.5], abs=1e-6)
    assert target_purity == pytest.approx(0.5, abs=1e-6)


def test_run_sequence_empty_and_norm(params):
    s = random_state(5)
    same = run_sequence(s, PulseSequence(params, ()))
    assert np.array_equal(same.amplitudes, s.amplitudes)
    out = run_sequence(s, cnot_sequence(params))
    assert out.norm() == pytest.approx(1.0, abs=1e-12)


def test_idle_is_identity_without_noise(params):
    s = random_state(9)
    out = run_sequence(s, PulseSequence(params, (Idle(1e-3),)))
    assert np.array_equal(out.amplitudes, s.amplitudes)


def test_population_involution(params):
    seq = cnot_sequence(params)
    for idx in range(4):
        psi = np.zeros(4, dtype=complex)
        psi[idx] = 1
        twice = run_sequence(run_sequence(TwoQubitState(psi), seq), seq)
        assert twice.populations() == pytest.approx(np.abs(psi) ** 2, abs=1e-9)


def test_frame_equivalence(params):
    shifted = replace(params, frame="shifted")
    bare = replace(params, frame="bare")
    assert bare.detuning == pytest.approx(4.3e6)
    for seed in range(4):
        s = random_state(seed)
        a = run_sequence(s, cnot_sequence(shifted)).populations()
        b = run_sequence(s, cnot_sequence(bare)).populations()
        assert a == pytest.approx(b, abs=1e-9)


def test_gate_time_scaling(params):
    a = cnot_truth_table(params)
    b = cnot_truth_table(replace(params, W=2 * params.W))
    assert a == pytest.approx(b, abs=1e-12)


def test_h_tr_shift_examples():
    hf = HyperfineParameters(10.0, 0.0, 4.3e7)
    assert h_tr_shift(hf, 0.01, 1.0) == 0.1
    assert h_tr_shift(hf, 0.0) == 0.0
    assert h_tr_shift(hf, 0.01) / 10.0 == 0.01
    with pytest.raises(ValueError):
        h_tr_shift(hf, 1.5)


def test_measure_h_tr(params):
    assert measure_h_tr_protocol(params) == pytest.approx(0.1, rel=1e-3)
    assert measure_h_tr_protocol(replace(params, H_tr=0.0)) == pytest.approx(0.0, abs=1e-12)
    a = measure_h_tr_protocol(params)
    b = measure_h_tr_protocol(replace(params, W=2 * params.W))
    assert b == pytest.approx(a, rel=1e-9)


def test_measure_h_tr_negative_shift(params):
    assert measure_h_tr_protocol(replace(params, H_tr=-0.05)) == pytest.approx(-0.05, rel=1e-3)


def test_state_validation():
    with pytest.raises(ValueError):
        TwoQubitState(np.array([1, 1, 0, 0]))
    assert purity(TwoQubitState.basis(1, 0).reduced(CONTROL)) == pytest.approx(1.0)
