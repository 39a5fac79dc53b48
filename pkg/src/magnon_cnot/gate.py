"""Microwave-switched c-NOT between two nuclear qubits.

Sequence: pi/2 about -X on the target, free evolution under W Iz_c Iz_t while
the microwave is on, pi/2 about +Y on the target. Gate time t_gate = 1/(2W)
with W in Hz; this is pi/(2 gamma_n H_SN) for the conditional field
H_SN = W / (2 gamma_n/2pi).

Pulses are specified in the frame shifted by the triplet field H_tr. In the
bare frame (rotating at gamma_n H(x_target)) the target picks up the extra
precession gamma_n H_tr; the simulator tracks that phase and rotates later
pulse axes accordingly, the way a phase-coherent spectrometer would.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal, Optional, Union

import numpy as np

from .chain import HyperfineParameters
from .decoherence import RelaxationParameters, apply_relaxation
from .states import (
    CONTROL,
    TARGET,
    Axis,
    DensityState,
    TwoQubitState,
    on_qubit,
    purity,
    rotation_matrix,
)

State = Union[TwoQubitState, DensityState]

DEFAULT_SECOND_AXIS = Axis.PLUS_Y


class NotSwitchableError(ValueError):
    """Zero coupling: the gate cannot be driven."""


@dataclass(frozen=True)
class GateParameters:
    W: float
    H_tr: float = 0.0
    gamma_n_over_2pi: float = 4.3e7
    frame: Literal["bare", "shifted"] = "shifted"
    t_gate: Optional[float] = None
    second_axis: Optional[Axis] = None

    def __post_init__(self):
        if self.frame not in ("bare", "shifted"):
            raise ValueError(f"unknown frame {self.frame!r}")
        if self.t_gate is not None and not self.t_gate > 0:
            raise ValueError("t_gate must be positive")

    @property
    def gate_time(self) -> float:
        if self.t_gate is not None:
            return self.t_gate
        if self.W == 0:
            raise NotSwitchableError("gate not switchable: W = 0")
        return 1.0 / (2 * abs(self.W))

    @property
    def detuning(self) -> float:
        """Target offset from the rotating frame while the microwave is on (Hz)."""
        if self.frame == "shifted":
            return 0.0
        return self.gamma_n_over_2pi * self.H_tr


@dataclass(frozen=True)
class Rotation:
    qubit: int
    axis: Axis
    angle: float


@dataclass(frozen=True)
class CoupledEvolution:
    duration: float
    microwave: bool = True


@dataclass(frozen=True)
class Idle:
    duration: float


Step = Union[Rotation, CoupledEvolution, Idle]


@dataclass(frozen=True)
class PulseSequence:
    params: GateParameters
    steps: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.steps)


def apply_rotation(state: State, qubit: int, axis: Axis, angle: float) -> State:
    if not math.isfinite(angle):
        raise ValueError("rotation angle must be finite")
    return state.apply(on_qubit(rotation_matrix(axis, angle), qubit))


def _coupled_propagator(W: float, detuning: float, t: float) -> np.ndarray:
    # Iz eigenvalue +1/2 for spin up (0), -1/2 for down (1)
    s = np.array([0.5, -0.5])
    sc, st = np.meshgrid(s, s, indexing="ij")
    energy = (W * sc * st + detuning * st).reshape(4)
    return np.diag(np.exp(-2j * math.pi * energy * t))


def evolve_coupled(state: State, params: GateParameters, t: float) -> State:
    """Evolve under W Iz_c Iz_t + detuning Iz_t (in Hz) for time t."""
    return state.apply(_coupled_propagator(params.W, params.detuning, t))


def cnot_image(control: int, target: int) -> int:
    return 2 * control + (target ^ control)


def cnot_sequence(params: GateParameters) -> PulseSequence:
    if params.W == 0:
        raise NotSwitchableError("gate not switchable: W = 0")
    axis = params.second_axis
    if axis is None:
        # a negative coupling reverses the conditional precession
        axis = DEFAULT_SECOND_AXIS if params.W > 0 else Axis.MINUS_Y
    steps = (
        Rotation(TARGET, Axis.MINUS_X, math.pi / 2),
        CoupledEvolution(params.gate_time),
        Rotation(TARGET, Axis(axis), math.pi / 2),
    )
    return PulseSequence(params, steps)


def _frame_rotation(phase: float) -> np.ndarray:
    return rotation_matrix(Axis.PLUS_Z, phase)


def run_sequence(
    state: State,
    seq: PulseSequence,
    noise: Optional[RelaxationParameters] = None,
) -> State:
    """Apply the steps left to right.

    With ``noise``, the relaxation channel acts after every timed step.
    """
    params = seq.params
    frame_phase = 0.0  # accumulated target frame offset, bare frame only
    T1 = noise.relaxation_time if noise is not None else None
    for step in seq.steps:
        if isinstance(step, Rotation):
            U = rotation_matrix(step.axis, step.angle)
            if step.qubit == TARGET and frame_phase != 0.0:
                Rz = _frame_rotation(frame_phase)
                U = Rz @ U @ Rz.conj().T
            state = state.apply(on_qubit(U, step.qubit))
        elif isinstance(step, (CoupledEvolution, Idle)):
            if isinstance(step, CoupledEvolution) and step.microwave:
                state = evolve_coupled(state, params, step.duration)
                frame_phase += 2 * math.pi * params.detuning * step.duration
            if T1 is not None and not math.isinf(T1):
                state = apply_relaxation(state, T1, step.duration)
        else:
            raise TypeError(f"unknown pulse step {step!r}")
    return state


def cnot_truth_table(params: GateParameters) -> dict[str, float]:
    """Population landing on the c-NOT image for each basis input."""
    seq = cnot_sequence(params)
    table = {}
    for c in (0, 1):
        for t in (0, 1):
            out = run_sequence(TwoQubitState.basis(c, t), seq)
            table[f"{c}{t}"] = float(out.populations()[cnot_image(c, t)])
    return table


def select_second_axis(params: GateParameters) -> Axis:
    """Pick the +Y/-Y closing pulse that realizes the c-NOT truth table."""
    best, best_err = None, math.inf
    for axis in (Axis.PLUS_Y, Axis.MINUS_Y):
        table = cnot_truth_table(replace(params, second_axis=axis))
        err = max(1 - f for f in table.values())
        if err < best_err:
            best, best_err = axis, err
    return best


def superposition_test(params: GateParameters) -> tuple[np.ndarray, float]:
    """Run (|0>+|1>)/sqrt2 (x) |0>; return output populations and target purity."""
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    up = np.array([1, 0], dtype=complex)
    out = run_sequence(TwoQubitState.product(plus, up), cnot_sequence(params))
    return out.populations(), purity(out.reduced(TARGET))


def h_tr_shift(hf: HyperfineParameters, n0: float, m_eff: float = 1.0) -> float:
    """Triplet-induced field at a qubit, A_par * n0 * m_eff, in T."""
    if not 0 <= n0 <= 1:
        raise ValueError("n0 must lie in [0, 1]")
    return hf.A_par * n0 * m_eff


def measure_h_tr_protocol(params: GateParameters, n_samples: int = 64) -> float:
    """Recover H_tr from the target's precession with the control saturated.

    Runs in the bare frame. Saturation is modeled as rapid inversion of the
    control (tau - pi - 2tau - pi - tau cycles), which averages Iz_c to zero
    and removes the conditional W term at every cycle boundary. The target
    phase is sampled at cycle boundaries and its slope gives the frequency
    offset, which divided by gamma_n/2pi is the shift field.
    """
    bare = replace(params, frame="bare")
    bandwidth = max(abs(bare.detuning), abs(bare.W), 1.0)
    cycle = 1.0 / (8 * bandwidth)
    tau = cycle / 4
    flip = on_qubit(rotation_matrix(Axis.PLUS_X, math.pi), CONTROL)
    step_U = (
        _coupled_propagator(bare.W, bare.detuning, tau)
        @ flip
        @ _coupled_propagator(bare.W, bare.detuning, 2 * tau)
        @ flip
        @ _coupled_propagator(bare.W, bare.detuning, tau)
    )
    state = apply_rotation(TwoQubitState.basis(0, 0), TARGET, Axis.MINUS_X, math.pi / 2)
    signal = np.empty(n_samples, dtype=complex)
    for i in range(n_samples):
        rho_t = state.reduced(TARGET)
        # 2 rho[1, 0] = <sx> + i<sy>
        signal[i] = 2 * rho_t[1, 0]
        state = state.apply(step_U)
    times = np.arange(n_samples) * cycle
    phase = np.unwrap(np.angle(signal))
    slope = np.polyfit(times, phase, 1)[0]
    # Rz(phi) advances <sx> + i<sy> by exp(+i phi); phi = 2 pi f t
    freq = slope / (2 * math.pi)
    return float(freq / params.gamma_n_over_2pi)
