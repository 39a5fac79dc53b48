"""Nuclear T1 relaxation driven by the transverse hyperfine field.

Only the scaling of the rate is meaningful: 1/T1 is quadratic in A_perp and
linear in temperature and in the susceptibility aggregate ``chi_sum``.
``chi_sum`` stands for sum_q Im chi+-(q, omega_n)/omega_n of the driven,
non-equilibrium magnon gas. It cannot be derived here, so the caller supplies
it (units 1/Hz^2, making the rate come out in 1/s). Two-magnon (Raman) and
three-magnon processes are just different regimes of that one number.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .chain import HyperfineParameters, LadderParameters
from .coupling import w_ij_k0
from .states import CONTROL, TARGET, DensityState, TwoQubitState
from .units import kelvin_to_hz

log = logging.getLogger(__name__)


class NoSusceptibilityModel(ValueError):
    """chi_sum was not supplied, so no rate can be formed."""


@dataclass(frozen=True)
class RelaxationParameters:
    A_perp: float = 0.0
    T_emp: float = 1.0
    g: float = 2.0
    gamma_n_over_2pi: float = 4.3e7
    chi_sum: Optional[float] = None
    T1: Optional[float] = None
    T_s: Optional[float] = None

    def __post_init__(self):
        if self.A_perp < 0:
            raise ValueError("A_perp must be non-negative")
        for name in ("T_emp", "g", "gamma_n_over_2pi"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.chi_sum is not None and self.chi_sum < 0:
            raise ValueError("chi_sum must be non-negative")
        if self.T1 is not None and not self.T1 > 0:
            raise ValueError("T1 must be positive")
        if self.T_s is not None and not self.T_s > 0:
            raise ValueError("T_s must be positive")

    @property
    def relaxation_time(self) -> float:
        """Overridden T1 if set, else 1/t1_rate (inf when the rate vanishes)."""
        if self.T1 is not None:
            return self.T1
        rate = t1_rate(self)
        return math.inf if rate == 0 else 1.0 / rate


def t1_rate(p: RelaxationParameters) -> float:
    """1/T1 = 2 (gamma_n A_perp)^2 (k_B T/h) / g^2 * chi_sum, in 1/s."""
    if p.chi_sum is None:
        raise NoSusceptibilityModel("no susceptibility model: chi_sum not supplied")
    gA = p.gamma_n_over_2pi * p.A_perp
    return 2 * gA**2 * kelvin_to_hz(p.T_emp) / p.g**2 * p.chi_sum


def _depolarize(rho: np.ndarray, qubit: int, keep: float) -> np.ndarray:
    r = rho.reshape(2, 2, 2, 2)
    half_eye = np.eye(2) / 2
    if qubit == CONTROL:
        # keep the target's reduced state, replace the control by I/2
        red = np.einsum("cacb->ab", r)
        mixed = np.einsum("ab,cd->cadb", red, half_eye)
    else:
        red = np.einsum("atbt->ab", r)
        mixed = np.einsum("ab,cd->acbd", red, half_eye)
    return keep * rho + (1 - keep) * mixed.reshape(4, 4)


def apply_relaxation(
    state: Union[TwoQubitState, DensityState], T1: float, t: float
) -> DensityState:
    """Independent depolarization of each qubit with survival exp(-t/T1).

    Single-qubit coherences and longitudinal polarization both decay by
    exp(-t/T1); the fixed point is the fully mixed state.
    """
    if not T1 > 0:
        raise ValueError("T1 must be positive")
    if t < 0:
        raise ValueError("t must be non-negative")
    keep = math.exp(-t / T1)
    rho = state.density()
    for q in (CONTROL, TARGET):
        rho = _depolarize(rho, q, keep)
    return DensityState(rho)


def gate_fidelity_vs_noise(params, T1: float) -> float:
    """Mean c-NOT population fidelity over the four basis inputs.

    ``T1 = math.inf`` runs the noiseless path unchanged.
    """
    from .gate import cnot_sequence, cnot_image, run_sequence

    seq = cnot_sequence(params)
    noise = None if math.isinf(T1) else RelaxationParameters(
        gamma_n_over_2pi=params.gamma_n_over_2pi, T1=T1
    )
    fids = []
    for c in (0, 1):
        for t in (0, 1):
            out = run_sequence(TwoQubitState.basis(c, t), seq, noise)
            fids.append(out.populations()[cnot_image(c, t)])
    return float(np.mean(fids))


def figure_of_merit(
    A_par: float,
    A_perp: float,
    ladder: LadderParameters,
    relax: RelaxationParameters,
    n0_per_site: float = 0.01,
    N: int = 20,
    r_ij: float = 10,
) -> float:
    """Q = T1 / t_gate, with t_gate = 1/(2|W|) from the k=0 coupling.

    Q scales as (A_par/A_perp)^2. Returns inf (with a warning) for A_perp = 0.
    """
    if A_perp == 0:
        log.warning("A_perp = 0: no transverse relaxation channel, Q is infinite")
        return math.inf
    hf = HyperfineParameters(A_par, A_perp, relax.gamma_n_over_2pi)
    W = w_ij_k0(n0_per_site, ladder, hf, N, r_ij)
    rate = t1_rate(replace(relax, A_perp=A_perp))
    return 2 * abs(W) / rate
