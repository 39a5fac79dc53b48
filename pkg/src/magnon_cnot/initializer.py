"""Qubit initialization: thermal pure-state fraction and optical polarization buildup.

The pure-state fraction is returned as a relative number (proportionality
constant 1). hbar*omega_n is evaluated as h*omega_n with omega_n the ordinary
Larmor frequency in Hz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import CONSTANTS


@dataclass(frozen=True)
class InitializerParameters:
    omega_n: float
    T_bath: float
    N_qubits: int
    P_e: float = 1.0
    tau_transfer: float = 1.0

    def __post_init__(self):
        if not self.omega_n > 0:
            raise ValueError("omega_n must be positive")
        if not self.T_bath > 0:
            raise ValueError("T_bath must be positive")
        if self.N_qubits < 1:
            raise ValueError("N_qubits must be >= 1")
        if not 0 <= self.P_e <= 1:
            raise ValueError("P_e must lie in [0, 1]")
        if not self.tau_transfer > 0:
            raise ValueError("tau_transfer must be positive")


def pure_state_fraction(omega_n: float, T_bath: float, N: int) -> float:
    """(h omega_n / 2 k_B T) * N / 2**N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    bias = CONSTANTS.h * omega_n / (2 * CONSTANTS.k_B * T_bath)
    # N / 2**N is exact in binary for moderate N
    return bias * (N / 2**N)


def polarization_buildup(P_e: float, tau_transfer: float, t: float) -> float:
    """Nuclear polarization after pumping for time t; held once the light is off."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return P_e * -math.expm1(-t / tau_transfer)


def initial_register_state(P_n: float, N: int) -> np.ndarray:
    """Product-state populations with up-probability (1 + P_n)/2 per qubit.

    Index ordering follows the binary label, qubit 0 most significant,
    0 = up.
    """
    if not 0 <= P_n <= 1:
        raise ValueError("P_n must lie in [0, 1]")
    if N < 1:
        raise ValueError("N must be >= 1")
    single = np.array([(1 + P_n) / 2, (1 - P_n) / 2])
    pops = np.array([1.0])
    for _ in range(N):
        pops = np.kron(pops, single)
    return pops
