"""Physical constants and unit conversions.

Internal unit system: energies are ordinary (non-angular) frequencies in Hz,
fields in tesla, times in seconds, distances in lattice constants.
Gyromagnetic ratios are carried as gamma/2pi in Hz/T.
"""
from __future__ import annotations

from dataclasses import dataclass

import scipy.constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    k_B_over_h: float = _sc.k / _sc.h  # Hz/K
    mu_B_over_h: float = _sc.physical_constants["Bohr magneton in Hz/T"][0]  # Hz/T
    h: float = _sc.h  # J s
    k_B: float = _sc.k  # J/K
    h_bar_relative: float = 1.0


CONSTANTS = PhysicalConstants()

# MHz/kOe -> Hz/T
MHZ_PER_KOE = 1e6 * 10.0


def kelvin_to_hz(T: float) -> float:
    """Energy k_B*T expressed as an ordinary frequency."""
    return T * CONSTANTS.k_B_over_h


def hz_to_kelvin(f: float) -> float:
    return f / CONSTANTS.k_B_over_h


def kilo_oersted_to_tesla(H: float) -> float:
    # division keeps the result correctly rounded (0.1 is not representable)
    return H / 10.0


def tesla_to_kilo_oersted(B: float) -> float:
    return B * 10.0


def mhz_per_koe_to_hz_per_tesla(gamma: float) -> float:
    return gamma * MHZ_PER_KOE


def larmor_frequency(gamma_over_2pi: float, H: float) -> float:
    """Larmor frequency in Hz for gamma/2pi in Hz/T and a field in T."""
    if H < 0:
        raise ValueError(f"negative field {H!r} T; field profile inverted?")
    return gamma_over_2pi * H


def zeeman_frequency(g: float, H: float) -> float:
    """Electron Zeeman splitting g*mu_B*H in Hz."""
    return g * CONSTANTS.mu_B_over_h * H
