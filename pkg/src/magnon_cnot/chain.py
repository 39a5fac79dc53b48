"""Spin-ladder model: dispersion, local singlet-triplet gap, addressing."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import CONSTANTS, kelvin_to_hz, larmor_frequency


class GapClosedError(ValueError):
    """The local singlet-triplet gap is not positive."""


class AddressingError(ValueError):
    """A frequency cannot be mapped onto a position of the chain."""


@dataclass(frozen=True)
class LadderParameters:
    """Exchange couplings of the two-leg ladder.

    ``J`` is the rung exchange in Hz and ``j1`` the leg/rung ratio J1/J.
    ``a`` (metres) is carried along as metadata only.
    """

    J: float
    j1: float = 0.2
    g: float = 2.0
    N_chain: int = 100
    a: float = 1e-9

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J!r}")
        if not 0 <= self.j1 < 1:
            raise ValueError(f"j1 must lie in [0, 1), got {self.j1!r}")
        if self.N_chain < 2:
            raise ValueError(f"N_chain must be >= 2, got {self.N_chain!r}")

    @classmethod
    def from_kelvin(cls, J_kelvin: float, **kwargs) -> "LadderParameters":
        return cls(J=kelvin_to_hz(J_kelvin), **kwargs)

    @property
    def bandwidth(self) -> float:
        """Coefficient J*(j1 - j1**3/4) of cos(k) in the triplet dispersion."""
        return self.J * (self.j1 - self.j1**3 / 4)

    @property
    def zero_field_gap(self) -> float:
        return self.J * (1 + self.j1 / 4)


@dataclass(frozen=True)
class FieldProfile:
    """Linear field map H(x) = H0 + G*x over positions [0, extent)."""

    H0: float
    G: float
    extent: float

    def __post_init__(self):
        if self.extent <= 0:
            raise ValueError("extent must be positive")
        if min(self.H0, self.H0 + self.G * self.extent) < 0:
            raise ValueError("field profile goes negative inside the chain")

    @property
    def degenerate(self) -> bool:
        return self.G == 0

    def contains(self, x: float) -> bool:
        return 0 <= x < self.extent

    def field(self, x):
        return self.H0 + self.G * x


@dataclass(frozen=True)
class HyperfineParameters:
    """Hyperfine fields in T per Bohr magneton and gamma_n/2pi in Hz/T."""

    A_par: float
    A_perp: float
    gamma_n_over_2pi: float

    def __post_init__(self):
        if not self.A_par > 0:
            raise ValueError("A_par must be positive")
        if self.A_perp < 0:
            raise ValueError("A_perp must be non-negative")
        if not self.gamma_n_over_2pi > 0:
            raise ValueError("gamma_n_over_2pi must be positive")


@dataclass(frozen=True)
class QubitLayout:
    positions: tuple[int, ...]

    def __post_init__(self):
        pos = tuple(int(p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        if len(pos) < 1:
            raise ValueError("layout needs at least one qubit")
        gaps = np.diff(pos)
        if np.any(gaps <= 0):
            raise ValueError("qubit positions must be strictly increasing")
        if np.any(gaps < 2):
            raise ValueError("qubits may not sit on adjacent rungs")

    @classmethod
    def periodic(cls, start: int, spacing: int, count: int) -> "QubitLayout":
        return cls(tuple(start + spacing * i for i in range(count)))

    @property
    def spacing(self) -> int:
        if len(self.positions) < 2:
            return 0
        return int(np.min(np.diff(self.positions)))

    def check_within(self, field: FieldProfile) -> None:
        for x in self.positions:
            if not field.contains(x):
                raise AddressingError(f"qubit at x={x} lies outside the chain [0, {field.extent})")


def magnon_dispersion(params: LadderParameters, k):
    """Triplet energy relative to the k=0 mode, eps(k) - eps(0), in Hz.

    Works elementwise on arrays. Always <= 0 on [0, pi].
    """
    k_arr = np.asarray(k, dtype=float)
    # n*(pi/N) can land an ulp above pi
    if np.any(k_arr < 0) or np.any(k_arr > math.pi * (1 + 1e-12)):
        raise ValueError("wavenumber outside [0, pi]")
    out = params.bandwidth * (np.cos(k_arr) - 1.0)
    return float(out) if out.ndim == 0 else out


def local_gap(params: LadderParameters, field: FieldProfile, x: float) -> float:
    """Excitation energy |00> -> |1,-1> at position x, in Hz."""
    if not field.contains(x):
        raise AddressingError(f"position {x} outside the chain [0, {field.extent})")
    gap = params.zero_field_gap - params.g * CONSTANTS.mu_B_over_h * field.field(x)
    if gap <= 0:
        raise GapClosedError(f"singlet-triplet gap closed at x={x} (gap {gap:.6g} Hz)")
    return gap


def triplet_branch_energies(params: LadderParameters, H: float) -> tuple[float, float, float]:
    """Energies of the m = +1, 0, -1 triplet branches at field H (Hz)."""
    if H < 0:
        raise ValueError("field must be non-negative")
    z = params.g * CONSTANTS.mu_B_over_h * H
    d0 = params.zero_field_gap
    return (d0 + z, d0, d0 - z)


def resonance_position(params: LadderParameters, field: FieldProfile, omega_mw: float) -> float:
    """Position where the local gap equals the microwave frequency."""
    if field.degenerate:
        raise AddressingError("degenerate addressing: zero field gradient")
    z = params.g * CONSTANTS.mu_B_over_h
    H_res = (params.zero_field_gap - omega_mw) / z
    x = (H_res - field.H0) / field.G
    if not field.contains(x):
        raise AddressingError(f"out of chain: resonance at x={x:.6g}, chain is [0, {field.extent})")
    return x


def qubit_larmor(layout: QubitLayout, field: FieldProfile, hf: HyperfineParameters, q: int) -> float:
    if not 0 <= q < len(layout.positions):
        raise IndexError(f"qubit index {q} out of range for {len(layout.positions)} qubits")
    return larmor_frequency(hf.gamma_n_over_2pi, field.field(layout.positions[q]))


def resolvability_margin(
    layout: QubitLayout, field: FieldProfile, hf: HyperfineParameters, linewidth: float
) -> list[float]:
    """Adjacent-qubit Larmor separation over the NMR linewidth, per pair."""
    if not linewidth > 0:
        raise ValueError("linewidth must be positive")
    f = [qubit_larmor(layout, field, hf, q) for q in range(len(layout.positions))]
    return [abs(b - a) / linewidth for a, b in zip(f[:-1], f[1:])]
