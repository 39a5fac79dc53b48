"""Microwave-driven k=0 magnon population and the excited packet window."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .chain import AddressingError, FieldProfile, LadderParameters
from .units import CONSTANTS


class EmptyWindowError(AddressingError):
    """The excitation window does not overlap the chain."""


@dataclass(frozen=True)
class ExcitationParameters:
    """Excitation rate W_ex (fraction/s), magnon lifetime T_s (s).

    ``kappa`` calibrates microwave power to rate, (fraction/s)/W.
    """

    W_ex: float
    T_s: float
    kappa: float = 0.0
    P_mw: Optional[float] = None

    def __post_init__(self):
        if self.W_ex < 0:
            raise ValueError("W_ex must be non-negative")
        if not self.T_s > 0:
            raise ValueError("T_s must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")
        if self.W_ex * self.T_s > 1:
            raise ValueError(
                f"steady-state fraction W_ex*T_s = {self.W_ex * self.T_s:.6g} exceeds 1"
            )

    @classmethod
    def from_power(cls, kappa: float, P_mw: float, T_s: float) -> "ExcitationParameters":
        return cls(excitation_rate_from_power(kappa, P_mw), T_s, kappa=kappa, P_mw=P_mw)

    @property
    def steady_state(self) -> float:
        return self.W_ex * self.T_s


@dataclass(frozen=True)
class MagnonPacket:
    x_lo: float
    x_hi: float
    N_region: int
    n0: float = 0.0

    def __post_init__(self):
        if not 0 <= self.n0 <= 1:
            raise ValueError("n0 must lie in [0, 1]")
        if not self.x_lo < self.x_hi:
            raise ValueError("empty packet window")

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def center(self) -> float:
        return 0.5 * (self.x_lo + self.x_hi)


def evolve_population(n_init: float, p: ExcitationParameters, t: float) -> float:
    """Closed-form solution of dn/dt = W_ex - n/T_s."""
    if not 0 <= n_init <= 1:
        raise ValueError("n_init must lie in [0, 1]")
    if t < 0:
        raise ValueError("t must be non-negative")
    n_ss = p.steady_state
    n = n_ss + (n_init - n_ss) * math.exp(-t / p.T_s)
    if n > 1:
        raise ValueError(f"population {n:.6g} exceeds 1; drive too strong")
    return n


def excitation_rate_from_power(kappa: float, P_mw: float) -> float:
    if kappa < 0 or P_mw < 0:
        raise ValueError("kappa and P_mw must be non-negative")
    return kappa * P_mw


def packet_region(
    params: LadderParameters,
    field: FieldProfile,
    omega_mw: float,
    delta_omega: float,
    n0: float = 0.0,
) -> MagnonPacket:
    """Positions where |gap(x) - omega_mw| <= delta_omega/2.

    The window is clipped to the chain; N_region counts integer rungs inside.
    The window stays fixed while the microwave is on (no transport).
    """
    if not delta_omega > 0:
        raise ValueError("delta_omega must be positive")
    if field.degenerate:
        raise AddressingError("degenerate addressing: zero field gradient")
    z = params.g * CONSTANTS.mu_B_over_h
    x_c = ((params.zero_field_gap - omega_mw) / z - field.H0) / field.G
    half = 0.5 * delta_omega / (z * abs(field.G))
    lo, hi = max(x_c - half, 0.0), min(x_c + half, field.extent)
    if not lo < hi:
        raise EmptyWindowError(
            f"excitation window [{x_c - half:.6g}, {x_c + half:.6g}] misses the chain"
        )
    first = math.ceil(lo)
    last = math.floor(hi)
    if last >= field.extent:
        last = math.ceil(field.extent) - 1
    return MagnonPacket(lo, hi, max(0, last - first + 1), n0)

