"""Longitudinal Suhl-Nakamura coupling mediated by k~0 triplet magnons.

Mode grid: the driven k=0 mode plus k_n = n*pi/N for n = 1..N. Energies
enter only through differences eps(k) - eps(k'), so the dispersion constant
never appears. The hyperfine product gamma_n*A_par is taken as
(gamma_n/2pi)*A_par in Hz per Bohr magneton, with all energies in Hz.

The transverse (I+ I-) part is not computed: in a field gradient the
nuclear Zeeman mismatch suppresses it, so only W_ij Iz_i Iz_j survives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .chain import GapClosedError, HyperfineParameters, LadderParameters, magnon_dispersion
from .units import kelvin_to_hz

Dispersion = Callable[[np.ndarray], np.ndarray]


class DegenerateModeError(ValueError):
    """Two distinct modes share an energy; the exchange sum diverges."""


class ZeroBandwidthError(ValueError):
    """Flat triplet band (j1 = 0): no propagating magnons to mediate coupling."""


@dataclass(frozen=True)
class MagnonOccupation:
    """Mode populations: ``n_k0`` for k=0 and ``n_k[n-1]`` for k_n = n*pi/N."""

    N: int
    n_k0: float
    n_k: np.ndarray

    def __post_init__(self):
        n_k = np.asarray(self.n_k, dtype=float)
        object.__setattr__(self, "n_k", n_k)
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if n_k.shape != (self.N,):
            raise ValueError(f"n_k must have length N={self.N}, got shape {n_k.shape}")
        if self.n_k0 < 0 or np.any(n_k < 0):
            raise ValueError("populations must be non-negative")

    @classmethod
    def driven(cls, N: int, n0_per_site: float) -> "MagnonOccupation":
        """Only the k=0 mode is populated, with n(0) = n0_per_site * N."""
        return cls(N, n0_per_site * N, np.zeros(N))

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(self.N + 1) * (math.pi / self.N)

    @property
    def populations(self) -> np.ndarray:
        return np.concatenate(([self.n_k0], self.n_k))


@dataclass(frozen=True)
class CouplingResult:
    W_ij: float
    r_ij: float
    provenance: Literal["general", "reduced"]


def _mode_energies(occ: MagnonOccupation, params: LadderParameters, dispersion: Optional[Dispersion]):
    k = occ.wavenumbers
    if dispersion is None:
        return k, np.asarray(magnon_dispersion(params, k), dtype=float)
    return k, np.asarray(dispersion(k), dtype=float)


def _pair_terms(occ: MagnonOccupation, eps: np.ndarray) -> np.ndarray:
    """Matrix of (n_k - n_k')/(eps_k' - eps_k), zero on the diagonal."""
    n = occ.populations
    num = n[:, None] - n[None, :]
    den = eps[None, :] - eps[:, None]
    off = ~np.eye(len(n), dtype=bool)
    if np.any(den[off] == 0):
        i, j = np.argwhere((den == 0) & off)[0]
        raise DegenerateModeError(f"modes {i} and {j} are degenerate")
    out = np.zeros_like(den)
    out[off] = num[off] / den[off]
    return out


def w_ij_general(
    occ: MagnonOccupation,
    params: LadderParameters,
    hf: HyperfineParameters,
    r_ij: float,
    dispersion: Optional[Dispersion] = None,
) -> float:
    """Full double sum over mode pairs k != k', in Hz.

    ``dispersion`` overrides the cos-band (array of k -> energies in Hz).
    """
    if occ.N < 2:
        raise ValueError("need at least N=2 modes")
    k, eps = _mode_energies(occ, params, dispersion)
    terms = _pair_terms(occ, eps) * np.cos((k[:, None] - k[None, :]) * r_ij)
    pref = (hf.gamma_n_over_2pi * hf.A_par / occ.N) ** 2
    return pref * math.fsum(terms.ravel())


def lattice_sum(N: int, r: float) -> float:
    """Sum over n=1..N of cos(k_n r)/(cos k_n - 1), k_n = n*pi/N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    k = np.arange(1, N + 1) * (math.pi / N)
    return float(np.sum(np.cos(k * r) / (np.cos(k) - 1.0)))


def w_ij_k0(
    n0_per_site: float,
    params: LadderParameters,
    hf: HyperfineParameters,
    N: int,
    r_ij: float,
) -> float:
    """Reduced coupling when only k=0 magnons are excited, in Hz."""
    if N < 2:
        raise ValueError("need at least N=2 modes")
    if n0_per_site < 0:
        raise ValueError("n0_per_site must be non-negative")
    if params.bandwidth == 0:
        raise ZeroBandwidthError("j1 = 0: zero magnon bandwidth, coupling undefined")
    gA = hf.gamma_n_over_2pi * hf.A_par
    pref = 2 * gA**2 * n0_per_site / (params.bandwidth * N)
    return pref * lattice_sum(N, r_ij)


def range_profile(
    occ: MagnonOccupation,
    params: LadderParameters,
    hf: HyperfineParameters,
    r_max: int,
) -> list[CouplingResult]:
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    return [
        CouplingResult(w_ij_general(occ, params, hf, r), r, "general")
        for r in range(r_max + 1)
    ]


def chi_q(
    occ: MagnonOccupation,
    params: LadderParameters,
    q: float,
    dispersion: Optional[Dispersion] = None,
) -> float:
    """Zero-energy susceptibility for momentum transfer q, in 1/Hz.

    chi(q) = (1/N) sum_k (n_k - n_{k+q}) / (eps_{k+q} - eps_k), over grid
    pairs separated by q. q = 0 and off-grid q give 0.
    """
    m = q * occ.N / math.pi
    m_int = round(m)
    if m_int == 0 or abs(m - m_int) > 1e-9 or abs(m_int) > occ.N:
        return 0.0
    _, eps = _mode_energies(occ, params, dispersion)
    n = occ.populations
    i = np.arange(occ.N + 1)
    j = i + m_int
    ok = (j >= 0) & (j <= occ.N)
    i, j = i[ok], j[ok]
    den = eps[j] - eps[i]
    if np.any(den == 0):
        raise DegenerateModeError(f"degenerate mode pair at q={q}")
    return math.fsum((n[i] - n[j]) / den) / occ.N


def range_function(
    occ: MagnonOccupation,
    params: LadderParameters,
    hf: HyperfineParameters,
    r_ij: float,
    dispersion: Optional[Dispersion] = None,
) -> float:
    """Coupling rebuilt from chi(q): (gamma_n A_par)^2 / N * sum_q chi(q) e^{iqr}.

    The extra 1/N pairs with the 1/N inside chi so the result equals
    ``w_ij_general``.
    """
    qs = np.arange(-occ.N, occ.N + 1) * (math.pi / occ.N)
    chis = np.array([chi_q(occ, params, q, dispersion) for q in qs])
    total = np.sum(chis * np.exp(1j * qs * r_ij))
    gA = hf.gamma_n_over_2pi * hf.A_par
    return gA**2 / occ.N * float(total.real)


def thermal_occupation(
    params: LadderParameters, T: float, N: int, gap_ref: float
) -> MagnonOccupation:
    """Bose populations at temperature T (K) on top of a local gap ``gap_ref`` (Hz)."""
    if not T > 0:
        raise ValueError("temperature must be positive")
    k = np.arange(N + 1) * (math.pi / N)
    eps_abs = gap_ref + np.asarray(magnon_dispersion(params, k))
    if np.min(eps_abs) <= 0:
        raise GapClosedError("gapless input: band bottom at or below zero energy")
    with np.errstate(over="ignore"):
        n = 1.0 / np.expm1(eps_abs / kelvin_to_hz(T))
    return MagnonOccupation(N, float(n[0]), n[1:])
