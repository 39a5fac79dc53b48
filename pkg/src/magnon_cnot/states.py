"""Two-qubit (control, target) states and single-qubit rotation operators.

Basis order |c t> = |00>, |01>, |10>, |11>, with 0 = spin up (+Z).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

CONTROL, TARGET = 0, 1

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

BASIS_LABELS = ("00", "01", "10", "11")


class Axis(str, Enum):
    PLUS_X = "+X"
    MINUS_X = "-X"
    PLUS_Y = "+Y"
    MINUS_Y = "-Y"
    PLUS_Z = "+Z"
    MINUS_Z = "-Z"

    @property
    def pauli(self) -> np.ndarray:
        base = {"X": SX, "Y": SY, "Z": SZ}[self.value[1]]
        return base if self.value[0] == "+" else -base


def rotation_matrix(axis: Axis, angle: float) -> np.ndarray:
    """exp(-i angle sigma_axis / 2), right-handed."""
    axis = Axis(axis)
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * axis.pauli


def on_qubit(op: np.ndarray, qubit: int) -> np.ndarray:
    if qubit == CONTROL:
        return np.kron(op, I2)
    if qubit == TARGET:
        return np.kron(I2, op)
    raise ValueError(f"qubit must be 0 (control) or 1 (target), got {qubit!r}")


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(4)
        object.__setattr__(self, "amplitudes", a)
        norm = float(np.vdot(a, a).real)
        if abs(norm - 1) > 1e-10:
            raise ValueError(f"state not normalized (norm^2 = {norm!r})")

    @classmethod
    def basis(cls, control: int, target: int) -> "TwoQubitState":
        a = np.zeros(4, dtype=complex)
        a[2 * control + target] = 1
        return cls(a)

    @classmethod
    def product(cls, control: np.ndarray, target: np.ndarray) -> "TwoQubitState":
        return cls(np.kron(control, target))

    def apply(self, U: np.ndarray) -> "TwoQubitState":
        return TwoQubitState(U @ self.amplitudes)

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(self.populations()))

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> "DensityState":
        return DensityState(self.density())

    def reduced(self, qubit: int) -> np.ndarray:
        return reduced_density(self.density(), qubit)


@dataclass(frozen=True, eq=False)
class DensityState:
    """Mixed two-qubit state, produced once a relaxation channel acts."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex).reshape(4, 4)
        object.__setattr__(self, "rho", rho)
        tr = np.trace(rho).real
        if abs(tr - 1) > 1e-10:
            raise ValueError(f"density matrix trace {tr!r} != 1")

    def apply(self, U: np.ndarray) -> "DensityState":
        return DensityState(U @ self.rho @ U.conj().T)

    def populations(self) -> np.ndarray:
        return np.diag(self.rho).real.copy()

    def norm(self) -> float:
        return float(np.trace(self.rho).real)

    def density(self) -> np.ndarray:
        return self.rho

    def to_density(self) -> "DensityState":
        return self

    def reduced(self, qubit: int) -> np.ndarray:
        return reduced_density(self.rho, qubit)


def reduced_density(rho: np.ndarray, qubit: int) -> np.ndarray:
    r = rho.reshape(2, 2, 2, 2)
    if qubit == CONTROL:
        return np.einsum("atbt->ab", r)
    return np.einsum("cacb->ab", r)


def purity(rho: np.ndarray) -> float:
    return float(np.trace(rho @ rho).real)
