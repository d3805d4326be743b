"""Pauli strings over labeled qubits with exact {+1, -1, +i, -i} phases.

A string stores only its non-identity letters, keyed by 1-based qubit
label.  Multiplication tracks the phase through the single-qubit algebra
(X*Y = iZ and cyclic; X*Z = -iY and anticyclic), so products of stabilizer
generators come out with their sign intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .statevector import StateVector, check_label

PAULI_MATRICES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)
_PHASE_TOKENS = {1 + 0j: "+", -1 + 0j: "-", 1j: "+i", -1j: "-i"}

# (left, right) -> (power of i, letter)
_PRODUCT: dict[tuple[str, str], tuple[int, str]] = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}


@dataclass(frozen=True)
class PauliString:
    """A phase in {+1, -1, +i, -i} times a tensor product of Pauli letters."""

    phase: complex = 1 + 0j
    letters: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        phase = complex(self.phase)
        if phase not in _PHASES:
            raise ValueError(f"phase must be one of +1, -1, +i, -i; got {phase!r}")
        seen: dict[int, str] = {}
        for label, letter in self.letters:
            if letter not in ("X", "Y", "Z", "I"):
                raise ValueError(f"unknown Pauli letter {letter!r}")
            if label < 1:
                raise ValueError(f"qubit label {label} must be >= 1")
            if label in seen:
                raise ValueError(f"duplicate qubit label {label}")
            seen[label] = letter
        cleaned = tuple(sorted((q, l) for q, l in seen.items() if l != "I"))
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "letters", cleaned)

    @classmethod
    def from_map(cls, mapping: Mapping[int, str], phase: complex = 1) -> "PauliString":
        return cls(phase, tuple(mapping.items()))

    @classmethod
    def identity(cls) -> "PauliString":
        return cls()

    def letter(self, label: int) -> str:
        for q, l in self.letters:
            if q == label:
                return l
        return "I"

    def support(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.letters)

    @property
    def weight(self) -> int:
        return len(self.letters)

    def relabeled(self, mapping: Mapping[int, int] | Callable[[int], int]) -> "PauliString":
        move = mapping.__getitem__ if isinstance(mapping, Mapping) else mapping
        return PauliString(self.phase, tuple((move(q), l) for q, l in self.letters))

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply_pauli_strings(self, other)

    def to_matrix(self, n: int) -> np.ndarray:
        """Dense 2**n x 2**n matrix; labels above ``n`` are rejected."""
        if self.letters and self.letters[-1][0] > n:
            raise ValueError(f"string touches qubit {self.letters[-1][0]} > register size {n}")
        matrix = np.ones((1, 1), dtype=complex)
        for label in range(1, n + 1):
            matrix = np.kron(matrix, PAULI_MATRICES[self.letter(label)])
        return self.phase * matrix

    def __str__(self) -> str:
        body = " ".join(f"{l}{q}" for q, l in self.letters) or "I"
        return f"{_PHASE_TOKENS[self.phase]} {body}"


def multiply_pauli_strings(p: PauliString, q: PauliString) -> PauliString:
    """Product p*q with exact phase bookkeeping."""
    left = dict(p.letters)
    right = dict(q.letters)
    power = 0
    combined: list[tuple[int, str]] = []
    for label in sorted(set(left) | set(right)):
        step, letter = _PRODUCT[left.get(label, "I"), right.get(label, "I")]
        power += step
        if letter != "I":
            combined.append((label, letter))
    phase = p.phase * q.phase * _PHASES[power % 4]
    return PauliString(phase, tuple(combined))


def apply_pauli_string(state: StateVector, p: PauliString) -> StateVector:
    """Return p|psi>, phase factor included."""
    for label, _ in p.letters:
        check_label(state, label)
    tensor = state.tensor_view().copy()
    for label, letter in p.letters:
        index0: list[object] = [slice(None)] * state.n
        index1: list[object] = [slice(None)] * state.n
        index0[label - 1] = 0
        index1[label - 1] = 1
        sl0, sl1 = tuple(index0), tuple(index1)
        if letter == "X":
            tensor[sl0], tensor[sl1] = tensor[sl1].copy(), tensor[sl0].copy()
        elif letter == "Y":
            tensor[sl0], tensor[sl1] = -1j * tensor[sl1], 1j * tensor[sl0].copy()
        else:  # Z
            tensor[sl1] *= -1.0
    return StateVector(state.n, p.phase * tensor.reshape(-1))
