"""Projective single-qubit measurements with forced or seeded outcomes.

Outcome bit convention: s = 0 is the +1 eigenvector of the measured axis,
so the measured eigenvalue is (-1)**s.  Measured qubits stay in the
register, projected onto their eigenstate; nothing is traced out until a
subsystem is explicitly extracted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .statevector import StateVector, check_label

MIN_BRANCH_PROBABILITY = 1e-12

_SQRT_HALF = 2.0**-0.5


class MeasurementBasis(Enum):
    X = "X"
    Y = "Y"
    Z = "Z"

    def eigenvector(self, outcome: int) -> np.ndarray:
        """Eigenvector for outcome bit s (s=0 <-> eigenvalue +1)."""
        if outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {outcome}")
        sign = 1.0 if outcome == 0 else -1.0
        if self is MeasurementBasis.X:
            return np.array([_SQRT_HALF, sign * _SQRT_HALF], dtype=complex)
        if self is MeasurementBasis.Y:
            return np.array([_SQRT_HALF, sign * 1j * _SQRT_HALF], dtype=complex)
        return np.array([1.0, 0.0], dtype=complex) if outcome == 0 else np.array(
            [0.0, 1.0], dtype=complex
        )


class ImpossibleBranchError(ValueError):
    """A forced outcome has (numerically) zero Born probability."""

    def __init__(self, qubit: int, outcome: int, probability: float):
        super().__init__(
            f"impossible branch: outcome {outcome} on qubit {qubit} "
            f"has probability {probability:.3e}"
        )
        self.qubit = qubit
        self.outcome = outcome
        self.probability = probability


@dataclass(frozen=True)
class ForcedOutcomes:
    """Fixed outcome bit per measured qubit."""

    bits: Mapping[int, int]

    @classmethod
    def from_bit_string(cls, bits: str, order: Sequence[int]) -> "ForcedOutcomes":
        if len(bits) != len(order) or any(c not in "01" for c in bits):
            raise ValueError(
                f"expected {len(order)} outcome bits (characters 0/1), got {bits!r}"
            )
        return cls(dict(zip(order, (int(c) for c in bits))))

    def bit(self, qubit: int) -> int:
        try:
            return self.bits[qubit]
        except KeyError:
            raise ValueError(f"no forced outcome supplied for qubit {qubit}") from None


@dataclass(frozen=True)
class SampledOutcomes:
    """Outcomes drawn from a seeded PCG64 generator; same seed, same record."""

    seed: int


OutcomePolicy = ForcedOutcomes | SampledOutcomes


@dataclass(frozen=True)
class MeasurementStep:
    qubit: int
    basis: MeasurementBasis
    outcome: int
    probability: float


@dataclass(frozen=True)
class OutcomeRecord:
    """Ordered log of measurement steps."""

    steps: tuple[MeasurementStep, ...] = ()

    def bit(self, qubit: int) -> int:
        for step in self.steps:
            if step.qubit == qubit:
                return step.outcome
        raise ValueError(f"missing outcome bit for qubit {qubit}")

    def bits(self) -> dict[int, int]:
        return {step.qubit: step.outcome for step in self.steps}

    def probabilities(self) -> tuple[float, ...]:
        return tuple(step.probability for step in self.steps)


def measure(
    state: StateVector,
    qubit: int,
    basis: MeasurementBasis,
    outcome: int | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[int, float, StateVector]:
    """Measure one qubit; returns (outcome bit, probability, post-state).

    With ``outcome`` given the branch is forced (rejected if its probability
    is below 1e-12); otherwise ``rng`` draws it from the Born rule.
    """
    check_label(state, qubit)
    tensor = np.moveaxis(state.tensor_view(), qubit - 1, 0)
    a0, a1 = tensor[0], tensor[1]

    def branch(s: int) -> tuple[np.ndarray, np.ndarray, float]:
        vec = basis.eigenvector(s)
        overlap = vec[0].conjugate() * a0 + vec[1].conjugate() * a1
        return vec, overlap, float(np.sum(np.abs(overlap) ** 2))

    if outcome is None:
        if rng is None:
            raise ValueError("measure needs either a forced outcome or an rng")
        _, _, p0 = branch(0)
        outcome = 0 if rng.random() < p0 else 1
    elif outcome not in (0, 1):
        raise ValueError(f"forced outcome must be 0 or 1, got {outcome}")

    vec, overlap, probability = branch(outcome)
    if probability < MIN_BRANCH_PROBABILITY:
        raise ImpossibleBranchError(qubit, outcome, probability)

    post = np.empty_like(tensor)
    post[0] = vec[0] * overlap
    post[1] = vec[1] * overlap
    post = np.moveaxis(post, 0, qubit - 1) / np.sqrt(probability)
    return outcome, min(probability, 1.0), StateVector(state.n, post.reshape(-1))


def measure_pattern(
    state: StateVector,
    pattern: Sequence[tuple[int, MeasurementBasis]],
    policy: OutcomePolicy,
) -> tuple[OutcomeRecord, StateVector]:
    """Measure the pattern qubits in the given order under one policy."""
    qubits = [q for q, _ in pattern]
    if len(set(qubits)) != len(qubits):
        raise ValueError("pattern qubits must be distinct")
    rng = np.random.default_rng(policy.seed) if isinstance(policy, SampledOutcomes) else None

    steps = []
    current = state
    for qubit, basis in pattern:
        forced = policy.bit(qubit) if isinstance(policy, ForcedOutcomes) else None
        outcome, probability, current = measure(current, qubit, basis, forced, rng)
        steps.append(MeasurementStep(qubit, basis, outcome, probability))
    return OutcomeRecord(tuple(steps)), current
