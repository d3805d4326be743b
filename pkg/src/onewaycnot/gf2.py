"""Fitting affine boolean functions by Gaussian elimination over GF(2)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AffineFit:
    """y ~ constant + sum(coefficients * x) mod 2, fitted over all rows."""

    coefficients: tuple[int, ...]
    constant: int
    violations: int
    rank: int

    @property
    def consistent(self) -> bool:
        return self.violations == 0

    def evaluate(self, bits: np.ndarray) -> np.ndarray:
        bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
        coefficients = np.asarray(self.coefficients, dtype=np.uint8)
        return (bits @ coefficients + self.constant) % 2


def fit_affine(inputs: np.ndarray, outputs: np.ndarray) -> AffineFit:
    """Solve the (usually overdetermined) affine system and count violations.

    ``inputs`` is an (m, k) 0/1 matrix, ``outputs`` an (m,) 0/1 vector.  The
    fit solves for k coefficients plus a constant; ``violations`` is the
    number of rows of the original system the solution fails to reproduce,
    so a nonzero count means no affine form exists.
    """
    inputs = np.asarray(inputs, dtype=np.uint8) % 2
    outputs = np.asarray(outputs, dtype=np.uint8) % 2
    if inputs.ndim != 2 or outputs.shape != (inputs.shape[0],):
        raise ValueError("inputs must be (m, k) and outputs (m,)")
    m, k = inputs.shape
    if m == 0:
        raise ValueError("need at least one equation")

    augmented = np.concatenate(
        [inputs, np.ones((m, 1), dtype=np.uint8), outputs[:, None]], axis=1
    )
    unknowns = k + 1
    pivot_rows: list[tuple[int, int]] = []  # (column, row)
    row = 0
    for column in range(unknowns):
        pivots = np.flatnonzero(augmented[row:, column]) + row
        if pivots.size == 0:
            continue
        pivot = pivots[0]
        if pivot != row:
            augmented[[row, pivot]] = augmented[[pivot, row]]
        mask = augmented[:, column].astype(bool)
        mask[row] = False
        augmented[mask] ^= augmented[row]
        pivot_rows.append((column, row))
        row += 1
        if row == m:
            break

    solution = np.zeros(unknowns, dtype=np.uint8)
    for column, pivot in pivot_rows:
        solution[column] = augmented[pivot, -1]

    predicted = (inputs @ solution[:k] + solution[k]) % 2
    violations = int(np.count_nonzero(predicted != outputs))
    return AffineFit(
        coefficients=tuple(int(c) for c in solution[:k]),
        constant=int(solution[k]),
        violations=violations,
        rank=len(pivot_rows),
    )
