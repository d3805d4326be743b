"""Dense complex state-vector engine for small registers of labeled qubits.

Qubit labels are 1-based and qubit 1 occupies the most significant bit of
the amplitude index: the basis state |z1 z2 ... zn> sits at index
sum(z_k * 2**(n - k)).  Reshaping ``amps`` to shape (2,) * n therefore puts
qubit k on axis k - 1, which every kernel in this package relies on.

All public operations return new states and keep the norm at 1; state
comparisons are phase-insensitive (see :func:`equal_up_to_global_phase`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 16
NORM_TOL = 1e-12
DEFAULT_STATE_TOL = 1e-10
PURITY_TOL = 1e-10

_SQRT_HALF = 2.0**-0.5


class EntangledRemainderError(ValueError):
    """Subsystem extraction failed because the remainder is not rank one."""

    def __init__(self, purity: float):
        super().__init__(
            "kept subsystem is not in a product with the remainder "
            f"(reduced-state purity {purity:.12g})"
        )
        self.purity = purity


@dataclass(frozen=True)
class InputQubitState:
    """One-qubit state alpha|0> + beta|1>."""

    alpha: complex
    beta: complex

    def norm(self) -> float:
        return float(np.sqrt(abs(self.alpha) ** 2 + abs(self.beta) ** 2))

    def require_normalized(self, tol: float = NORM_TOL) -> None:
        norm = self.norm()
        if abs(norm - 1.0) > tol:
            raise ValueError(f"input qubit state has norm {norm!r}, expected 1")

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def sign_flipped(self) -> "InputQubitState":
        """The partner state alpha|0> - beta|1> (not the complex conjugate)."""
        return InputQubitState(self.alpha, -self.beta)


ZERO = InputQubitState(1.0, 0.0)
ONE = InputQubitState(0.0, 1.0)
PLUS = InputQubitState(_SQRT_HALF, _SQRT_HALF)
MINUS = InputQubitState(_SQRT_HALF, -_SQRT_HALF)


@dataclass
class StateVector:
    """2**n complex amplitudes over qubits labeled 1..n."""

    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count {self.n} outside supported range 1..{MAX_QUBITS}")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got shape {amps.shape}")
        self.amps = amps

    @property
    def dim(self) -> int:
        return 1 << self.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def tensor_view(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit (qubit k on axis k - 1)."""
        return self.amps.reshape((2,) * self.n)


def check_label(state_or_n: StateVector | int, label: int) -> None:
    n = state_or_n.n if isinstance(state_or_n, StateVector) else state_or_n
    if not 1 <= label <= n:
        raise ValueError(f"qubit label {label} outside register 1..{n}")


def _renormalized(state: StateVector) -> StateVector:
    norm = state.norm()
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return StateVector(state.n, state.amps / norm)


def make_product_state(factors: Sequence[InputQubitState]) -> StateVector:
    """Tensor product of one-qubit states; the first factor is qubit 1."""
    if not 1 <= len(factors) <= MAX_QUBITS:
        raise ValueError(f"need between 1 and {MAX_QUBITS} factors, got {len(factors)}")
    for position, factor in enumerate(factors, start=1):
        try:
            factor.require_normalized()
        except ValueError as exc:
            raise ValueError(f"factor for qubit {position}: {exc}") from None
    amps = np.ones(1, dtype=complex)
    for factor in factors:
        amps = np.kron(amps, factor.vector())
    return _renormalized(StateVector(len(factors), amps))


def apply_controlled_phase(state: StateVector, a: int, b: int) -> StateVector:
    """Negate every amplitude whose bits at qubits ``a`` and ``b`` are both 1.

    This is the symmetric two-qubit entangler used to build cluster states;
    the operator is diagonal, real, and its own inverse.
    """
    if a == b:
        raise ValueError("controlled phase needs two distinct qubits")
    check_label(state, a)
    check_label(state, b)
    tensor = state.tensor_view().copy()
    index: list[object] = [slice(None)] * state.n
    index[a - 1] = 1
    index[b - 1] = 1
    tensor[tuple(index)] *= -1.0
    return StateVector(state.n, tensor.reshape(-1))


@dataclass(frozen=True)
class PhaseComparison:
    """Outcome of a phase-insensitive state comparison.

    ``phase`` is the angle theta that minimizes ||u - exp(i theta) v||;
    ``residual`` is the max-norm residual at that angle.
    """

    equal: bool
    phase: float
    residual: float


def equal_up_to_global_phase(
    u: StateVector, v: StateVector, tol: float = DEFAULT_STATE_TOL
) -> PhaseComparison:
    """Compare two states up to a global phase factor."""
    if u.n != v.n:
        raise ValueError(f"dimension mismatch: {u.n} vs {v.n} qubits")
    overlap = np.vdot(v.amps, u.amps)
    factor = overlap / abs(overlap) if abs(overlap) > 1e-300 else 1.0 + 0.0j
    residual = float(np.max(np.abs(u.amps - factor * v.amps)))
    return PhaseComparison(residual <= tol, float(np.angle(factor)), residual)


def extract_subsystem(state: StateVector, keep: Iterable[int]) -> StateVector:
    """Return the normalized state of the kept qubits.

    Requires the state to factor as (kept subsystem) x (rank-one remainder);
    raises :class:`EntangledRemainderError` with the measured purity if not.
    The kept qubits appear in ascending label order in the result.
    """
    kept = sorted(set(keep))
    if not kept:
        raise ValueError("must keep at least one qubit")
    for label in kept:
        check_label(state, label)
    if len(kept) == state.n:
        return _renormalized(state.copy())

    rest = [q for q in range(1, state.n + 1) if q not in kept]
    axes = [q - 1 for q in kept] + [q - 1 for q in rest]
    matrix = state.tensor_view().transpose(axes).reshape(1 << len(kept), -1)
    rho = matrix @ matrix.conj().T
    trace = float(np.real(np.trace(rho)))
    purity = float(np.real(np.trace(rho @ rho))) / trace**2
    if purity < 1.0 - PURITY_TOL:
        raise EntangledRemainderError(purity)

    _, vectors = np.linalg.eigh(rho)
    vec = vectors[:, -1]
    # fix the arbitrary eigenvector phase: largest component real positive
    pivot = int(np.argmax(np.abs(vec)))
    vec = vec * (vec[pivot].conjugate() / abs(vec[pivot]))
    return _renormalized(StateVector(len(kept), vec))
