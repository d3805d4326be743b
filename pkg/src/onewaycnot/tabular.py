"""Sign/symbol tables for entangled states and their (de)composition.

A table row is an algebraic sign plus one symbol per qubit, drawn from
{0, 1, +, -, psi, psi*}; the state is the sign-weighted sum of the row
tensor products.  The psi/psi* pair stands for a bound input state
a|0> + b|1> and its sign-flipped partner a|0> - b|1>; the pair is not
orthogonal for generic amplitudes, so decomposition uses a per-column
linear solve rather than projection.

Text format (also the golden-file format): a header line with the column
labels, then one line per row, pipe-separated, sign first:

    1|2|3
    +|psi|0|+
    +|psi*|1|-
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .statevector import InputQubitState, StateVector

ZERO_COEFFICIENT = 1e-12
EQUAL_MAGNITUDE_TOL = 1e-10
DEGENERATE_PRODUCT_TOL = 1e-12

_SQRT_HALF = 2.0**-0.5


class NotTabularError(ValueError):
    """The state's coefficients in the requested basis are not {0, +c, -c}."""

    def __init__(self, histogram: dict[str, int]):
        levels = ", ".join(f"{value} x{count}" for value, count in histogram.items())
        super().__init__(f"not tabular in this basis: coefficients {levels}")
        self.histogram = histogram


class BasisSymbol(Enum):
    ZERO = "0"
    ONE = "1"
    PLUS = "+"
    MINUS = "-"
    PSI_IN = "psi"
    PSI_IN_STAR = "psi*"

    @property
    def token(self) -> str:
        return self.value

    @property
    def needs_binding(self) -> bool:
        return self in (BasisSymbol.PSI_IN, BasisSymbol.PSI_IN_STAR)

    def vector(self, binding: InputQubitState | None = None) -> np.ndarray:
        if self is BasisSymbol.ZERO:
            return np.array([1.0, 0.0], dtype=complex)
        if self is BasisSymbol.ONE:
            return np.array([0.0, 1.0], dtype=complex)
        if self is BasisSymbol.PLUS:
            return np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex)
        if self is BasisSymbol.MINUS:
            return np.array([_SQRT_HALF, -_SQRT_HALF], dtype=complex)
        if binding is None:
            raise ValueError(f"symbol {self.token} needs a bound input state")
        if self is BasisSymbol.PSI_IN:
            return binding.vector()
        return binding.sign_flipped().vector()


_TOKEN_TO_SYMBOL = {symbol.token: symbol for symbol in BasisSymbol}

# Column kinds and the symbol pair each expands to, index 0 then 1.
COLUMN_KINDS: dict[str, tuple[BasisSymbol, BasisSymbol]] = {
    "computational": (BasisSymbol.ZERO, BasisSymbol.ONE),
    "hadamard": (BasisSymbol.PLUS, BasisSymbol.MINUS),
    "input-pair": (BasisSymbol.PSI_IN, BasisSymbol.PSI_IN_STAR),
}

_SYMBOL_TO_KIND = {
    symbol: kind for kind, pair in COLUMN_KINDS.items() for symbol in pair
}


@dataclass(frozen=True)
class TableRow:
    sign: int
    cells: tuple[BasisSymbol, ...]

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"row sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class Table:
    """Column labels, rows, and input bindings for psi-bearing columns."""

    labels: tuple[int, ...]
    rows: tuple[TableRow, ...]
    bindings: Mapping[int, InputQubitState] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate column labels")
        seen: set[tuple[BasisSymbol, ...]] = set()
        for row in self.rows:
            if len(row.cells) != len(self.labels):
                raise ValueError(
                    f"row has {len(row.cells)} cells, table has {len(self.labels)} columns"
                )
            if row.cells in seen:
                raise ValueError("duplicate row (same cells); rows must be distinct")
            seen.add(row.cells)
        stray = set(self.bindings) - set(self.labels)
        if stray:
            raise ValueError(f"bindings for unknown columns {sorted(stray)}")

    @property
    def qubit_count(self) -> int:
        return len(self.labels)

    def bind(self, bindings: Mapping[int, InputQubitState]) -> "Table":
        merged = dict(self.bindings)
        merged.update(bindings)
        return Table(self.labels, self.rows, merged)

    def with_global_sign_flipped(self) -> "Table":
        return Table(
            self.labels,
            tuple(TableRow(-row.sign, row.cells) for row in self.rows),
            self.bindings,
        )

    def row_set(self) -> frozenset[tuple[int, tuple[BasisSymbol, ...]]]:
        return frozenset((row.sign, row.cells) for row in self.rows)

    def inferred_assignment(self) -> "BasisAssignment":
        """Read the per-column basis off the symbols actually used."""
        columns = []
        for position, label in enumerate(self.labels):
            kinds = {_SYMBOL_TO_KIND[row.cells[position]] for row in self.rows}
            if len(kinds) != 1:
                raise ValueError(
                    f"column {label} mixes symbols from different bases: {sorted(kinds)}"
                )
            columns.append(ColumnBasis(kinds.pop(), self.bindings.get(label)))
        return BasisAssignment(tuple(columns))


@dataclass(frozen=True)
class ColumnBasis:
    kind: str
    binding: InputQubitState | None = None

    def __post_init__(self) -> None:
        if self.kind not in COLUMN_KINDS:
            raise ValueError(f"unknown column basis kind {self.kind!r}")

    def symbols(self) -> tuple[BasisSymbol, BasisSymbol]:
        return COLUMN_KINDS[self.kind]

    def basis_matrix(self) -> np.ndarray:
        """2x2 matrix with the two column states as columns."""
        s0, s1 = self.symbols()
        if self.kind == "input-pair":
            if self.binding is None:
                raise ValueError("input-pair column has no bound input state")
            product = abs(self.binding.alpha * self.binding.beta)
            if product < DEGENERATE_PRODUCT_TOL:
                raise ValueError(
                    "degenerate input pair: both amplitudes must be nonzero "
                    f"(|alpha*beta| = {product:.3e})"
                )
        return np.column_stack([s0.vector(self.binding), s1.vector(self.binding)])


@dataclass(frozen=True)
class BasisAssignment:
    columns: tuple[ColumnBasis, ...]

    @property
    def qubit_count(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class TableExpansion:
    state: StateVector
    common_coefficient: float


def expand_detailed(table: Table) -> TableExpansion:
    """Sum the sign-weighted row products; normalize and report the row weight."""
    if not table.rows:
        raise ValueError("cannot expand an empty table")
    n = table.qubit_count
    total = np.zeros(1 << n, dtype=complex)
    for row in table.rows:
        product = np.ones(1, dtype=complex)
        for label, symbol in zip(table.labels, row.cells):
            binding = table.bindings.get(label)
            if symbol.needs_binding and binding is None:
                raise ValueError(f"column {label} uses {symbol.token} but has no binding")
            product = np.kron(product, symbol.vector(binding))
        total += row.sign * product
    norm = float(np.linalg.norm(total))
    if norm == 0.0:
        raise ValueError("table rows cancel to the zero vector")
    return TableExpansion(StateVector(n, total / norm), 1.0 / norm)


def expand(table: Table) -> StateVector:
    return expand_detailed(table).state


def decompose(
    state: StateVector,
    assignment: BasisAssignment,
    labels: Sequence[int] | None = None,
) -> Table:
    """Rewrite a state as a table under a per-qubit basis assignment.

    Applies the inverse change of basis one axis at a time (cost
    O(n * 2**n)), then requires every coefficient to be 0 or +/-c for a
    single magnitude c.  The largest-index convention: the first nonzero
    coefficient gets sign +, fixing the table's global sign.
    """
    n = state.n
    if assignment.qubit_count != n:
        raise ValueError(
            f"assignment covers {assignment.qubit_count} qubits, state has {n}"
        )
    column_labels = tuple(labels) if labels is not None else tuple(range(1, n + 1))
    if len(column_labels) != n:
        raise ValueError(f"need {n} column labels, got {len(column_labels)}")

    coefficients = state.tensor_view().copy()
    for axis, column in enumerate(assignment.columns):
        inverse = np.linalg.inv(column.basis_matrix())
        coefficients = np.moveaxis(
            np.tensordot(inverse, coefficients, axes=([1], [axis])), 0, axis
        )
    flat = coefficients.reshape(-1)

    magnitudes = np.abs(flat)
    nonzero = magnitudes > ZERO_COEFFICIENT
    if not nonzero.any():
        raise NotTabularError({"0": int(flat.size)})
    scale = float(magnitudes[nonzero].max())
    if np.any(np.abs(magnitudes[nonzero] - scale) > EQUAL_MAGNITUDE_TOL):
        histogram: dict[str, int] = {}
        for value in np.round(magnitudes[nonzero], 12):
            key = f"{value:.12g}"
            histogram[key] = histogram.get(key, 0) + 1
        raise NotTabularError(dict(sorted(histogram.items())))

    # factor out the global phase so the first surviving row is +
    first = int(np.argmax(nonzero))
    global_phase = flat[first] / abs(flat[first])
    signed = flat / (global_phase * scale)
    deviation = np.abs(signed[nonzero] - np.sign(signed[nonzero].real))
    if np.any(deviation > EQUAL_MAGNITUDE_TOL):
        histogram = {}
        for value in signed[nonzero]:
            key = str(np.round(complex(value), 8))
            histogram[key] = histogram.get(key, 0) + 1
        raise NotTabularError(dict(sorted(histogram.items())))

    bindings = {
        label: column.binding
        for label, column in zip(column_labels, assignment.columns)
        if column.binding is not None
    }
    rows = []
    for index in np.flatnonzero(nonzero):
        sign = 1 if signed[index].real > 0 else -1
        cells = []
        for axis, column in enumerate(assignment.columns):
            bit = (index >> (n - 1 - axis)) & 1
            cells.append(column.symbols()[bit])
        rows.append(TableRow(sign, tuple(cells)))
    return Table(column_labels, tuple(rows), bindings)


def render(table: Table) -> str:
    lines = ["|".join(str(label) for label in table.labels)]
    for row in table.rows:
        sign = "+" if row.sign > 0 else "-"
        lines.append("|".join([sign, *(cell.token for cell in row.cells)]))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Table:
    """Inverse of :func:`render`; '#' comment lines and blanks are skipped."""
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ValueError("empty table text")
    try:
        labels = tuple(int(token) for token in lines[0].split("|"))
    except ValueError:
        raise ValueError(f"header must list integer column labels, got {lines[0]!r}") from None
    rows = []
    for line in lines[1:]:
        tokens = line.split("|")
        if len(tokens) != len(labels) + 1:
            raise ValueError(
                f"ragged row: expected sign + {len(labels)} cells, got {line!r}"
            )
        if tokens[0] not in ("+", "-"):
            raise ValueError(f"row must start with '+' or '-', got {tokens[0]!r}")
        cells = []
        for token in tokens[1:]:
            if token not in _TOKEN_TO_SYMBOL:
                raise ValueError(f"unknown symbol {token!r}")
            cells.append(_TOKEN_TO_SYMBOL[token])
        rows.append(TableRow(1 if tokens[0] == "+" else -1, tuple(cells)))
    return Table(labels, tuple(rows))


@dataclass(frozen=True)
class TableDiff:
    status: str  # equal | equal-up-to-global-sign | different
    only_in_first: tuple[TableRow, ...]
    only_in_second: tuple[TableRow, ...]

    @property
    def equal_as_states(self) -> bool:
        return self.status in ("equal", "equal-up-to-global-sign")


def tables_equal(first: Table, second: Table) -> TableDiff:
    """Row-order-insensitive comparison; signs may differ globally."""
    if first.labels != second.labels:
        raise ValueError(f"label mismatch: {first.labels} vs {second.labels}")
    a, b = first.row_set(), second.row_set()
    if a == b:
        return TableDiff("equal", (), ())
    if a == second.with_global_sign_flipped().row_set():
        return TableDiff("equal-up-to-global-sign", (), ())
    only_first = sorted(a - b, key=lambda r: tuple(c.token for c in r[1]))
    only_second = sorted(b - a, key=lambda r: tuple(c.token for c in r[1]))
    return TableDiff(
        "different",
        tuple(TableRow(sign, cells) for sign, cells in only_first),
        tuple(TableRow(sign, cells) for sign, cells in only_second),
    )
