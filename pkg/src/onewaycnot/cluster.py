"""Cluster graphs, cluster-state construction, and stabilizer checks.

A cluster state is built by preparing every vertex in |+> (or a bound
input state) and applying the controlled-phase entangler across every
edge.  Each vertex ``a`` then carries a stabilizer: X on ``a`` and Z on
each neighbor, and the no-input cluster state is a +1 eigenstate of all
of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .pauli import PauliString, apply_pauli_string
from .statevector import (
    MAX_QUBITS,
    InputQubitState,
    PLUS,
    StateVector,
    apply_controlled_phase,
    make_product_state,
)

# Neighbor offsets of the regular 1-, 2-, and 3-dimensional lattices.
# Kept as data for reference; only 1-d chains and the explicit CNOT
# geometry below are ever instantiated.
LATTICE_NEIGHBOR_OFFSETS: dict[int, tuple[tuple[int, ...], ...]] = {
    1: ((1,),),
    2: ((1, 0), (0, 1)),
    3: ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
}


@dataclass(frozen=True)
class ClusterGraph:
    """Undirected graph of labeled qubits; edges fix the entangler pairs."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if a not in self.vertices or b not in self.vertices:
                raise ValueError(f"edge ({a}, {b}) has an endpoint outside the vertex set")
            if a > b:
                raise ValueError(f"edge ({a}, {b}) not stored with ascending endpoints")

    @classmethod
    def from_edges(
        cls, edges: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None
    ) -> "ClusterGraph":
        normalized = frozenset((min(a, b), max(a, b)) for a, b in edges)
        vertex_set = set(vertices) if vertices is not None else set()
        for a, b in normalized:
            vertex_set.update((a, b))
        return cls(frozenset(vertex_set), normalized)

    @classmethod
    def chain(cls, first: int, last: int) -> "ClusterGraph":
        """Linear chain first - (first+1) - ... - last."""
        if last < first:
            raise ValueError("chain endpoints out of order")
        if last == first:
            return cls(frozenset({first}), frozenset())
        return cls.from_edges((k, k + 1) for k in range(first, last))

    def neighbors(self, a: int) -> tuple[int, ...]:
        if a not in self.vertices:
            raise ValueError(f"vertex {a} not in graph")
        return tuple(sorted({x + y - a for x, y in self.edges if a in (x, y)}))

    def register_labels(self) -> tuple[int, ...]:
        """Vertices in ascending order; position k in a register is labels[k-1]."""
        return tuple(sorted(self.vertices))

    def register_index(self, label: int) -> int:
        """1-based register position of a vertex."""
        labels = self.register_labels()
        try:
            return labels.index(label) + 1
        except ValueError:
            raise ValueError(f"vertex {label} not in graph") from None

    def induced(self, vertices: Iterable[int]) -> "ClusterGraph":
        kept = frozenset(vertices)
        missing = kept - self.vertices
        if missing:
            raise ValueError(f"vertices {sorted(missing)} not in graph")
        return ClusterGraph(
            kept, frozenset(e for e in self.edges if e[0] in kept and e[1] in kept)
        )


# The 15-qubit CNOT geometry: control wire 1..7, target wire 9..15,
# bridged through vertex 8 (8 is adjacent only to 4 and 12).
CNOT15 = ClusterGraph.from_edges(
    [
        (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7),
        (4, 8), (8, 12),
        (9, 10), (10, 11), (11, 12), (12, 13), (13, 14), (14, 15),
    ]
)


@dataclass(frozen=True)
class ClusterAssignment:
    """A graph plus input states; unbound vertices start in |+>."""

    graph: ClusterGraph
    inputs: Mapping[int, InputQubitState] = field(default_factory=dict)

    def __post_init__(self) -> None:
        stray = set(self.inputs) - self.graph.vertices
        if stray:
            raise ValueError(f"input qubits {sorted(stray)} not in graph")


def build_cluster_state(assignment: ClusterAssignment) -> StateVector:
    """Entangle the assigned product state across every edge of the graph.

    The entanglers commute, so the edge order cannot matter; they are
    applied in sorted order for reproducibility.
    """
    graph = assignment.graph
    labels = graph.register_labels()
    if len(labels) > MAX_QUBITS:
        raise ValueError(f"graph has {len(labels)} vertices, register limit is {MAX_QUBITS}")
    state = make_product_state([assignment.inputs.get(v, PLUS) for v in labels])
    for a, b in sorted(graph.edges):
        state = apply_controlled_phase(state, graph.register_index(a), graph.register_index(b))
    return state


def stabilizer(graph: ClusterGraph, a: int) -> PauliString:
    """The vertex stabilizer: X at ``a``, Z at each neighbor, phase +1."""
    if a not in graph.vertices:
        raise ValueError(f"vertex {a} not in graph")
    return PauliString(1, ((a, "X"),) + tuple((b, "Z") for b in graph.neighbors(a)))


@dataclass(frozen=True)
class StabilizerCheck:
    vertex: int
    operator: PauliString
    residual: float


@dataclass(frozen=True)
class StabilizerReport:
    checks: tuple[StabilizerCheck, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(c.residual <= self.tolerance for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max(c.residual for c in self.checks)


def verify_stabilizers(
    state: StateVector, graph: ClusterGraph, tol: float = 1e-12
) -> StabilizerReport:
    """Per-vertex residual of the stabilizer eigenvalue equations on ``state``."""
    if state.n != len(graph.vertices):
        raise ValueError(
            f"state has {state.n} qubits but graph has {len(graph.vertices)} vertices"
        )
    checks = []
    for a in graph.register_labels():
        operator = stabilizer(graph, a)
        transformed = apply_pauli_string(state, operator.relabeled(graph.register_index))
        residual = float(np.max(np.abs(transformed.amps - state.amps)))
        checks.append(StabilizerCheck(a, operator, residual))
    return StabilizerReport(tuple(checks), tol)


@dataclass(frozen=True)
class ConjugationCheck:
    description: str
    residual: float


@dataclass(frozen=True)
class ConjugationReport:
    checks: tuple[ConjugationCheck, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(c.residual <= self.tolerance for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max(c.residual for c in self.checks)


def _dense_entangler(n: int, a: int, b: int) -> np.ndarray:
    diag = np.ones(1 << n)
    for index in range(1 << n):
        if (index >> (n - a)) & 1 and (index >> (n - b)) & 1:
            diag[index] = -1.0
    return np.diag(diag).astype(complex)


def conjugation_audit(graph: ClusterGraph, tol: float = 1e-12) -> ConjugationReport:
    """Dense-matrix check of how the entangler conjugates single-qubit Paulis.

    Verifies, per edge: X on either endpoint picks up Z on the other, and
    X/Z on bystander qubits are untouched.  Verifies, for the whole graph:
    conjugating X at a vertex yields exactly that vertex's stabilizer.
    Note the endpoint identity is checked in its symmetric reading for
    both endpoints (the published statement repeats one side twice).
    """
    labels = graph.register_labels()
    n = len(labels)
    if n > 5:
        raise ValueError("dense conjugation audit supports at most 5 vertices")
    position = graph.register_index

    def dense(p: PauliString) -> np.ndarray:
        return p.relabeled(position).to_matrix(n)

    checks = []
    for a, b in sorted(graph.edges):
        entangler = _dense_entangler(n, position(a), position(b))
        for x_vertex, z_vertex in ((a, b), (b, a)):
            lhs = entangler @ dense(PauliString(1, ((x_vertex, "X"),))) @ entangler.conj().T
            rhs = dense(PauliString(1, ((x_vertex, "X"), (z_vertex, "Z"))))
            checks.append(
                ConjugationCheck(
                    f"edge ({a},{b}): X{x_vertex} -> X{x_vertex} Z{z_vertex}",
                    float(np.max(np.abs(lhs - rhs))),
                )
            )
        for c in labels:
            if c in (a, b):
                continue
            for letter in ("X", "Z"):
                op = dense(PauliString(1, ((c, letter),)))
                lhs = entangler @ op @ entangler.conj().T
                checks.append(
                    ConjugationCheck(
                        f"edge ({a},{b}): {letter}{c} unchanged",
                        float(np.max(np.abs(lhs - op))),
                    )
                )

    full = np.eye(1 << n, dtype=complex)
    for a, b in sorted(graph.edges):
        full = _dense_entangler(n, position(a), position(b)) @ full
    for a in labels:
        lhs = full @ dense(PauliString(1, ((a, "X"),))) @ full.conj().T
        rhs = dense(stabilizer(graph, a))
        checks.append(
            ConjugationCheck(
                f"graph: X{a} -> stabilizer of {a}",
                float(np.max(np.abs(lhs - rhs))),
            )
        )
    return ConjugationReport(tuple(checks), tol)


def parse_edge_list(text: str) -> ClusterGraph:
    """Parse the plain-text edge format: one ``a b`` pair per line.

    Blank lines and lines starting with ``#`` are skipped.
    """
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'a b', got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: labels must be integers, got {raw!r}") from None
        if a < 1 or b < 1:
            raise ValueError(f"line {lineno}: labels must be >= 1")
        edges.append((a, b))
    if not edges:
        raise ValueError("edge list is empty")
    return ClusterGraph.from_edges(edges)


def render_edge_list(graph: ClusterGraph) -> str:
    return "\n".join(f"{a} {b}" for a, b in sorted(graph.edges)) + "\n"
