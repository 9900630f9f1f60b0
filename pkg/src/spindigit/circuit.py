"""Circuit IR over the {U3, CNOT} gate set with explicit parallel layers.

Gates within a layer act on pairwise-disjoint qubits, so in-layer order is
irrelevant for execution. OpenQASM 2.0 import/export covers exactly the
emitted subset (header, include, one qreg, u3, cx).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import QasmParseError, UnsupportedQasmError, ValidationError
from .statevector import QuantumState, U3Params, apply_cnot, apply_u3

U3_KIND = "u3"
CNOT_KIND = "cx"


class LayerPolicy(Enum):
    NEW_LAYER = "new_layer"
    EARLIEST_COMPATIBLE = "earliest_compatible"


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    params: U3Params | None = None
    tag: str = ""

    def __post_init__(self):
        if self.kind == U3_KIND:
            if len(self.qubits) != 1 or self.params is None:
                raise ValidationError("u3 gate needs one qubit and parameters")
        elif self.kind == CNOT_KIND:
            if len(self.qubits) != 2:
                raise ValidationError("cx gate needs (control, target)")
            if self.qubits[0] == self.qubits[1]:
                raise ValidationError("cx control and target must differ")
        else:
            raise ValidationError(f"unknown gate kind {self.kind!r}")


def u3_gate(qubit: int, theta: float, phi: float, lam: float, tag: str = "") -> Gate:
    return Gate(U3_KIND, (qubit,), U3Params(theta, phi, lam), tag)


def cnot_gate(control: int, target: int, tag: str = "") -> Gate:
    return Gate(CNOT_KIND, (control, target), tag=tag)


# Named U3 parameterizations (OpenQASM 2.0 convention).
def x_gate(q: int, tag: str = "") -> Gate:
    return u3_gate(q, np.pi, 0.0, np.pi, tag)


def h_gate(q: int, tag: str = "") -> Gate:
    return u3_gate(q, np.pi / 2, 0.0, np.pi, tag)


def z_gate(q: int, tag: str = "") -> Gate:
    return u3_gate(q, 0.0, 0.0, np.pi, tag)


def phase_gate(q: int, lam: float, tag: str = "") -> Gate:
    """diag(1, e^{i lam})."""
    return u3_gate(q, 0.0, 0.0, lam, tag)


def rx_gate(q: int, theta: float, tag: str = "") -> Gate:
    """exp(-i theta X / 2)."""
    return u3_gate(q, theta, -np.pi / 2, np.pi / 2, tag)


def ry_gate(q: int, theta: float, tag: str = "") -> Gate:
    """exp(-i theta Y / 2)."""
    return u3_gate(q, theta, 0.0, 0.0, tag)


@dataclass
class GateCensus:
    total_cnot: int
    cnot_per_qubit: dict[int, int]
    depth: int


@dataclass
class Circuit:
    """Gate stream with two views: insertion order and parallel layers.

    `flatten()` returns gates in insertion order (the sequential semantics
    and the OpenQASM emission order). `layers` groups them for parallel
    scheduling; a gate hoisted into an earlier layer commutes with every
    later layer it skipped, so both views execute identically.
    """

    n_qubits: int
    layers: list[list[Gate]] = field(default_factory=list)
    _sequence: list[Gate] = field(default_factory=list, repr=False)

    def flatten(self) -> list[Gate]:
        return list(self._sequence)

    @property
    def n_gates(self) -> int:
        return len(self._sequence)

    def _check_gate(self, gate: Gate) -> None:
        for q in gate.qubits:
            if not 0 <= q < self.n_qubits:
                raise ValidationError(
                    f"gate operand {q} out of range for width {self.n_qubits}"
                )

    def append(self, gate: Gate, policy: LayerPolicy = LayerPolicy.EARLIEST_COMPATIBLE) -> "Circuit":
        self._check_gate(gate)
        self._sequence.append(gate)
        if policy is LayerPolicy.NEW_LAYER or not self.layers:
            self.layers.append([gate])
            return self
        qubits = set(gate.qubits)
        # Deepest layer whose gates touch any operand; the gate goes right after it.
        conflict = -1
        for i, layer in enumerate(self.layers):
            if any(qubits & set(g.qubits) for g in layer):
                conflict = i
        dest = conflict + 1
        if dest == len(self.layers):
            self.layers.append([gate])
        else:
            self.layers[dest].append(gate)
        return self

    def extend(self, gates, policy: LayerPolicy = LayerPolicy.EARLIEST_COMPATIBLE) -> "Circuit":
        source = gates.flatten() if isinstance(gates, Circuit) else gates
        for g in source:
            self.append(g, policy)
        return self

    def retag(self, tag: str) -> "Circuit":
        """Copy with every gate carrying `tag` (provenance labeling)."""
        out = Circuit(self.n_qubits)
        for g in self.flatten():
            out.append(replace(g, tag=tag))
        return out


def run(circuit: Circuit, initial: QuantumState) -> QuantumState:
    """Execute layer by layer on a copy of `initial`."""
    if initial.n_qubits != circuit.n_qubits:
        raise ValidationError(
            f"width mismatch: circuit {circuit.n_qubits}, state {initial.n_qubits}"
        )
    state = initial.copy()
    for layer in circuit.layers:
        for gate in layer:
            if gate.kind == U3_KIND:
                apply_u3(state, gate.qubits[0], gate.params)
            else:
                apply_cnot(state, gate.qubits[0], gate.qubits[1])
    return state


def census(circuit: Circuit, exclude_tag_prefix: str | None = None) -> GateCensus:
    """CNOT counts and depth; optionally skip gates whose tag starts with a prefix."""
    total = 0
    per_qubit: dict[int, int] = {}
    for gate in circuit.flatten():
        if exclude_tag_prefix is not None and gate.tag.startswith(exclude_tag_prefix):
            continue
        if gate.kind == CNOT_KIND:
            total += 1
            for q in gate.qubits:
                per_qubit[q] = per_qubit.get(q, 0) + 1
    return GateCensus(total_cnot=total, cnot_per_qubit=per_qubit, depth=len(circuit.layers))


def direction_lint(circuit: Circuit, allowed: set[tuple[int, int]]) -> list[Gate]:
    """CNOTs whose (control, target) is not a native chip direction.

    Such gates would need Hadamard conjugation on hardware; the simulator
    itself is direction-agnostic, so this is a report, not an error.
    """
    return [
        g
        for g in circuit.flatten()
        if g.kind == CNOT_KIND and tuple(g.qubits) not in allowed
    ]


# --- OpenQASM 2.0 subset ---

_QASM_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'
_QREG_RE = re.compile(r"^qreg\s+(\w+)\[(\d+)\]\s*$")
_U3_RE = re.compile(r"^u3\(([^,]+),([^,]+),([^)]+)\)\s+(\w+)\[(\d+)\]\s*$")
_CX_RE = re.compile(r"^cx\s+(\w+)\[(\d+)\]\s*,\s*(\w+)\[(\d+)\]\s*$")


def export_openqasm(circuit: Circuit) -> str:
    lines = [_QASM_HEADER + f"qreg q[{circuit.n_qubits}];"]
    for gate in circuit.flatten():
        if gate.kind == U3_KIND:
            p = gate.params
            lines.append(
                f"u3({float(p.theta)!r},{float(p.phi)!r},{float(p.lam)!r}) q[{gate.qubits[0]}];"
            )
        else:
            lines.append(f"cx q[{gate.qubits[0]}],q[{gate.qubits[1]}];")
    return "\n".join(lines) + "\n"


def _parse_float(text: str, lineno: int, col: int) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise QasmParseError(f"bad angle {text.strip()!r}", lineno, col)


def import_openqasm(text: str) -> Circuit:
    circuit: Circuit | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        if line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if not line.endswith(";"):
            raise QasmParseError("missing ';'", lineno, len(raw))
        stmt = line[:-1].strip()
        if stmt.startswith("qreg"):
            m = _QREG_RE.match(stmt)
            if not m:
                raise QasmParseError("malformed qreg", lineno, 1)
            if circuit is not None:
                raise UnsupportedQasmError("second qreg", lineno)
            circuit = Circuit(int(m.group(2)))
            continue
        if circuit is None:
            raise QasmParseError("gate before qreg", lineno, 1)
        if stmt.startswith("u3"):
            m = _U3_RE.match(stmt)
            if not m:
                raise QasmParseError("malformed u3 statement", lineno, raw.find("u3") + 1)
            theta = _parse_float(m.group(1), lineno, 1)
            phi = _parse_float(m.group(2), lineno, 1)
            lam = _parse_float(m.group(3), lineno, 1)
            circuit.append(u3_gate(int(m.group(5)), theta, phi, lam))
        elif stmt.startswith("cx"):
            m = _CX_RE.match(stmt)
            if not m:
                raise QasmParseError("malformed cx statement", lineno, raw.find("cx") + 1)
            circuit.append(cnot_gate(int(m.group(2)), int(m.group(4))))
        else:
            construct = stmt.split("(")[0].split()[0]
            raise UnsupportedQasmError(construct, lineno)
    if circuit is None:
        raise QasmParseError("no qreg declaration found", 1, 1)
    return circuit
