"""Spin-model compilation: initial-state preparation blocks, two-qubit
coupling blocks, and full Trotterized evolution circuits.

Central-spin model: one spin exchange-coupled (xx+yy, strength g) to L bath
spins; time is measured as the dimensionless tau = g*t. Transverse Ising
model: H = -J sum_<ij> Z_i Z_j - alpha sum_i X_i on an arbitrary graph,
quenched from the ferromagnetic all-down state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import (
    Circuit,
    cnot_gate,
    h_gate,
    phase_gate,
    rx_gate,
    ry_gate,
    u3_gate,
    x_gate,
    z_gate,
)
from .errors import ValidationError
from .oracle import PauliTerm, pauli_term
from .statevector import QuantumState, new_zero_state

# Basis-change rotations for the yy coupling block: V Z V^dag = Y with
# V = Rx(-pi/2).
_V = (-np.pi / 2, -np.pi / 2, np.pi / 2)
_V_DAG = (np.pi / 2, -np.pi / 2, np.pi / 2)

A_GATE_THETA = 2 * np.arccos(1 / np.sqrt(3))
B_GATE_THETA = np.pi / 4


@dataclass(frozen=True)
class CentralSpinSpec:
    L: int
    g: float = 1.0
    central: int = 0
    bath: tuple[int, ...] = ()

    def __post_init__(self):
        if not 1 <= self.L <= 4:
            raise ValidationError(f"bath size L must be in [1, 4], got {self.L}")
        if len(self.bath) != self.L:
            raise ValidationError("bath mapping size must equal L")
        qubits = (self.central, *self.bath)
        if len(set(qubits)) != len(qubits):
            raise ValidationError("qubit mapping must be injective")

    @classmethod
    def default(cls, L: int, g: float = 1.0) -> "CentralSpinSpec":
        """Bath on qubits 0..L-1, central spin on qubit L."""
        return cls(L=L, g=g, central=L, bath=tuple(range(L)))

    @property
    def n_qubits(self) -> int:
        return max(self.central, *self.bath) + 1


@dataclass(frozen=True)
class IsingSpec:
    n_spins: int
    edges: tuple[tuple[int, int], ...]
    J: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.J <= 0:
            raise ValidationError("J must be positive")
        if self.alpha < 0:
            raise ValidationError("alpha must be nonnegative")
        for i, j in self.edges:
            if i == j or not (0 <= i < self.n_spins and 0 <= j < self.n_spins):
                raise ValidationError(f"bad edge ({i}, {j})")
        if not self._connected():
            raise ValidationError("interaction graph must be connected")

    def _connected(self) -> bool:
        adj: dict[int, set[int]] = {i: set() for i in range(self.n_spins)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == self.n_spins

    @classmethod
    def chain(cls, n: int, J: float = 1.0, alpha: float = 1.0) -> "IsingSpec":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)), J, alpha)

    @classmethod
    def ladder(cls, cols: int, J: float = 1.0, alpha: float = 1.0) -> "IsingSpec":
        """Two rows of `cols` spins: row edges plus rungs."""
        top = tuple((i, i + 1) for i in range(cols - 1))
        bottom = tuple((cols + i, cols + i + 1) for i in range(cols - 1))
        rungs = tuple((i, cols + i) for i in range(cols))
        return cls(2 * cols, top + bottom + rungs, J, alpha)

    @property
    def n_qubits(self) -> int:
        return self.n_spins

    def neighbor_counts(self) -> dict[int, int]:
        counts = {i: 0 for i in range(self.n_spins)}
        for i, j in self.edges:
            counts[i] += 1
            counts[j] += 1
        return counts


TWO_PES = "2pes"
THREE_PES = "3pes"
CENTRAL_EXCITED = "central_excited"
FERROMAGNETIC = "ferromagnetic"


@dataclass(frozen=True)
class InitialStateSpec:
    kind: str
    phase: float | None = None

    def __post_init__(self):
        needs_phase = self.kind in (TWO_PES, THREE_PES)
        if needs_phase and self.phase is None:
            raise ValidationError(f"{self.kind} requires a phase parameter")
        if self.kind not in (TWO_PES, THREE_PES, CENTRAL_EXCITED, FERROMAGNETIC):
            raise ValidationError(f"unknown initial-state kind {self.kind!r}")


def two_pes(phi: float) -> InitialStateSpec:
    return InitialStateSpec(TWO_PES, phi)


def three_pes(chi: float) -> InitialStateSpec:
    return InitialStateSpec(THREE_PES, chi)


def central_excited() -> InitialStateSpec:
    return InitialStateSpec(CENTRAL_EXCITED)


def ferromagnetic() -> InitialStateSpec:
    return InitialStateSpec(FERROMAGNETIC)


# --- preparation fragments ---


def prepare_2pes(phi: float, qubit_a: int, qubit_b: int, n_qubits: int | None = None, tag: str = "prep") -> Circuit:
    """From |00> produce (|01> + e^{i phi} |10>)/sqrt(2) in the |q_a q_b> ordering.

    The first listed qubit carries the excitation in the e^{i phi} branch.
    """
    if qubit_a == qubit_b:
        raise ValidationError("2pes qubits must differ")
    width = n_qubits if n_qubits is not None else max(qubit_a, qubit_b) + 1
    circ = Circuit(width)
    circ.append(h_gate(qubit_a, tag))
    circ.append(phase_gate(qubit_a, phi, tag))
    circ.append(x_gate(qubit_b, tag))
    circ.append(cnot_gate(qubit_a, qubit_b, tag))
    return circ


def prepare_3pes(chi: float, qubits: tuple[int, int, int], n_qubits: int | None = None, tag: str = "prep") -> Circuit:
    """From |000> produce (|001> - 2 e^{i chi} |010> + |100>)/sqrt(6).

    Ordering is the ket |q_a q_b q_c> for qubits=(a, b, c); the middle
    listed qubit carries the -2 e^{i chi} amplitude.
    """
    a, b, c = qubits
    if len({a, b, c}) != 3:
        raise ValidationError("3pes qubits must be distinct")
    width = n_qubits if n_qubits is not None else max(qubits) + 1
    circ = Circuit(width)
    # Split off the heavy branch on b, with the sign from a Pauli-Z.
    circ.append(u3_gate(b, A_GATE_THETA, chi, 0.0, tag))
    circ.append(z_gate(b, tag))
    circ.append(x_gate(b, tag))
    circ.append(cnot_gate(b, c, tag))
    # Controlled-H from c onto a, then pass half the excitation back to c.
    circ.append(ry_gate(a, -B_GATE_THETA, tag))
    circ.append(h_gate(a, tag))
    circ.append(cnot_gate(c, a, tag))
    circ.append(h_gate(a, tag))
    circ.append(ry_gate(a, B_GATE_THETA, tag))
    circ.append(cnot_gate(a, c, tag))
    circ.append(x_gate(b, tag))
    return circ


def relocate(qubit_from: int, qubit_to: int, n_qubits: int | None = None, tag: str = "prep") -> Circuit:
    """SWAP as three CNOTs."""
    if qubit_from == qubit_to:
        raise ValidationError("relocation qubits must differ")
    width = n_qubits if n_qubits is not None else max(qubit_from, qubit_to) + 1
    circ = Circuit(width)
    circ.append(cnot_gate(qubit_from, qubit_to, tag))
    circ.append(cnot_gate(qubit_to, qubit_from, tag))
    circ.append(cnot_gate(qubit_from, qubit_to, tag))
    return circ


# --- coupling blocks ---


def _zz_core(circ: Circuit, qubit_i: int, qubit_j: int, angle: float, tag: str) -> None:
    """exp(-i angle Z_i Z_j) up to global phase: CNOT, phase(2*angle), CNOT."""
    circ.append(cnot_gate(qubit_i, qubit_j, tag))
    circ.append(phase_gate(qubit_j, 2 * angle, tag))
    circ.append(cnot_gate(qubit_i, qubit_j, tag))


def zz_block(qubit_i: int, qubit_j: int, angle: float, n_qubits: int | None = None, tag: str = "") -> Circuit:
    if qubit_i == qubit_j:
        raise ValidationError("zz block qubits must differ")
    width = n_qubits if n_qubits is not None else max(qubit_i, qubit_j) + 1
    circ = Circuit(width)
    _zz_core(circ, qubit_i, qubit_j, angle, tag)
    return circ


def xx_yy_block(qubit_c: int, qubit_j: int, angle: float, n_qubits: int | None = None, tag: str = "") -> Circuit:
    """exp(-i angle XX) exp(-i angle YY) on (c, j), up to global phase.

    The yy factor acts first; both exponentials share the single-excitation
    generator and commute. Each factor is the zz core conjugated into the
    right basis (Hadamards for xx, Rx(-pi/2) rotations for yy).
    """
    if qubit_c == qubit_j:
        raise ValidationError("coupling block qubits must differ")
    width = n_qubits if n_qubits is not None else max(qubit_c, qubit_j) + 1
    circ = Circuit(width)
    for q in (qubit_c, qubit_j):
        circ.append(u3_gate(q, *_V_DAG, tag))
    _zz_core(circ, qubit_c, qubit_j, angle, tag)
    for q in (qubit_c, qubit_j):
        circ.append(u3_gate(q, *_V, tag))
    for q in (qubit_c, qubit_j):
        circ.append(h_gate(q, tag))
    _zz_core(circ, qubit_c, qubit_j, angle, tag)
    for q in (qubit_c, qubit_j):
        circ.append(h_gate(q, tag))
    return circ


# --- Trotterized evolution circuits ---


def trotter_central_spin(spec: CentralSpinSpec, tau: float, n_steps: int) -> Circuit:
    """N repetitions of per-bath-qubit coupling blocks with angle tau/(2N)."""
    if n_steps < 1:
        raise ValidationError("Trotter number must be >= 1")
    if not np.isfinite(tau):
        raise ValidationError("tau must be finite")
    circ = Circuit(spec.n_qubits)
    angle = tau / (2 * n_steps)
    for k in range(n_steps):
        for j in spec.bath:
            tag = f"trotter_step:{k}/xxyy:({spec.central},{j})"
            circ.extend(xx_yy_block(spec.central, j, angle, spec.n_qubits, tag))
    return circ


def bond_schedule(spec: IsingSpec) -> list[list[tuple[int, int]]]:
    """Greedy edge coloring: stages of pairwise-disjoint bonds, in edge order."""
    stages: list[list[tuple[int, int]]] = []
    busy: list[set[int]] = []
    for edge in spec.edges:
        placed = False
        for stage, qubits in zip(stages, busy):
            if edge[0] not in qubits and edge[1] not in qubits:
                stage.append(edge)
                qubits.update(edge)
                placed = True
                break
        if not placed:
            stages.append([edge])
            busy.append(set(edge))
    return stages


def trotter_ising(spec: IsingSpec, t: float, n_steps: int) -> Circuit:
    """First-order Trotter circuit for exp(-iHt) of the transverse Ising model.

    Per step: exp(+i (alpha t/N) X) on every qubit, then
    exp(+i (J t/N) ZZ) per bond, bonds grouped into parallel stages.
    """
    if n_steps < 1:
        raise ValidationError("Trotter number must be >= 1")
    if not np.isfinite(t):
        raise ValidationError("t must be finite")
    circ = Circuit(spec.n_qubits)
    stages = bond_schedule(spec)
    field_theta = -2 * spec.alpha * t / n_steps  # Rx(theta) = exp(-i theta X / 2)
    zz_angle = -spec.J * t / n_steps
    for k in range(n_steps):
        for q in range(spec.n_spins):
            circ.append(rx_gate(q, field_theta, tag=f"trotter_step:{k}/field:{q}"))
        for s, stage in enumerate(stages, start=1):
            for i, j in stage:
                tag = f"trotter_step:{k}/zz:({i},{j})/stage:{s}"
                _zz_core(circ, i, j, zz_angle, tag)
    return circ


# --- Hamiltonian terms (shared with the oracle) ---


def central_spin_terms(spec: CentralSpinSpec) -> list[PauliTerm]:
    """(g/2) sum_j (Xc Xj + Yc Yj), in compiler order (yy before xx per bond)."""
    terms = []
    for j in spec.bath:
        terms.append(pauli_term(spec.g / 2, {spec.central: "Y", j: "Y"}))
        terms.append(pauli_term(spec.g / 2, {spec.central: "X", j: "X"}))
    return terms


def ising_terms(spec: IsingSpec) -> list[PauliTerm]:
    """-alpha X per site then -J ZZ per bond, in compiler (stage) order."""
    terms = [pauli_term(-spec.alpha, {q: "X"}) for q in range(spec.n_spins)]
    for stage in bond_schedule(spec):
        for i, j in stage:
            terms.append(pauli_term(-spec.J, {i: "Z", j: "Z"}))
    return terms


def model_terms(model) -> list[PauliTerm]:
    if isinstance(model, CentralSpinSpec):
        return central_spin_terms(model)
    if isinstance(model, IsingSpec):
        return ising_terms(model)
    raise ValidationError(f"unknown model type {type(model).__name__}")


# --- full experiments ---


@dataclass
class CompiledExperiment:
    circuit: Circuit
    observable_qubits: tuple[int, ...]
    logical_map: dict[str, int] = field(default_factory=dict)


def initial_state_vector(initial: InitialStateSpec, model) -> QuantumState:
    """Ideal initial state built directly from amplitudes (no gates)."""
    if isinstance(model, IsingSpec):
        if initial.kind != FERROMAGNETIC:
            raise ValidationError(f"Ising model requires ferromagnetic start, got {initial.kind}")
        return new_zero_state(model.n_qubits)
    spec: CentralSpinSpec = model
    state = new_zero_state(spec.n_qubits)
    amps = state.amplitudes
    if initial.kind == CENTRAL_EXCITED:
        amps[0] = 0.0
        amps[1 << spec.central] = 1.0
    elif initial.kind == TWO_PES:
        if spec.L != 2:
            raise ValidationError("2pes initial state requires L=2")
        amps[0] = 0.0
        b1, b2 = spec.bath
        amps[1 << b2] = 1 / np.sqrt(2)
        amps[1 << b1] = np.exp(1j * initial.phase) / np.sqrt(2)
    elif initial.kind == THREE_PES:
        if spec.L != 3:
            raise ValidationError("3pes initial state requires L=3")
        amps[0] = 0.0
        b1, b2, b3 = spec.bath
        amps[1 << b3] = 1 / np.sqrt(6)
        amps[1 << b2] = -2 * np.exp(1j * initial.phase) / np.sqrt(6)
        amps[1 << b1] = 1 / np.sqrt(6)
    else:
        raise ValidationError(f"central-spin model incompatible with {initial.kind}")
    return state


def preparation_circuit(initial: InitialStateSpec, model) -> tuple[Circuit, dict[str, int]]:
    """Gate-level preparation of `initial` on the model's qubit layout."""
    if isinstance(model, IsingSpec):
        if initial.kind != FERROMAGNETIC:
            raise ValidationError(f"Ising model requires ferromagnetic start, got {initial.kind}")
        return Circuit(model.n_qubits), {f"spin{i}": i for i in range(model.n_spins)}
    spec: CentralSpinSpec = model
    logical = {"central": spec.central}
    logical.update({f"bath{i+1}": q for i, q in enumerate(spec.bath)})
    circ = Circuit(spec.n_qubits)
    if initial.kind == CENTRAL_EXCITED:
        circ.append(x_gate(spec.central, tag="prep"))
    elif initial.kind == TWO_PES:
        if spec.L != 2:
            raise ValidationError("2pes initial state requires L=2")
        # First bath particle carries the e^{i phi} branch.
        circ.extend(prepare_2pes(initial.phase, spec.bath[0], spec.bath[1], spec.n_qubits))
    elif initial.kind == THREE_PES:
        if spec.L != 3:
            raise ValidationError("3pes initial state requires L=3")
        b1, b2, b3 = spec.bath
        # The entangler needs the central qubit; its content is then moved
        # out to the third bath qubit and the central spin starts in |0>.
        circ.extend(prepare_3pes(initial.phase, (b1, b2, spec.central), spec.n_qubits))
        circ.extend(relocate(spec.central, b3, spec.n_qubits))
    else:
        raise ValidationError(f"central-spin model incompatible with {initial.kind}")
    return circ, logical


def full_experiment(initial: InitialStateSpec, model, time: float, n_steps: int) -> CompiledExperiment:
    """Preparation (tagged "prep") followed by Trotter evolution."""
    prep, logical = preparation_circuit(initial, model)
    if isinstance(model, IsingSpec):
        evo = trotter_ising(model, time, n_steps)
        observable = tuple(range(model.n_spins))
    else:
        evo = trotter_central_spin(model, time, n_steps)
        observable = (model.central,)
    circ = Circuit(prep.n_qubits)
    circ.extend(prep)
    circ.extend(evo)
    return CompiledExperiment(circuit=circ, observable_qubits=observable, logical_map=logical)
