"""Stochastic device-noise emulation via quantum-jump trajectories.

Each shot is an independent trajectory: depolarizing Pauli insertions after
gates, amplitude/phase damping between layers, and readout confusion on the
final bitstring. The per-shot randomness is derived from (seed, shot index)
on streams separate from the measurement draw, so a zero-noise run produces
the exact histogram of ideal sampling and parallel/serial execution agree.

Trajectories are simulated batched as a (shots, 2^n) array, chunked to
bound memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import CNOT_KIND, Circuit
from .errors import ValidationError
from .statevector import (
    MEAS_STREAM,
    NOISE_STREAM,
    MeasurementCounts,
    apply_matrix2,
    bit_pair_indices,
    cnot_swap_indices,
    counts_from_indices,
    shot_rng,
)

IDENTITY_READOUT = ((1.0, 0.0), (0.0, 1.0))

# Amplitudes budget per trajectory chunk (complex128 entries).
_CHUNK_BUDGET = 1 << 24


@dataclass(frozen=True)
class NoiseModel:
    """Scalar device parameters applied uniformly across qubits/edges.

    Probabilities are depolarizing; t1/t2 and gate durations share one time
    unit. `readout` is the confusion matrix (rows: true state, columns:
    reported state).
    """

    p_cnot: float = 0.0
    p_u3: float = 0.0
    t1: float = math.inf
    t2: float = math.inf
    dur_u3: float = 0.0
    dur_cnot: float = 0.0
    readout: tuple[tuple[float, float], tuple[float, float]] = IDENTITY_READOUT

    def __post_init__(self):
        for name in ("p_cnot", "p_u3"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {p}")
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValidationError("t1 and t2 must be positive")
        if self.t2 > 2 * self.t1:
            raise ValidationError("t2 must not exceed 2*t1")
        for row in self.readout:
            if any(p < 0 for p in row) or abs(sum(row) - 1.0) > 1e-12:
                raise ValidationError("readout confusion rows must be probabilities summing to 1")

    @property
    def is_noiseless(self) -> bool:
        return (
            self.p_cnot == 0.0
            and self.p_u3 == 0.0
            and math.isinf(self.t1)
            and math.isinf(self.t2)
            and self.readout == IDENTITY_READOUT
        )

    def dephasing_time(self) -> float:
        """Pure-dephasing time from 1/t2 = 1/(2 t1) + 1/t_phi."""
        inv = 1.0 / self.t2 - 1.0 / (2.0 * self.t1)
        return math.inf if inv <= 0 else 1.0 / inv


NOISELESS = NoiseModel()

# Order-of-magnitude placeholders for an era-typical 5-qubit device; not
# calibration data (time unit: microseconds).
IBMQX4_LIKE = NoiseModel(
    p_cnot=0.03,
    p_u3=0.002,
    t1=50.0,
    t2=40.0,
    dur_u3=0.1,
    dur_cnot=0.4,
)


@dataclass(frozen=True)
class ErrorBudget:
    """Linear per-qubit error estimate; may exceed 1."""

    value: float

    @property
    def exceeds_unity(self) -> bool:
        return self.value > 1.0

    def clamped(self) -> float:
        return min(self.value, 1.0)


def error_budget(p_cnot: float, n_neig: int, trotter_n: int, nu: int) -> ErrorBudget:
    """2 * p_cnot * N_neig * N * nu (CNOT-count-driven linear estimate)."""
    if p_cnot < 0 or n_neig < 0 or trotter_n < 0 or nu < 0:
        raise ValidationError("error budget inputs must be nonnegative")
    return ErrorBudget(value=p_cnot * (2 * n_neig * trotter_n * nu))


def _pauli_rows(amps: np.ndarray, rows: np.ndarray, n: int, qubit: int, which: int) -> None:
    """Apply X (1), Y (2) or Z (3) on `qubit` to the selected trajectory rows."""
    if rows.size == 0:
        return
    i0, i1 = bit_pair_indices(n, qubit)
    if which == 3:  # Z
        amps[np.ix_(rows, i1)] *= -1.0
        return
    a0 = amps[np.ix_(rows, i0)]
    a1 = amps[np.ix_(rows, i1)]
    if which == 1:  # X
        amps[np.ix_(rows, i0)] = a1
        amps[np.ix_(rows, i1)] = a0
    else:  # Y
        amps[np.ix_(rows, i0)] = -1j * a1
        amps[np.ix_(rows, i1)] = 1j * a0


def _depolarize(amps: np.ndarray, n: int, qubits: tuple[int, ...], p: float, u_occur: np.ndarray, u_which: np.ndarray) -> None:
    hit = np.nonzero(u_occur < p)[0]
    if hit.size == 0:
        return
    if len(qubits) == 1:
        choice = (u_which[hit] * 3).astype(np.int64) + 1  # 1..3
        for which in (1, 2, 3):
            _pauli_rows(amps, hit[choice == which], n, qubits[0], which)
    else:
        choice = (u_which[hit] * 15).astype(np.int64) + 1  # 1..15 = (p0, p1) != (I, I)
        for code in range(1, 16):
            rows = hit[choice == code]
            if rows.size == 0:
                continue
            w0, w1 = code % 4, code // 4
            if w0:
                _pauli_rows(amps, rows, n, qubits[0], w0)
            if w1:
                _pauli_rows(amps, rows, n, qubits[1], w1)


def _excited_probs(amps: np.ndarray, n: int, qubit: int) -> np.ndarray:
    _, i1 = bit_pair_indices(n, qubit)
    return np.sum(np.abs(amps[:, i1]) ** 2, axis=1)


def _amplitude_damp(amps: np.ndarray, n: int, qubit: int, p_amp: float, u: np.ndarray) -> None:
    """Quantum-jump amplitude damping on every trajectory row."""
    if p_amp <= 0:
        return
    p1 = _excited_probs(amps, n, qubit)
    p_jump = p_amp * p1
    jump = np.nonzero(u < p_jump)[0]
    stay = np.nonzero(u >= p_jump)[0]
    i0, i1 = bit_pair_indices(n, qubit)
    if jump.size:
        # Collapse |1> -> |0> and renormalize.
        moved = amps[np.ix_(jump, i1)]
        amps[np.ix_(jump, i0)] = moved
        amps[np.ix_(jump, i1)] = 0.0
        norm = np.sqrt(np.sum(np.abs(moved) ** 2, axis=1))
        amps[jump] /= norm[:, None]
    if stay.size:
        amps[np.ix_(stay, i1)] *= math.sqrt(1.0 - p_amp)
        norm = np.sqrt(1.0 - p_amp * p1[stay])
        amps[stay] /= norm[:, None]


def _layer_duration(layer, noise: NoiseModel) -> float:
    dur = 0.0
    for gate in layer:
        dur = max(dur, noise.dur_cnot if gate.kind == CNOT_KIND else noise.dur_u3)
    return dur


def _trajectory_draw_count(circuit: Circuit, noise: NoiseModel) -> int:
    n = circuit.n_qubits
    return 2 * circuit.n_gates + 2 * len(circuit.layers) * n + n


def run_noisy(circuit: Circuit, noise: NoiseModel, shots: int, seed) -> MeasurementCounts:
    """Monte-Carlo trajectory sampling of `circuit` from |0...0>."""
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    n = circuit.n_qubits
    dim = 1 << n
    t_phi = noise.dephasing_time()
    n_draws = _trajectory_draw_count(circuit, noise)

    chunk = max(1, min(shots, _CHUNK_BUDGET // dim))
    out_indices = np.empty(shots, dtype=np.int64)
    for start in range(0, shots, chunk):
        stop = min(start + chunk, shots)
        rows = stop - start
        noise_u = np.empty((rows, n_draws))
        meas_u = np.empty(rows)
        for s in range(start, stop):
            noise_u[s - start] = shot_rng(seed, s, NOISE_STREAM).random(n_draws)
            meas_u[s - start] = shot_rng(seed, s, MEAS_STREAM).random()

        amps = np.zeros((rows, dim), dtype=np.complex128)
        amps[:, 0] = 1.0
        col = 0
        for layer in circuit.layers:
            for gate in layer:
                if gate.kind == CNOT_KIND:
                    i0, i1 = cnot_swap_indices(n, gate.qubits[0], gate.qubits[1])
                    tmp = amps[:, i0].copy()
                    amps[:, i0] = amps[:, i1]
                    amps[:, i1] = tmp
                    p_gate = noise.p_cnot
                else:
                    apply_matrix2(amps, n, gate.qubits[0], gate.params.matrix())
                    p_gate = noise.p_u3
                _depolarize(amps, n, gate.qubits, p_gate, noise_u[:, col], noise_u[:, col + 1])
                col += 2
            dur = _layer_duration(layer, noise)
            p_amp = 0.0 if math.isinf(noise.t1) else 1.0 - math.exp(-dur / noise.t1)
            p_phi = 0.0 if math.isinf(t_phi) else 1.0 - math.exp(-dur / t_phi)
            for q in range(n):
                _amplitude_damp(amps, n, q, p_amp, noise_u[:, col])
                if p_phi > 0:
                    flip = np.nonzero(noise_u[:, col + 1] < p_phi / 2)[0]
                    _pauli_rows(amps, flip, n, q, 3)
                col += 2

        cdf = np.cumsum(np.abs(amps) ** 2, axis=1)
        cdf[:, -1] = 1.0
        idx = (cdf < meas_u[:, None]).sum(axis=1)

        # Readout confusion: flip each reported bit with the row probability.
        p01 = noise.readout[0][1]
        p10 = noise.readout[1][0]
        if p01 > 0 or p10 > 0:
            bits = (idx[:, None] >> np.arange(n)) & 1
            u = noise_u[:, col : col + n]
            p_flip = np.where(bits == 1, p10, p01)
            bits ^= (u < p_flip).astype(np.int64)
            idx = (bits << np.arange(n)).sum(axis=1)
        out_indices[start:stop] = idx

    return counts_from_indices(out_indices, n, shots)
