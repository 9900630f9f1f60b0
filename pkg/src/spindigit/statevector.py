"""Dense state-vector engine.

Amplitudes are stored in a flat complex128 array indexed little-endian:
qubit 0 is the least-significant bit of the basis-state index. Bitstrings
are rendered with qubit 0 rightmost.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ValidationError

MAX_QUBITS_ENV = "SPINDIGIT_MAX_QUBITS"
DEFAULT_MAX_QUBITS = 24

# Per-shot RNG stream tags. Measurement and noise draws come from separate
# streams so that a zero-noise trajectory consumes exactly the same
# measurement randomness as ideal sampling.
MEAS_STREAM = 0
NOISE_STREAM = 1


def max_qubits() -> int:
    """Capacity ceiling for state allocation, overridable via environment."""
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{MAX_QUBITS_ENV} must be an integer, got {raw!r}")


@dataclass
class U3Params:
    """Angles (radians) of the general single-qubit gate U3(theta, phi, lam)."""

    theta: float
    phi: float
    lam: float

    def matrix(self) -> np.ndarray:
        t, p, l = self.theta, self.phi, self.lam
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array(
            [[c, -np.exp(1j * l) * s],
             [np.exp(1j * p) * s, np.exp(1j * (p + l)) * c]],
            dtype=np.complex128,
        )


@dataclass
class MeasurementCounts:
    """Histogram of measured bitstrings (qubit 0 rightmost)."""

    shots: int
    histogram: dict[str, int]

    @property
    def n_qubits(self) -> int:
        return len(next(iter(self.histogram)))

    def frequency(self, bitstring: str) -> float:
        return self.histogram.get(bitstring, 0) / self.shots


@dataclass
class QuantumState:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def copy(self) -> "QuantumState":
        return QuantumState(self.n_qubits, self.amplitudes.copy())

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def new_zero_state(n_qubits: int) -> QuantumState:
    """All-spins-down reference state |0...0>."""
    ceiling = max_qubits()
    if not 1 <= n_qubits <= ceiling:
        raise CapacityError(f"n_qubits must be in [1, {ceiling}], got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return QuantumState(n_qubits, amps)


def _check_qubit(n_qubits: int, qubit: int) -> None:
    if not 0 <= qubit < n_qubits:
        raise ValidationError(f"qubit index {qubit} out of range for {n_qubits} qubits")


def bit_pair_indices(n_qubits: int, qubit: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (i0, i1) pairing basis states that differ in `qubit`."""
    k = np.arange(2 ** (n_qubits - 1))
    low = k & ((1 << qubit) - 1)
    i0 = ((k >> qubit) << (qubit + 1)) | low
    return i0, i0 | (1 << qubit)


def apply_matrix2(amps: np.ndarray, n_qubits: int, qubit: int, m: np.ndarray) -> None:
    """Apply a 2x2 matrix to one qubit of `amps`, in place.

    `amps` may carry leading batch dimensions (..., 2**n_qubits).
    """
    i0, i1 = bit_pair_indices(n_qubits, qubit)
    a0 = amps[..., i0]
    a1 = amps[..., i1]
    amps[..., i0] = m[0, 0] * a0 + m[0, 1] * a1
    amps[..., i1] = m[1, 0] * a0 + m[1, 1] * a1


def apply_u3(state: QuantumState, qubit: int, params: U3Params) -> QuantumState:
    _check_qubit(state.n_qubits, qubit)
    apply_matrix2(state.amplitudes, state.n_qubits, qubit, params.matrix())
    return state


def cnot_swap_indices(n_qubits: int, control: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (control=1, target=0) <-> (control=1, target=1)."""
    idx = np.arange(2**n_qubits)
    sel = ((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)
    i0 = idx[sel]
    return i0, i0 | (1 << target)


def apply_cnot(state: QuantumState, control: int, target: int) -> QuantumState:
    _check_qubit(state.n_qubits, control)
    _check_qubit(state.n_qubits, target)
    if control == target:
        raise ValidationError("CNOT control and target must differ")
    i0, i1 = cnot_swap_indices(state.n_qubits, control, target)
    amps = state.amplitudes
    tmp = amps[i0].copy()
    amps[i0] = amps[i1]
    amps[i1] = tmp
    return state


def excited_population(state: QuantumState, qubit: int) -> float:
    """Probability of measuring `qubit` in |1>."""
    _check_qubit(state.n_qubits, qubit)
    idx = np.arange(2**state.n_qubits)
    mask = (idx >> qubit) & 1 == 1
    return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def probabilities(state: QuantumState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def bitstring(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


def shot_rng(seed, shot: int, stream: int) -> np.random.Generator:
    """Deterministic per-shot generator; `seed` is an int or sequence of ints."""
    key = list(seed) if isinstance(seed, (list, tuple)) else [seed]
    return np.random.default_rng(key + [shot, stream])


def shot_uniforms(seed, shots: int, stream: int, draws: int = 1) -> np.ndarray:
    """(shots, draws) uniforms with row s taken from the (seed, s, stream) rng."""
    out = np.empty((shots, draws))
    for s in range(shots):
        out[s] = shot_rng(seed, s, stream).random(draws)
    return out


def counts_from_indices(indices: np.ndarray, n_qubits: int, shots: int) -> MeasurementCounts:
    hist: dict[str, int] = {}
    uniq, cnt = np.unique(indices, return_counts=True)
    for i, c in zip(uniq, cnt):
        hist[bitstring(int(i), n_qubits)] = int(c)
    return MeasurementCounts(shots=shots, histogram=hist)


def sample(state: QuantumState, shots: int, seed) -> MeasurementCounts:
    """Sample measurement outcomes from |amplitude|^2, deterministic given seed."""
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    cdf = np.cumsum(probabilities(state))
    cdf[-1] = 1.0
    us = shot_uniforms(seed, shots, MEAS_STREAM)[:, 0]
    # side="left" matches the batched trajectory sampler's (cdf < u) count.
    indices = np.searchsorted(cdf, us, side="left")
    return counts_from_indices(indices, state.n_qubits, shots)


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """|<a|b>|^2; global-phase insensitive state comparison."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError(
            f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    return float(np.abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
