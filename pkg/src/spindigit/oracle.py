"""Exact and reference dynamics independent of circuit compilation.

Dense Hamiltonians (spectral-decomposition propagator) for small systems,
a matrix-free splitting integrator for larger ones, and a literal
product-of-term-exponentials Trotter reference used to validate the
compiled circuits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import CapacityError, ToleranceError, ValidationError
from .statevector import QuantumState

DENSE_CEILING_DEFAULT = 12
DENSE_CEILING_HARD = 14

_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class PauliTerm:
    """coefficient * tensor product of Pauli factors on selected qubits."""

    coefficient: float
    factors: tuple[tuple[int, str], ...]  # (qubit, "X"|"Y"|"Z"), qubits distinct

    def __post_init__(self):
        qubits = [q for q, _ in self.factors]
        if len(set(qubits)) != len(qubits):
            raise ValidationError("duplicate qubit in Pauli term")
        for _, p in self.factors:
            if p not in _PAULI:
                raise ValidationError(f"unknown Pauli factor {p!r}")


def pauli_term(coefficient: float, factors: dict[int, str]) -> PauliTerm:
    return PauliTerm(coefficient, tuple(sorted(factors.items())))


def _check_dense(n: int, allow_large: bool) -> None:
    ceiling = DENSE_CEILING_HARD if allow_large else DENSE_CEILING_DEFAULT
    if n > ceiling:
        raise CapacityError(
            f"dense construction limited to {ceiling} qubits, got {n}"
        )


def build_hamiltonian(terms: list[PauliTerm], n: int, allow_large: bool = False) -> np.ndarray:
    """Dense 2^n x 2^n Hermitian matrix, little-endian qubit indexing."""
    _check_dense(n, allow_large)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=np.complex128)
    for term in terms:
        factor_map = dict(term.factors)
        # Little-endian: qubit 0 is the last Kronecker factor.
        m = np.array([[1.0 + 0j]])
        for q in reversed(range(n)):
            m = np.kron(m, _PAULI.get(factor_map.get(q, ""), np.eye(2, dtype=np.complex128)))
        h += term.coefficient * m
    return h


@dataclass
class ExactEvolver:
    """exp(-iHt) via one Hermitian eigendecomposition, reused across times."""

    hamiltonian: np.ndarray
    _eigvals: np.ndarray = field(init=False, repr=False)
    _eigvecs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = self.hamiltonian
        if h.shape[0] != h.shape[1] or h.shape[0] & (h.shape[0] - 1):
            raise ValidationError("Hamiltonian dimension must be a power of two")
        if not np.allclose(h, h.conj().T, atol=1e-12):
            raise ValidationError("Hamiltonian is not Hermitian")
        self._eigvals, self._eigvecs = scipy.linalg.eigh(h)

    def evolve(self, psi0: QuantumState, t: float) -> QuantumState:
        if self.hamiltonian.shape[0] != 2**psi0.n_qubits:
            raise ValidationError("state dimension does not match Hamiltonian")
        coeffs = self._eigvecs.conj().T @ psi0.amplitudes
        amps = self._eigvecs @ (np.exp(-1j * self._eigvals * t) * coeffs)
        return QuantumState(psi0.n_qubits, amps)


def evolve_exact(h: np.ndarray, psi0: QuantumState, t: float) -> QuantumState:
    return ExactEvolver(h).evolve(psi0, t)


def _popcount(x: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        # bitwise_count yields uint8; widen so later sign arithmetic can go negative
        return np.bitwise_count(x).astype(np.int64)
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


def apply_pauli_string(amps: np.ndarray, n: int, factors) -> np.ndarray:
    """Matrix-free action of a Pauli string on a flat amplitude vector."""
    xmask = ymask = zmask = 0
    for q, p in (factors.items() if isinstance(factors, dict) else factors):
        if p == "X":
            xmask |= 1 << q
        elif p == "Y":
            ymask |= 1 << q
        else:
            zmask |= 1 << q
    idx = np.arange(2**n)
    flip = xmask | ymask
    src = idx ^ flip
    n_y = bin(ymask).count("1")
    # Element <i|P|i^flip>: each Y contributes i if the bit of i is set, -i
    # otherwise; each Z contributes (-1)^bit.
    sign = 1 - 2 * ((_popcount(idx & ymask) + _popcount(idx & zmask)) & 1)
    phase = ((-1j) ** n_y) * sign
    return amps[src] * phase


def _apply_term_exponential(amps: np.ndarray, n: int, term: PauliTerm, angle: float) -> np.ndarray:
    """exp(-i angle P) amps, exact (P^2 = I)."""
    if not term.factors:
        return amps * np.exp(-1j * angle)
    return np.cos(angle) * amps - 1j * np.sin(angle) * apply_pauli_string(amps, n, term.factors)


def trotter_reference(
    terms: list[PauliTerm],
    psi0: QuantumState,
    t: float,
    n_steps: int,
    ordering: list[int] | None = None,
) -> QuantumState:
    """Literal first-order Trotter product of term exponentials (no gates).

    Per step, exp(-i coeff (t/N) P) is applied for each term in `ordering`
    (defaults to list order). This is the independent check that circuit
    compilation introduces no error beyond Trotterization itself.
    """
    if n_steps < 1:
        raise ValidationError("Trotter step count must be >= 1")
    order = list(range(len(terms))) if ordering is None else list(ordering)
    n = psi0.n_qubits
    amps = psi0.amplitudes.copy()
    dt = t / n_steps
    for _ in range(n_steps):
        for k in order:
            amps = _apply_term_exponential(amps, n, terms[k], terms[k].coefficient * dt)
    return QuantumState(n, amps)


def _strang_step(amps: np.ndarray, n: int, terms: list[PauliTerm], dt: float) -> np.ndarray:
    for term in terms[:-1]:
        amps = _apply_term_exponential(amps, n, term, term.coefficient * dt / 2)
    amps = _apply_term_exponential(amps, n, terms[-1], terms[-1].coefficient * dt)
    for term in reversed(terms[:-1]):
        amps = _apply_term_exponential(amps, n, term, term.coefficient * dt / 2)
    return amps


def _strang_evolve(amps: np.ndarray, n: int, terms: list[PauliTerm], t: float, substeps: int) -> np.ndarray:
    dt = t / substeps
    for _ in range(substeps):
        amps = _strang_step(amps, n, terms, dt)
    return amps


def evolve_matrix_free(
    terms: list[PauliTerm],
    psi0: QuantumState,
    t: float,
    substeps: int = 1024,
    tol: float | None = None,
) -> tuple[QuantumState, float]:
    """Second-order splitting evolution with a substep-doubling error estimate.

    Returns (state, estimate); the state is from the doubled-substep run.
    Raises ToleranceError when `tol` is given and the estimate exceeds it.
    """
    if substeps < 1:
        raise ValidationError("substeps must be >= 1")
    if not terms:
        return psi0.copy(), 0.0
    n = psi0.n_qubits
    coarse = _strang_evolve(psi0.amplitudes.copy(), n, terms, t, substeps)
    fine = _strang_evolve(psi0.amplitudes.copy(), n, terms, t, 2 * substeps)
    estimate = float(np.linalg.norm(fine - coarse))
    if tol is not None and estimate > tol:
        raise ToleranceError(
            f"error estimate {estimate:.3e} exceeds tolerance {tol:.3e}; "
            f"increase substeps (used {substeps})",
            estimate,
        )
    return QuantumState(n, fine), estimate
