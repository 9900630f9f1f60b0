import numpy as np
import pytest
import scipy.linalg

from spindigit.circuit import census, run
from spindigit.errors import ValidationError
from spindigit.models import (
    CentralSpinSpec,
    InitialStateSpec,
    IsingSpec,
    bond_schedule,
    full_experiment,
    initial_state_vector,
    model_terms,
    prepare_2pes,
    prepare_3pes,
    preparation_circuit,
    relocate,
    three_pes,
    trotter_central_spin,
    trotter_ising,
    two_pes,
    xx_yy_block,
    zz_block,
)
from spindigit.oracle import build_hamiltonian, pauli_term
from spindigit.statevector import QuantumState, excited_population, new_zero_state

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def circuit_unitary(circ):
    dim = 2**circ.n_qubits
    cols = []
    for k in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[k] = 1.0
        cols.append(run(circ, QuantumState(circ.n_qubits, amps)).amplitudes)
    return np.array(cols).T


def phase_aligned(u, v):
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    return u * (v[k] / u[k]) / abs(v[k] / u[k])


def test_zz_block_matches_generator_exponential():
    for angle in (0.0, 0.37, -1.2):
        got = circuit_unitary(zz_block(0, 1, angle))
        want = scipy.linalg.expm(-1j * angle * np.kron(Z, Z))
        assert np.allclose(phase_aligned(got, want), want, atol=1e-10)


def test_xx_yy_block_matches_generator_exponential():
    for angle in (0.2, -0.9):
        got = circuit_unitary(xx_yy_block(1, 0, angle))
        gen = np.kron(X, X) + np.kron(Y, Y)  # qubit 1 is the left factor
        want = scipy.linalg.expm(-1j * angle * gen)
        assert np.allclose(phase_aligned(got, want), want, atol=1e-10)


def test_trotter_step_matches_split_exponentials():
    """One first-order step equals the literal product of term exponentials."""
    spec = CentralSpinSpec.default(2)
    tau = 0.8
    got = circuit_unitary(trotter_central_spin(spec, tau, 1))
    want = np.eye(8, dtype=complex)
    for term in model_terms(spec):
        h = build_hamiltonian([term], 3) / term.coefficient
        want = scipy.linalg.expm(-1j * term.coefficient * tau * h) @ want
    assert np.allclose(phase_aligned(got, want), want, atol=1e-10)


def test_central_spin_conserves_excitation_number():
    spec = CentralSpinSpec.default(3)
    psi0 = initial_state_vector(three_pes(0.4), spec)
    out = run(trotter_central_spin(spec, 1.3, 2), psi0)
    idx = np.arange(2**spec.n_qubits)
    weight = np.array([bin(i).count("1") for i in idx])
    probs = np.abs(out.amplitudes) ** 2
    assert probs[weight != 1].sum() < 1e-24


def test_prepare_2pes_amplitudes():
    phi = 0.9
    state = run(prepare_2pes(phi, 0, 1), new_zero_state(2))
    # qubit 0 listed first carries the e^{i phi} branch
    assert state.amplitudes[0b01] == pytest.approx(np.exp(1j * phi) / np.sqrt(2), abs=1e-12)
    assert state.amplitudes[0b10] == pytest.approx(1 / np.sqrt(2), abs=1e-12)


def test_prepare_3pes_amplitudes():
    chi = 2.2
    state = run(prepare_3pes(chi, (0, 1, 2)), new_zero_state(3))
    amps = state.amplitudes
    ref = amps[0b100] * np.sqrt(6)  # strip the global phase
    assert abs(ref) == pytest.approx(1.0, abs=1e-12)
    assert amps[0b001] / (ref / np.sqrt(6)) == pytest.approx(1.0, abs=1e-12)
    assert amps[0b010] / (ref / np.sqrt(6)) == pytest.approx(-2 * np.exp(1j * chi), abs=1e-12)


def test_relocate_moves_the_excitation():
    state = new_zero_state(2)
    state.amplitudes[:] = [0, 1, 0, 0]  # qubit 0 excited
    out = run(relocate(0, 1), state)
    assert abs(out.amplitudes[0b10]) == pytest.approx(1.0)


def test_preparation_circuit_matches_direct_amplitudes():
    cases = [
        (CentralSpinSpec.default(2), two_pes(0.7)),
        (CentralSpinSpec.default(3), three_pes(1.9)),
        (CentralSpinSpec.default(4), InitialStateSpec("central_excited")),
    ]
    for spec, initial in cases:
        circ, logical = preparation_circuit(initial, spec)
        got = run(circ, new_zero_state(spec.n_qubits)).amplitudes
        want = initial_state_vector(initial, spec).amplitudes
        assert np.allclose(phase_aligned(got, want), want, atol=1e-12)
        assert logical["central"] == spec.central
    for g in circ.flatten():
        assert g.tag == "prep"


def test_bond_schedule_stage_counts_and_disjointness():
    assert len(bond_schedule(IsingSpec.chain(8))) == 2
    assert len(bond_schedule(IsingSpec.ladder(8))) == 3
    for spec in (IsingSpec.chain(8), IsingSpec.ladder(8)):
        stages = bond_schedule(spec)
        for stage in stages:
            flat = [q for e in stage for q in e]
            assert len(flat) == len(set(flat))
        assert sorted(e for s in stages for e in s) == sorted(spec.edges)


def test_ising_cnot_census_per_qubit():
    spec = IsingSpec.ladder(8)
    for n_steps in (1, 2):
        counts = census(trotter_ising(spec, 0.5, n_steps)).cnot_per_qubit
        for q, n_neig in spec.neighbor_counts().items():
            assert counts[q] == 2 * n_neig * n_steps


def test_chain_cnot_total():
    circ = trotter_ising(IsingSpec.chain(8), 1.0, 1)
    assert census(circ).total_cnot == 2 * 7


def test_trotter_ising_single_step_matches_dense_product():
    spec = IsingSpec.chain(3, J=1.0, alpha=1.7)
    t = 0.6
    got = circuit_unitary(trotter_ising(spec, t, 1))
    want = np.eye(8, dtype=complex)
    for term in model_terms(spec):
        h = build_hamiltonian([term], 3)
        want = scipy.linalg.expm(-1j * t * h) @ want
    assert np.allclose(phase_aligned(got, want), want, atol=1e-10)


def test_heisenberg_style_neighbor_cnot_count():
    """A three-axis coupling (nu=3) costs 6 CNOTs per neighbor per step.

    The toolkit compiles the two-axis exchange (nu=2, 4 CNOTs per bond) and
    the one-axis Ising coupling (nu=1, 2 CNOTs per bond); the counting rule
    2*nu per bond is what the error budget uses.
    """
    spec = CentralSpinSpec.default(3)
    circ = trotter_central_spin(spec, 0.5, 1)
    counts = census(circ).cnot_per_qubit
    assert counts[spec.central] == 2 * 2 * spec.L  # nu=2, L neighbors
    for j in spec.bath:
        assert counts[j] == 4


def test_spec_validation():
    with pytest.raises(ValidationError):
        CentralSpinSpec.default(5)
    with pytest.raises(ValidationError):
        CentralSpinSpec(L=2, central=0, bath=(0, 1))  # central reused
    with pytest.raises(ValidationError):
        IsingSpec(4, ((0, 1), (2, 3)))  # disconnected
    with pytest.raises(ValidationError):
        IsingSpec.chain(4, J=-1.0)
    with pytest.raises(ValidationError):
        InitialStateSpec("2pes")  # phase required
    with pytest.raises(ValidationError):
        InitialStateSpec("bogus")
    with pytest.raises(ValidationError):
        trotter_central_spin(CentralSpinSpec.default(2), 1.0, 0)
    with pytest.raises(ValidationError):
        initial_state_vector(two_pes(0.0), CentralSpinSpec.default(3))
    with pytest.raises(ValidationError):
        initial_state_vector(two_pes(0.0), IsingSpec.chain(4))


def test_initial_state_vectors_are_normalized():
    cases = [
        (CentralSpinSpec.default(2), two_pes(1.0)),
        (CentralSpinSpec.default(3), three_pes(0.3)),
        (IsingSpec.chain(4), InitialStateSpec("ferromagnetic")),
    ]
    for spec, initial in cases:
        state = initial_state_vector(initial, spec)
        assert state.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_full_experiment_observable_and_tags():
    exp = full_experiment(two_pes(0.0), CentralSpinSpec.default(2), 1.0, 2)
    assert exp.observable_qubits == (2,)
    tags = {g.tag for g in exp.circuit.flatten()}
    assert "prep" in tags
    assert any(t.startswith("trotter_step:1/") for t in tags)
    evo_only = census(exp.circuit, exclude_tag_prefix="prep")
    assert evo_only.total_cnot == 2 * 2 * 2 * 2  # nu=2, 2 bonds, N=2

    ising = full_experiment(InitialStateSpec("ferromagnetic"), IsingSpec.chain(4), 0.5, 1)
    assert ising.observable_qubits == (0, 1, 2, 3)


def test_dark_state_leakage_is_a_trotter_artifact():
    """The antisymmetric pair state is dark only for the full coupling;
    per-bond splitting leaks a small population that shrinks with N."""
    spec = CentralSpinSpec.default(2)
    leaks = []
    for n_steps in (1, 2, 4, 8):
        exp = full_experiment(two_pes(np.pi), spec, 1.1, n_steps)
        state = run(exp.circuit, new_zero_state(spec.n_qubits))
        leaks.append(excited_population(state, spec.central))
    assert all(a > b for a, b in zip(leaks, leaks[1:]))
    assert leaks[-1] < 0.01


def test_custom_qubit_layout_runs():
    spec = CentralSpinSpec(L=2, central=0, bath=(2, 1))
    exp = full_experiment(two_pes(0.5), spec, 0.7, 1)
    state = run(exp.circuit, new_zero_state(3))
    assert state.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_model_terms_coefficients():
    cs = model_terms(CentralSpinSpec.default(2, g=2.0))
    assert len(cs) == 4
    assert all(t.coefficient == 1.0 for t in cs)
    ising = model_terms(IsingSpec.chain(3, J=1.5, alpha=0.4))
    assert sorted(t.coefficient for t in ising) == [-1.5, -1.5, -0.4, -0.4, -0.4]
    with pytest.raises(ValidationError):
        model_terms(object())
    with pytest.raises(ValidationError):
        pauli_term(1.0, {0: "Q"})
