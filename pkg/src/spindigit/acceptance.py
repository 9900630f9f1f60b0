"""Machine-checkable acceptance criteria.

Each criterion is a function returning (passed, details). The registry is
shared by the test suite and the `spindigit verify` command; golden data
series live next to this module and are compared on regeneration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import analysis, models, oracle
from .analysis import ExperimentConfig, assemble_series, delta_n, normalized_v, series_to_csv
from .circuit import census, run
from .models import (
    CentralSpinSpec,
    IsingSpec,
    bond_schedule,
    central_excited,
    full_experiment,
    initial_state_vector,
    model_terms,
    prepare_2pes,
    prepare_3pes,
    three_pes,
    trotter_central_spin,
    trotter_ising,
    two_pes,
)
from .noise import IBMQX4_LIKE, error_budget, run_noisy
from .oracle import ExactEvolver, build_hamiltonian, trotter_reference
from .presets import preset_by_name
from .statevector import QuantumState, excited_population, fidelity, new_zero_state


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    runtime_s: float
    details: str


def _random_state(n_qubits: int, rng) -> QuantumState:
    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    amps /= np.linalg.norm(amps)
    return QuantumState(n_qubits, amps.astype(np.complex128))


def _phase_aligned_error(actual: np.ndarray, target: np.ndarray) -> float:
    k = int(np.argmax(np.abs(target)))
    phase = target[k] / actual[k] if abs(actual[k]) > 1e-30 else 1.0
    phase /= abs(phase)
    return float(np.max(np.abs(actual * phase - target)))


def criterion_oracle_equivalence():
    rng = np.random.default_rng(1234)
    worst = 1.0
    for L in (1, 2, 3, 4):
        spec = CentralSpinSpec.default(L)
        terms = model_terms(spec)
        for n_steps in (1, 2, 3):
            for tau in rng.uniform(1e-3, 2.0, size=5):
                psi0 = _random_state(spec.n_qubits, rng)
                compiled = run(trotter_central_spin(spec, tau, n_steps), psi0)
                reference = trotter_reference(terms, psi0, tau, n_steps)
                worst = min(worst, fidelity(compiled, reference))
    for spec in (IsingSpec.chain(4, alpha=1.3), IsingSpec.ladder(2, alpha=0.8)):
        terms = model_terms(spec)
        for n_steps in (1, 2):
            for t in rng.uniform(1e-3, 2.0, size=5):
                psi0 = _random_state(spec.n_qubits, rng)
                compiled = run(trotter_ising(spec, t, n_steps), psi0)
                reference = trotter_reference(terms, psi0, t, n_steps)
                worst = min(worst, fidelity(compiled, reference))
    return worst >= 1 - 1e-10, f"worst fidelity {worst:.3e}"


def criterion_dark_state_blockade():
    worst = 0.0
    cases = [
        (CentralSpinSpec.default(2), two_pes(np.pi)),
        (CentralSpinSpec.default(3), three_pes(0.0)),
    ]
    for spec, initial in cases:
        evolver = ExactEvolver(build_hamiltonian(model_terms(spec), spec.n_qubits))
        psi0 = initial_state_vector(initial, spec)
        for tau in np.linspace(0.0, 2.0, 41):
            pop = excited_population(evolver.evolve(psi0, tau), spec.central)
            worst = max(worst, pop)
    return worst <= 1e-12, f"max central population {worst:.3e}"


def criterion_trotter_artifact_monotonic():
    spec = CentralSpinSpec.default(2)
    pops = []
    for n_steps in (1, 2, 3):
        exp = full_experiment(two_pes(np.pi), spec, 1.0, n_steps)
        state = run(exp.circuit, new_zero_state(spec.n_qubits))
        pops.append(excited_population(state, spec.central))
    ok = pops[0] > pops[1] > pops[2]
    return ok, "populations at tau=1: " + ", ".join(f"{p:.5f}" for p in pops)


def criterion_collective_rabi():
    from scipy.optimize import brentq

    worst = 0.0
    details = []
    for L in (1, 2, 3, 4):
        spec = CentralSpinSpec.default(L)
        evolver = ExactEvolver(build_hamiltonian(model_terms(spec), spec.n_qubits))
        psi0 = initial_state_vector(central_excited(), spec)

        def population(tau):
            return excited_population(evolver.evolve(psi0, tau), spec.central)

        def slope(tau, h=1e-6):
            return (population(tau + h) - population(tau - h)) / (2 * h)

        expected = np.pi / (2 * np.sqrt(L))
        # The population minimum touches zero, so locate it through the
        # sign change of the derivative.
        root = brentq(slope, 0.8 * expected, 1.2 * expected, xtol=1e-12)
        worst = max(worst, abs(root - expected))
        details.append(f"L={L}: first zero {root:.12f}")
    return worst <= 1e-9, f"max deviation {worst:.2e}; " + "; ".join(details)


def _trotter_error(terms, psi0, exact_state, t, n_steps):
    approx = trotter_reference(terms, psi0, t, n_steps)
    return float(np.linalg.norm(approx.amplitudes - exact_state.amplitudes))


def criterion_trotter_convergence():
    ratios = []
    cases = [
        (CentralSpinSpec.default(2), two_pes(0.0), 0.5),
        (IsingSpec.chain(4, alpha=1.0), models.ferromagnetic(), 0.5),
    ]
    for spec, initial, t in cases:
        terms = model_terms(spec)
        psi0 = initial_state_vector(initial, spec)
        exact = ExactEvolver(build_hamiltonian(terms, spec.n_qubits)).evolve(psi0, t)
        errs = [_trotter_error(terms, psi0, exact, t, n) for n in (4, 8, 16)]
        ratios.extend([errs[0] / errs[1], errs[1] / errs[2]])
    ok = all(1.7 <= r <= 2.3 for r in ratios)
    return ok, "halving ratios: " + ", ".join(f"{r:.3f}" for r in ratios)


def criterion_state_preparation():
    worst = 0.0
    for phi in (0.0, np.pi / 3, np.pi):
        circ = prepare_2pes(phi, 1, 0)
        state = run(circ, new_zero_state(2))
        target = np.zeros(4, dtype=complex)
        target[0b01] = 1 / np.sqrt(2)  # qubit 0 (second listed) excited
        target[0b10] = np.exp(1j * phi) / np.sqrt(2)
        worst = max(worst, _phase_aligned_error(state.amplitudes, target))
    for chi in (0.0, 1.1, np.pi):
        circ = prepare_3pes(chi, (2, 1, 0))
        state = run(circ, new_zero_state(3))
        target = np.zeros(8, dtype=complex)
        target[0b001] = 1 / np.sqrt(6)
        target[0b010] = -2 * np.exp(1j * chi) / np.sqrt(6)
        target[0b100] = 1 / np.sqrt(6)
        worst = max(worst, _phase_aligned_error(state.amplitudes, target))
    return worst <= 1e-12, f"max amplitude error {worst:.3e}"


def criterion_cnot_census():
    problems = []
    ladder = IsingSpec.ladder(8)
    counts = census(trotter_ising(ladder, 0.7, 1)).cnot_per_qubit
    for q, n_neig in ladder.neighbor_counts().items():
        expected = 2 * n_neig
        if counts.get(q, 0) != expected:
            problems.append(f"qubit {q}: {counts.get(q, 0)} != {expected}")
    n_stages_chain = len(bond_schedule(IsingSpec.chain(8)))
    n_stages_ladder = len(bond_schedule(ladder))
    if n_stages_chain != 2:
        problems.append(f"chain-8 stages {n_stages_chain} != 2")
    if n_stages_ladder != 3:
        problems.append(f"ladder-16 stages {n_stages_ladder} != 3")
    budget = error_budget(0.05, 3, 1, 1).value
    if abs(budget - 0.30) > 1e-15:
        problems.append(f"budget {budget!r} != 0.30")
    return not problems, "; ".join(problems) if problems else (
        f"per-qubit counts match 2*N_neig; stages {n_stages_chain}/{n_stages_ladder}; "
        f"budget {budget:.2f}"
    )


def _oracle_population(spec, initial, tau, n_steps):
    terms = model_terms(spec)
    psi0 = initial_state_vector(initial, spec)
    state = trotter_reference(terms, psi0, tau, n_steps)
    return excited_population(state, spec.central)


def criterion_theory_curves():
    problems = []
    spec2 = CentralSpinSpec.default(2)
    pops = [_oracle_population(spec2, two_pes(phi), 0.6, 1) for phi in (0.0, np.pi / 2, np.pi)]
    if not pops[0] > pops[1] > pops[2]:
        problems.append(f"phase ordering violated at tau=0.6: {pops}")
    slopes = []
    for L in (1, 2, 3, 4):
        spec = CentralSpinSpec.default(L)
        n0 = _oracle_population(spec, central_excited(), 0.0, 1)
        n1 = _oracle_population(spec, central_excited(), 0.1, 1)
        slopes.append(abs(n1 - n0) / 0.1)
    if not all(b > a for a, b in zip(slopes, slopes[1:])):
        problems.append(f"initial slopes not increasing in L: {slopes}")

    # Golden series regeneration (frozen from the Trotter reference).
    preset = preset_by_name("fig8")
    golden_dir = resources.files("spindigit") / "golden"
    for config in preset.configs:
        series = assemble_series(config, "oracle")
        name = analysis.series_filename(series)
        golden = (golden_dir / name).read_text()
        regenerated = series_to_csv(series)
        if golden != regenerated:
            g_vals = _csv_values(golden)
            r_vals = _csv_values(regenerated)
            dev = float(np.max(np.abs(g_vals - r_vals)))
            if dev > 1e-9:
                problems.append(f"{name}: max deviation {dev:.2e} from golden")
    return not problems, "; ".join(problems) if problems else (
        f"orderings hold; slopes {['%.3f' % s for s in slopes]}; golden fig8 series match"
    )


def _csv_values(text: str) -> np.ndarray:
    rows = text.strip().splitlines()[1:]
    return np.array([float(r.split(",")[1]) for r in rows])


def criterion_mitigation_algebra():
    rng = np.random.default_rng(77)
    problems = []
    times = np.linspace(0.0, 2.0, 12)
    signal = np.sin(times) ** 2
    offset_series = analysis.TimeSeries(times, signal + 0.17)
    recovered = delta_n(offset_series)
    if not np.allclose(recovered.values, signal - signal[0], atol=1e-15, rtol=0.0):
        problems.append("delta_n did not remove the constant offset")
    if recovered.values[0] != 0.0:
        problems.append("delta_n series does not start at exactly zero")
    hand = analysis.TimeSeries([0.0, 1.0, 2.0, 3.0], [0.0, 0.1, 0.4, 0.2])
    v = normalized_v(hand)
    if not np.allclose(v.values, [0.0, 0.25, 1.0, 0.5], atol=1e-15):
        problems.append(f"hand-computed V mismatch: {v.values}")
    for _ in range(100):
        base = rng.random(10)
        base[0] = 0.0  # start at the minimum so the normalizer is well defined
        base[1 + np.argmax(base[1:])] += 0.5  # ensure a clear max
        c = rng.uniform(0.1, 5.0)
        d = rng.uniform(-1.0, 1.0)
        t = np.arange(10, dtype=float)
        v1 = normalized_v(analysis.TimeSeries(t, base)).values
        v2 = normalized_v(analysis.TimeSeries(t, c * base + d)).values
        if not np.allclose(v1, v2, atol=1e-10):
            problems.append("affine invariance violated")
            break
    return not problems, "; ".join(problems) if problems else "delta_n and V algebra verified"


def criterion_noise_qualitative():
    shots = 16384
    spec = CentralSpinSpec.default(2)
    offsets = []
    for n_steps in (1, 2, 3):
        exp = full_experiment(two_pes(np.pi), spec, 0.0, n_steps)
        counts = run_noisy(exp.circuit, IBMQX4_LIKE, shots, [42, n_steps])
        offsets.append(analysis.occupation_from_counts(counts, [spec.central]))
    problems = []
    if not (offsets[0] > 0 and offsets[0] < offsets[1] < offsets[2]):
        problems.append(f"tau=0 offsets not positive and growing: {offsets}")

    taus = np.linspace(0.0, 2.0, 8)
    noisy_max = 0.0
    clean_max = 0.0
    for i, tau in enumerate(taus):
        exp = full_experiment(two_pes(0.0), spec, tau, 2)
        counts = run_noisy(exp.circuit, IBMQX4_LIKE, shots, [43, i])
        noisy_max = max(noisy_max, analysis.occupation_from_counts(counts, [spec.central]))
        state = run(exp.circuit, new_zero_state(spec.n_qubits))
        clean_max = max(clean_max, excited_population(state, spec.central))
    if not noisy_max < clean_max:
        problems.append(f"no suppression: noisy max {noisy_max} >= clean max {clean_max}")
    return not problems, "; ".join(problems) if problems else (
        f"offsets {['%.4f' % o for o in offsets]}; max {noisy_max:.4f} < {clean_max:.4f}"
    )


def criterion_determinism_capacity():
    config = ExperimentConfig(
        model=IsingSpec.ladder(8, alpha=2.0),
        initial=models.ferromagnetic(),
        trotter_n=1,
        times=analysis.time_grid(0.0, 2.0, 20),
        shots=8192,
        seed=7,
        model_tag="ladder16",
        initial_tag="ferro",
    )
    start = time.perf_counter()
    first = series_to_csv(assemble_series(config, "ideal"))
    elapsed = time.perf_counter() - start
    second = series_to_csv(assemble_series(config, "ideal"))
    problems = []
    if first != second:
        problems.append("CSV output not byte-identical across runs")
    if elapsed >= 300:
        problems.append(f"16-qubit sweep took {elapsed:.1f}s (>= 300s)")
    return not problems, "; ".join(problems) if problems else (
        f"byte-identical CSVs; 16-qubit sweep in {elapsed:.1f}s"
    )


CRITERIA = [
    (1, "oracle_equivalence", criterion_oracle_equivalence),
    (2, "dark_state_blockade", criterion_dark_state_blockade),
    (3, "trotter_artifact_monotonic", criterion_trotter_artifact_monotonic),
    (4, "collective_rabi_scaling", criterion_collective_rabi),
    (5, "trotter_convergence", criterion_trotter_convergence),
    (6, "state_preparation_exactness", criterion_state_preparation),
    (7, "cnot_census", criterion_cnot_census),
    (8, "theory_curve_regeneration", criterion_theory_curves),
    (9, "mitigation_algebra", criterion_mitigation_algebra),
    (10, "noise_qualitative", criterion_noise_qualitative),
    (11, "determinism_and_capacity", criterion_determinism_capacity),
]


def run_criterion(number: int, name: str, func) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, details = func()
    except Exception as exc:  # a crash is a failure, not an abort
        passed, details = False, f"exception: {exc!r}"
    return CriterionResult(number, name, passed, time.perf_counter() - start, details)


def run_all() -> list[CriterionResult]:
    return [run_criterion(num, name, func) for num, name, func in CRITERIA]
