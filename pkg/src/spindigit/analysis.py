"""Post-processing of measurement data into plotted quantities.

Occupation observables, the offset-subtraction heuristic delta_n, the
normalized signal V, and the sweep loop that assembles one time series per
experiment configuration.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .circuit import run
from .errors import DegenerateSeriesError, ValidationError
from .models import (
    CentralSpinSpec,
    InitialStateSpec,
    IsingSpec,
    full_experiment,
    initial_state_vector,
    model_terms,
)
from .noise import NoiseModel, run_noisy
from .oracle import ExactEvolver, build_hamiltonian, evolve_matrix_free, trotter_reference
from .oracle import DENSE_CEILING_DEFAULT
from .statevector import MeasurementCounts, excited_population, new_zero_state, sample

BACKENDS = ("oracle", "ideal", "noisy", "exact")


@dataclass
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if len(self.times) != len(self.values):
            raise ValidationError("times and values must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError("times must be strictly increasing")
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=float)
            if len(self.stderr) != len(self.values):
                raise ValidationError("stderr length mismatch")


def occupation_from_counts(counts: MeasurementCounts, qubits) -> float:
    """Mean over `qubits` of the measured frequency of bit 1."""
    qubits = tuple(qubits)
    if not qubits:
        raise ValidationError("qubit subset must be non-empty")
    width = counts.n_qubits
    for q in qubits:
        if not 0 <= q < width:
            raise ValidationError(f"qubit {q} out of range for width {width}")
    total = 0.0
    for bits, c in counts.histogram.items():
        # Bitstrings render qubit 0 rightmost.
        total += c * sum(int(bits[width - 1 - q]) for q in qubits)
    return total / (counts.shots * len(qubits))


def delta_n(series: TimeSeries) -> TimeSeries:
    """values[i] - values[0]; requires the series to start at time 0."""
    if len(series.times) == 0:
        raise ValidationError("empty series")
    if abs(series.times[0]) > 1e-12:
        raise ValidationError("delta_n requires a time-zero point first")
    values = series.values - series.values[0]
    values[0] = 0.0
    meta = dict(series.meta, post="delta_n")
    return TimeSeries(series.times.copy(), values, series.stderr, meta)


def normalized_v(series: TimeSeries, normalizer: str = "max") -> TimeSeries:
    """(n(t) - n(0)) / (max n(t) - n(0)), or the mean-difference variant."""
    if normalizer not in ("max", "mean"):
        raise ValidationError(f"unknown normalizer {normalizer!r}")
    shifted = series.values - series.values[0]
    if normalizer == "max":
        denom = float(np.max(shifted))
        if denom <= 0:
            raise DegenerateSeriesError("flat series: max n(t) does not exceed n(0)")
    else:
        denom = float(np.mean(shifted))
        if abs(denom) < 1e-300:
            raise DegenerateSeriesError("flat series: mean offset is zero")
    meta = dict(series.meta, post=f"normalized_v:{normalizer}")
    stderr = None if series.stderr is None else series.stderr / abs(denom)
    return TimeSeries(series.times.copy(), shifted / denom, stderr, meta)


@dataclass(frozen=True)
class ExperimentConfig:
    model: CentralSpinSpec | IsingSpec
    initial: InitialStateSpec
    trotter_n: int
    times: tuple[float, ...]
    shots: int = 8192
    seed: int = 0
    noise: NoiseModel | None = None
    model_tag: str = "model"
    initial_tag: str = "initial"

    def __post_init__(self):
        if self.trotter_n < 1:
            raise ValidationError("trotter_n must be >= 1")
        if self.shots < 0:
            raise ValidationError("shots must be >= 0 (0 = direct probabilities)")
        if len(self.times) < 1:
            raise ValidationError("time grid must be non-empty")
        if any(b - a <= 0 for a, b in zip(self.times, self.times[1:])):
            raise ValidationError("time grid must be strictly increasing")


def time_grid(start: float, stop: float, points: int) -> tuple[float, ...]:
    return tuple(np.linspace(start, stop, points))


def _mean_population(state, qubits) -> float:
    return float(np.mean([excited_population(state, q) for q in qubits]))


def assemble_series(config: ExperimentConfig, backend: str) -> TimeSeries:
    """One circuit (or oracle evolution) per time point.

    Backends: "oracle" = term-exponential Trotter reference at the config's
    N; "exact" = exp(-iHt); "ideal" = noiseless circuit execution; "noisy"
    = trajectory sampling. shots=0 on sampled backends reads probabilities
    directly.
    """
    if backend not in BACKENDS:
        raise ValidationError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    model = config.model
    values = []
    errs = []

    evolver = None
    terms = model_terms(model)
    if backend in ("oracle", "exact"):
        psi0 = initial_state_vector(config.initial, model)
        if backend == "exact" and model.n_qubits <= DENSE_CEILING_DEFAULT:
            evolver = ExactEvolver(build_hamiltonian(terms, model.n_qubits))

    for i, t in enumerate(config.times):
        experiment = full_experiment(config.initial, model, t, config.trotter_n)
        qubits = experiment.observable_qubits
        if backend == "oracle":
            state = trotter_reference(terms, psi0, t, config.trotter_n)
            values.append(_mean_population(state, qubits))
            errs.append(0.0)
        elif backend == "exact":
            if evolver is not None:
                state = evolver.evolve(psi0, t)
            else:
                state, _ = evolve_matrix_free(terms, psi0, t, substeps=max(256, 64 * config.trotter_n))
            values.append(_mean_population(state, qubits))
            errs.append(0.0)
        else:
            point_seed = [config.seed, i]
            if backend == "ideal":
                state = run(experiment.circuit, new_zero_state(model.n_qubits))
                if config.shots == 0:
                    values.append(_mean_population(state, qubits))
                    errs.append(0.0)
                    continue
                counts = sample(state, config.shots, point_seed)
            else:
                if config.shots == 0:
                    raise ValidationError("noisy backend requires shots >= 1")
                noise = config.noise if config.noise is not None else NoiseModel()
                counts = run_noisy(experiment.circuit, noise, config.shots, point_seed)
            p = occupation_from_counts(counts, qubits)
            values.append(p)
            errs.append(float(np.sqrt(max(p * (1 - p), 0.0) / config.shots)))

    meta = {
        "model": config.model_tag,
        "initial": config.initial_tag,
        "backend": backend,
        "trotter_n": config.trotter_n,
        "shots": config.shots,
        "seed": config.seed,
        "points": len(config.times),
    }
    return TimeSeries(np.array(config.times), np.array(values), np.array(errs), meta)


def series_filename(series: TimeSeries) -> str:
    m = series.meta
    return f"{m['model']}_{m['initial']}_{m['backend']}_N{m['trotter_n']}.csv"


def write_csv(series: TimeSeries, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["tau", "value", "stderr", "shots", "seed"])
    shots = series.meta.get("shots", 0)
    seed = series.meta.get("seed", 0)
    stderr = series.stderr if series.stderr is not None else np.zeros_like(series.values)
    for t, v, e in zip(series.times, series.values, stderr):
        writer.writerow([repr(float(t)), repr(float(v)), repr(float(e)), shots, seed])


def series_to_csv(series: TimeSeries) -> str:
    buf = io.StringIO()
    write_csv(series, buf)
    return buf.getvalue()
