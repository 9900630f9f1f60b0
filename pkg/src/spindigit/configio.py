"""Flat key=value config files (INI sections) for experiments and noise.

Experiment file schema::

    [model]
    preset = ising:chain8          ; or type = central-spin / ising
    ; central-spin: L, g
    ; ising: n, edges = 0-1,1-2,..., J, alpha

    [initial]
    kind = 2pes                    ; 2pes | 3pes | central_excited | ferromagnetic
    phase = 3.14159                ; required for 2pes / 3pes

    [run]
    trotter_n = 1
    t_start = 0.0
    t_stop = 2.0
    t_points = 20
    shots = 8192
    seed = 0

    [noise]                        ; optional
    preset = ibmqx4-like           ; or explicit keys below

Noise file schema (also accepted as the [noise] section)::

    p_cnot = 0.03
    p_u3 = 0.002
    t1 = 50.0
    t2 = 40.0
    dur_u3 = 0.1
    dur_cnot = 0.4
    readout_p01 = 0.0              ; P(report 1 | true 0)
    readout_p10 = 0.0              ; P(report 0 | true 1)
"""

from __future__ import annotations

import configparser
import math

from .analysis import ExperimentConfig, time_grid
from .errors import ValidationError
from .models import (
    CentralSpinSpec,
    InitialStateSpec,
    IsingSpec,
)
from .noise import IBMQX4_LIKE, NOISELESS, NoiseModel
from .presets import model_by_name

NOISE_PRESETS = {"noiseless": NOISELESS, "ibmqx4-like": IBMQX4_LIKE}


def _parse_edges(text: str) -> tuple[tuple[int, int], ...]:
    edges = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            i, j = part.split("-")
            edges.append((int(i), int(j)))
        except ValueError:
            raise ValidationError(f"bad edge {part!r}; expected i-j")
    return tuple(edges)


def noise_from_mapping(section) -> NoiseModel:
    if "preset" in section:
        name = section["preset"]
        try:
            return NOISE_PRESETS[name]
        except KeyError:
            raise ValidationError(
                f"unknown noise preset {name!r}; valid: {', '.join(NOISE_PRESETS)}"
            )
    p01 = float(section.get("readout_p01", 0.0))
    p10 = float(section.get("readout_p10", 0.0))
    return NoiseModel(
        p_cnot=float(section.get("p_cnot", 0.0)),
        p_u3=float(section.get("p_u3", 0.0)),
        t1=float(section.get("t1", math.inf)),
        t2=float(section.get("t2", math.inf)),
        dur_u3=float(section.get("dur_u3", 0.0)),
        dur_cnot=float(section.get("dur_cnot", 0.0)),
        readout=((1 - p01, p01), (p10, 1 - p10)),
    )


def load_noise_file(path) -> NoiseModel:
    parser = configparser.ConfigParser()
    with open(path) as fh:
        content = fh.read()
    if not content.lstrip().startswith("["):
        content = "[noise]\n" + content
    parser.read_string(content)
    section = parser["noise"] if parser.has_section("noise") else parser[parser.sections()[0]]
    return noise_from_mapping(section)


def _model_from_section(section):
    if "preset" in section:
        return section["preset"], model_by_name(section["preset"])
    kind = section.get("type")
    if kind == "central-spin":
        L = int(section.get("L", 2))
        spec = CentralSpinSpec.default(L, g=float(section.get("g", 1.0)))
        return f"centralspinL{L}", spec
    if kind == "ising":
        if "edges" not in section:
            raise ValidationError("ising model config requires an edges list")
        spec = IsingSpec(
            n_spins=int(section["n"]),
            edges=_parse_edges(section["edges"]),
            J=float(section.get("J", 1.0)),
            alpha=float(section.get("alpha", 1.0)),
        )
        return f"ising{spec.n_spins}", spec
    raise ValidationError("model section needs preset= or type=central-spin/ising")


def load_experiment_file(path) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValidationError(f"cannot read config file {path}")
    for required in ("model", "initial", "run"):
        if not parser.has_section(required):
            raise ValidationError(f"config missing [{required}] section")

    model_tag, model = _model_from_section(parser["model"])
    init_section = parser["initial"]
    kind = init_section.get("kind")
    phase = init_section.getfloat("phase") if "phase" in init_section else None
    initial = InitialStateSpec(kind, phase)
    initial_tag = kind if phase is None else f"{kind}-phase{phase:g}"

    r = parser["run"]
    times = time_grid(
        r.getfloat("t_start", 0.0), r.getfloat("t_stop", 2.0), r.getint("t_points", 20)
    )
    noise = noise_from_mapping(parser["noise"]) if parser.has_section("noise") else None
    return ExperimentConfig(
        model=model,
        initial=initial,
        trotter_n=r.getint("trotter_n", 1),
        times=times,
        shots=r.getint("shots", 8192),
        seed=r.getint("seed", 0),
        noise=noise,
        model_tag=model_tag.replace(":", "-"),
        initial_tag=initial_tag,
    )
