"""Named model and figure presets.

Figure presets bundle model, initial state, Trotter number, and parameter
sweep for each data series the toolkit regenerates; sweep values that come
from figure legends are editable defaults, not contracts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analysis import ExperimentConfig, time_grid
from .errors import ValidationError
from .models import (
    CentralSpinSpec,
    IsingSpec,
    central_excited,
    ferromagnetic,
    three_pes,
    two_pes,
)

DEFAULT_POINTS = 20
DEFAULT_SHOTS = 8192


def model_by_name(name: str):
    """Resolve "central-spin:L=2".."ising:chain8", "ising:ladder16"."""
    if name.startswith("central-spin:L="):
        try:
            L = int(name.split("=", 1)[1])
        except ValueError:
            raise ValidationError(f"bad model name {name!r}")
        return CentralSpinSpec.default(L)
    if name == "ising:chain8":
        return IsingSpec.chain(8)
    if name == "ising:ladder16":
        return IsingSpec.ladder(8)
    raise ValidationError(
        f"unknown model preset {name!r}; expected central-spin:L=1..4, "
        "ising:chain8 or ising:ladder16"
    )


@dataclass(frozen=True)
class FigurePreset:
    name: str
    figure: str
    description: str
    configs: tuple[ExperimentConfig, ...]
    default_backend: str = "oracle"
    post: str | None = None  # None | "delta_n" | "v_max"


def _phi_tag(kind: str, phase: float) -> str:
    return f"{kind}-phi{phase / np.pi:.2f}pi"


def _central_sweep(phases, L, n_steps, kind="2pes", points=DEFAULT_POINTS):
    times = time_grid(0.0, 2.0, points)
    make = two_pes if kind == "2pes" else three_pes
    spec = CentralSpinSpec.default(L)
    return tuple(
        ExperimentConfig(
            model=spec,
            initial=make(phase),
            trotter_n=n_steps,
            times=times,
            shots=DEFAULT_SHOTS,
            seed=0,
            model_tag=f"centralspinL{L}",
            initial_tag=_phi_tag(kind, phase),
        )
        for phase in phases
    )


def _ising_sweep(spec_maker, tag, alphas, n_steps, points=DEFAULT_POINTS):
    times = time_grid(0.0, 2.0, points)
    return tuple(
        ExperimentConfig(
            model=spec_maker(alpha),
            initial=ferromagnetic(),
            trotter_n=n_steps,
            times=times,
            shots=DEFAULT_SHOTS,
            seed=0,
            model_tag=f"{tag}-alpha{alpha:g}J",
            initial_tag="ferro",
        )
        for alpha in alphas
    )


def _rabi_sweep(n_steps, points=DEFAULT_POINTS):
    times = time_grid(0.0, 2.0, points)
    return tuple(
        ExperimentConfig(
            model=CentralSpinSpec.default(L),
            initial=central_excited(),
            trotter_n=n_steps,
            times=times,
            shots=DEFAULT_SHOTS,
            seed=0,
            model_tag=f"centralspinL{L}",
            initial_tag="centralexcited",
        )
        for L in (1, 2, 3, 4)
    )


_TWO_PES_PHASES = (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi)
_THREE_PES_PHASES = (0.0, np.pi / 2, np.pi)
_ISING_ALPHAS = (1.0, 2.0, 5.0)


def _build_presets() -> dict[str, FigurePreset]:
    chain = lambda a: IsingSpec.chain(8, J=1.0, alpha=a)
    ladder = lambda a: IsingSpec.ladder(8, J=1.0, alpha=a)
    presets = [
        FigurePreset(
            "fig8", "fig8",
            "central-spin L=2, 2PES phase sweep, N=1, raw central population",
            _central_sweep(_TWO_PES_PHASES, L=2, n_steps=1),
        ),
        FigurePreset(
            "fig9", "fig9",
            "central-spin L=2, 2PES phase sweep, N=2, offset-subtracted",
            _central_sweep(_TWO_PES_PHASES, L=2, n_steps=2),
            post="delta_n",
        ),
        FigurePreset(
            "fig10", "fig10",
            "central-spin L=2, 2PES phase sweep, N=3, offset-subtracted",
            _central_sweep(_TWO_PES_PHASES, L=2, n_steps=3),
            post="delta_n",
        ),
        FigurePreset(
            "fig11", "fig11",
            "central-spin L=3, 3PES phase sweep, N=1, raw central population",
            _central_sweep(_THREE_PES_PHASES, L=3, n_steps=1, kind="3pes"),
        ),
        FigurePreset(
            "fig12", "fig12",
            "central-spin L=1..4, excited central spin, N=1 (collective Rabi)",
            _rabi_sweep(n_steps=1),
        ),
        FigurePreset(
            "fig14", "fig14",
            "Ising chain-8 quench, alpha in {J,2J,5J}, N=1, raw occupation",
            _ising_sweep(chain, "chain8", _ISING_ALPHAS, n_steps=1),
        ),
        FigurePreset(
            "fig15", "fig15",
            "Ising chain-8 quench, alpha in {J,2J,5J}, N=2, normalized V",
            _ising_sweep(chain, "chain8", _ISING_ALPHAS, n_steps=2),
            post="v_max",
        ),
        FigurePreset(
            "fig17", "fig17",
            "Ising ladder-16 quench, alpha in {J,2J,5J}, N=1, normalized V",
            _ising_sweep(ladder, "ladder16", _ISING_ALPHAS, n_steps=1),
            post="v_max",
        ),
        FigurePreset(
            "figA21", "figA21",
            "Ising chain-8 quench, alpha in {J,2J,5J}, N=2, raw occupation",
            _ising_sweep(chain, "chain8", _ISING_ALPHAS, n_steps=2),
        ),
        FigurePreset(
            "figA22", "figA22",
            "Ising ladder-16 quench, alpha in {J,2J,5J}, N=1, raw occupation",
            _ising_sweep(ladder, "ladder16", _ISING_ALPHAS, n_steps=1),
        ),
    ]
    return {p.name: p for p in presets}


FIGURE_PRESETS = _build_presets()


def preset_by_name(name: str) -> FigurePreset:
    try:
        return FIGURE_PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown preset {name!r}; valid presets: {', '.join(sorted(FIGURE_PRESETS))}"
        )
