"""Command-line front end: figure-preset runs, circuit export, verification.

Exit codes: 0 success, 1 validation error, 2 capacity error.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import replace
from pathlib import Path

import click

from . import __version__
from .acceptance import run_all
from .analysis import assemble_series, delta_n, normalized_v, series_filename, series_to_csv
from .circuit import export_openqasm
from .configio import NOISE_PRESETS, load_experiment_file, load_noise_file
from .errors import CapacityError, ValidationError
from .models import full_experiment
from .noise import IBMQX4_LIKE
from .presets import FIGURE_PRESETS, preset_by_name

EXIT_VALIDATION = 1
EXIT_CAPACITY = 2


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_CAPACITY if isinstance(exc, CapacityError) else EXIT_VALIDATION)


def _atomic_write(path: Path, content: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_configs(preset, config_path, backend, trotter_n, shots, seed, noise_file):
    """Returns (figure label, post op, default backend, list of configs)."""
    if preset and config_path:
        raise ValidationError("give either --preset or --config, not both")
    if preset:
        p = preset_by_name(preset)
        configs = list(p.configs)
        figure, post, default_backend = p.figure, p.post, p.default_backend
    elif config_path:
        configs = [load_experiment_file(config_path)]
        figure, post, default_backend = "custom", None, "ideal"
    else:
        raise ValidationError(
            "a --preset or --config is required; valid presets: "
            + ", ".join(sorted(FIGURE_PRESETS))
        )
    chosen_backend = backend or default_backend
    noise = load_noise_file(noise_file) if noise_file else None
    if noise is None and chosen_backend == "noisy":
        noise = IBMQX4_LIKE
    out = []
    for cfg in configs:
        if trotter_n is not None:
            cfg = replace(cfg, trotter_n=trotter_n)
        if shots is not None:
            cfg = replace(cfg, shots=shots)
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        if noise is not None:
            cfg = replace(cfg, noise=noise)
        out.append(cfg)
    return figure, post, chosen_backend, out


def _config_hash(configs, backend: str) -> str:
    digest = hashlib.sha256()
    digest.update(backend.encode())
    for cfg in configs:
        digest.update(repr(cfg).encode())
    return digest.hexdigest()[:16]


@click.group()
@click.version_option(__version__)
def main():
    """Trotterized spin-model simulation toolkit."""


_common = [
    click.option("--preset", help="figure preset name (fig8..figA22)"),
    click.option("--config", "config_path", type=click.Path(exists=True), help="experiment config file"),
    click.option("--backend", type=click.Choice(["oracle", "ideal", "noisy", "exact"]), default=None),
    click.option("--trotter-n", type=int, default=None),
    click.option("--shots", type=int, default=None),
    click.option("--seed", type=int, default=None),
    click.option("--noise-file", type=click.Path(exists=True), default=None, help="noise model config file"),
    click.option("--out-dir", type=click.Path(), default="out"),
]


def _with_common(cmd):
    for opt in reversed(_common):
        cmd = opt(cmd)
    return cmd


@main.command("run")
@_with_common
@click.option("--plot-stub/--no-plot-stub", default=False, help="emit a matplotlib plot-script stub")
def cmd_run(preset, config_path, backend, trotter_n, shots, seed, noise_file, out_dir, plot_stub):
    """Run an experiment sweep and write one CSV per curve plus a manifest."""
    started = time.perf_counter()
    try:
        figure, post, chosen_backend, configs = _resolve_configs(
            preset, config_path, backend, trotter_n, shots, seed, noise_file
        )
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for cfg in configs:
            series = assemble_series(cfg, chosen_backend)
            if post == "delta_n":
                series = delta_n(series)
            elif post == "v_max":
                series = normalized_v(series, "max")
            name = series_filename(series)
            _atomic_write(out / name, series_to_csv(series))
            files.append(name)
            click.echo(f"wrote {out / name}")
        manifest = {
            "preset": preset or "custom",
            "figure": figure,
            "backend": chosen_backend,
            "quality": "qualitative (placeholder noise)" if chosen_backend == "noisy" else "exact-arithmetic",
            "post": post,
            "files": files,
            "config_hash": _config_hash(configs, chosen_backend),
            "version": __version__,
            "wall_time_s": round(time.perf_counter() - started, 3),
        }
        _atomic_write(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
        if plot_stub:
            _atomic_write(out / "plot.py", _PLOT_STUB)
        click.echo(f"wrote {out / 'manifest.json'}")
    except (ValidationError, OSError) as exc:
        _fail(exc)


@main.command("export")
@_with_common
@click.option("--time", "at_time", type=float, default=None, help="export a single time point")
def cmd_export(preset, config_path, backend, trotter_n, shots, seed, noise_file, out_dir, at_time):
    """Export compiled circuits as OpenQASM 2.0 files."""
    try:
        _, _, _, configs = _resolve_configs(
            preset, config_path, backend, trotter_n, shots, seed, noise_file
        )
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for cfg in configs:
            times = [at_time] if at_time is not None else list(cfg.times)
            for t in times:
                exp = full_experiment(cfg.initial, cfg.model, t, cfg.trotter_n)
                name = f"{cfg.model_tag}_{cfg.initial_tag}_N{cfg.trotter_n}_t{t:.4f}.qasm"
                _atomic_write(out / name, export_openqasm(exp.circuit))
                click.echo(f"wrote {out / name}")
    except (ValidationError, OSError) as exc:
        _fail(exc)


@main.command("verify")
@click.option("--report", type=click.Path(), default=None, help="write a JSON report")
def cmd_verify(report):
    """Run every acceptance criterion; exit 0 iff all pass."""
    results = run_all()
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"[{status}] criterion {r.number:2d} {r.name} ({r.runtime_s:.2f}s): {r.details}")
    if report:
        payload = [
            {
                "number": r.number,
                "name": r.name,
                "passed": r.passed,
                "runtime_s": round(r.runtime_s, 3),
                "details": r.details,
            }
            for r in results
        ]
        _atomic_write(Path(report), json.dumps(payload, indent=2) + "\n")
    sys.exit(0 if all(r.passed for r in results) else 1)


@main.command("presets")
def cmd_presets():
    """List figure presets and noise presets."""
    for name in sorted(FIGURE_PRESETS):
        click.echo(f"{name}: {FIGURE_PRESETS[name].description}")
    click.echo("noise presets: " + ", ".join(sorted(NOISE_PRESETS)))


_PLOT_STUB = """\
#!/usr/bin/env python3
\"\"\"Plot every CSV curve in this directory.\"\"\"
import csv
import glob

import matplotlib.pyplot as plt

for path in sorted(glob.glob("*.csv")):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    taus = [float(r["tau"]) for r in rows]
    vals = [float(r["value"]) for r in rows]
    plt.plot(taus, vals, marker="o", label=path[:-4])
plt.xlabel("time")
plt.ylabel("occupation")
plt.legend(fontsize=7)
plt.tight_layout()
plt.savefig("curves.png", dpi=150)
"""
