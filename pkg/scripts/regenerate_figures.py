#!/usr/bin/env python3
"""Regenerate every figure preset's data series into data/<preset>/.

Equivalent to looping `spindigit run --preset <name>` over all presets,
kept as a script so a full regeneration is one command. Pass preset names
to restrict the run; --backend switches all of them at once.
"""

import argparse
import sys
import time
from pathlib import Path

from spindigit.analysis import assemble_series, delta_n, normalized_v, series_filename, series_to_csv
from spindigit.presets import FIGURE_PRESETS


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("presets", nargs="*", default=[], help="subset of presets (default: all)")
    ap.add_argument("--backend", default=None, help="override the preset's default backend")
    ap.add_argument("--out-dir", type=Path, default=Path("data"))
    args = ap.parse_args(argv)

    names = args.presets or sorted(FIGURE_PRESETS)
    unknown = [n for n in names if n not in FIGURE_PRESETS]
    if unknown:
        ap.error(f"unknown presets: {', '.join(unknown)}")

    for name in names:
        preset = FIGURE_PRESETS[name]
        backend = args.backend or preset.default_backend
        out = args.out_dir / name
        out.mkdir(parents=True, exist_ok=True)
        started = time.perf_counter()
        for config in preset.configs:
            series = assemble_series(config, backend)
            if preset.post == "delta_n":
                series = delta_n(series)
            elif preset.post == "v_max":
                series = normalized_v(series, "max")
            (out / series_filename(series)).write_text(series_to_csv(series))
        print(f"{name}: {len(preset.configs)} series via {backend} "
              f"in {time.perf_counter() - started:.1f}s -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
