#!/usr/bin/env python3
"""Regenerate the frozen golden series shipped with the package.

Only run this deliberately: the acceptance suite compares fresh output
against these files, so regenerating them on a changed code base hides
regressions instead of catching them.
"""

import sys
from pathlib import Path

from spindigit.analysis import assemble_series, series_filename, series_to_csv
from spindigit.presets import preset_by_name

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "src" / "spindigit" / "golden"


def main():
    GOLDEN_DIR.mkdir(exist_ok=True)
    for config in preset_by_name("fig8").configs:
        series = assemble_series(config, "oracle")
        path = GOLDEN_DIR / series_filename(series)
        path.write_text(series_to_csv(series))
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
