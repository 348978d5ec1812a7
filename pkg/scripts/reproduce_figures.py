#!/usr/bin/env python3
"""Regenerate every figure dataset plus the validation report in one go.

Usage:
    python scripts/reproduce_figures.py [--out OUT_DIR]

Equivalent to running `presliding <kind> --config configs/<kind>.json` for
each kind; exits nonzero if any validation check fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from presliding.cli import config_from_dict, default_config, run_experiment

KINDS = ("fig3", "fig4", "fig5", "fig6", "fig7", "validate")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="root output directory")
    args = parser.parse_args()

    worst = 0
    for kind in KINDS:
        data = default_config(kind)
        data["output_dir"] = str(Path(args.out) / kind)
        code, paths = run_experiment(config_from_dict(data))
        worst = max(worst, code)
        print(f"{kind}: exit {code}, {len(paths)} files in {Path(args.out) / kind}")
    return worst


if __name__ == "__main__":
    sys.exit(main())
