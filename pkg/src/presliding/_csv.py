"""Deterministic CSV writing: 17 significant digits, LF endings, header row."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write rows under a mandatory header; returns the data row count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
            n += 1
    return n
