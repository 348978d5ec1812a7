"""Command-line front end.

Each subcommand corresponds to one experiment kind and accepts the same
flags:

    presliding <kind> [--config cfg.json] [--out DIR] [--override k.path=v ...]

Kinds: simulate, chain, fig3..fig7, validate. Configs are JSON with
nested keys (schema documented in the README); every kind has complete
built-in defaults, so --config is optional. Runs are fully deterministic:
identical configs produce byte-identical CSVs, and every run writes a
manifest.txt listing filename, data row count and sha256 of each produced
file.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from ._csv import write_csv
from .errors import ConfigError, DomainError
from .figures import (
    FIG7_README,
    fig3_table,
    fig4_table,
    fig5_tables,
    fig6_table,
    fig7_energy_magnitude,
    fig7_envelope,
)
from .hysteresis import FrictionParams
from .oscillator import SimConfig, simulate, write_reversals_csv, write_trajectory_csv
from .reversal import reversal_chain, write_chain_csv
from .validation import AUDIT_HEADER, run_all

__all__ = [
    "KINDS",
    "ExperimentConfig",
    "SimSettings",
    "ChainSettings",
    "default_config",
    "load_config",
    "run_experiment",
    "main",
]

KINDS = ("simulate", "chain", "fig3", "fig4", "fig5", "fig6", "fig7", "validate")

_DEFAULT_SWEEPS = {
    "fig3": (1.0, 10.0, 100.0, 1000.0),
    "fig4": (1.0, 2.0, 8.0),
    "fig5": (1.0, 1.5, 2.0),  # friction levels at fixed sigma
    "fig6": (10.0, 100.0, 1000.0),
    "fig7": (10.0, 100.0, 1000.0),
}


@dataclass(frozen=True)
class SimSettings:
    """SimConfig fields exposed to experiment configs."""

    x0: float = 0.0
    v0: float = 0.5
    f0: float = 0.0
    dt: Optional[float] = None
    t_max: float = 200.0
    max_reversals: Optional[int] = 12
    stop_energy: Optional[float] = None


@dataclass(frozen=True)
class ChainSettings:
    """Reversal-chain fields exposed to experiment configs."""

    f0_over_fc: float = -1.0
    n_steps: int = 20
    mode: str = "exact"


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    params: FrictionParams
    sweep: Optional[tuple[float, ...]]
    sim: SimSettings
    chain: ChainSettings
    output_dir: Path


def default_config(kind: str) -> dict:
    """Built-in config dict for a kind (the documented schema)."""
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; expected one of {KINDS}")
    return {
        "kind": kind,
        "params": {"f_c": 1.0, "sigma": 1.0, "gamma": 1.0, "mass": 1.0},
        "sweep": list(_DEFAULT_SWEEPS.get(kind, [])) or None,
        "sim": dataclasses.asdict(SimSettings()),
        "chain": dataclasses.asdict(ChainSettings()),
        "output_dir": "out",
    }


def _parse_override_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        if "," in raw:
            try:
                return [float(tok) for tok in raw.split(",") if tok]
            except ValueError:
                pass
        return raw


def apply_overrides(data: dict, overrides: Sequence[str]) -> dict:
    """Apply repeatable `key.path=value` overrides onto a config dict."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, raw = item.partition("=")
        node = data
        parts = key.split(".")
        for part in parts[:-1]:
            nxt = node.get(part)
            if not isinstance(nxt, dict):
                nxt = {}
                node[part] = nxt
            node = nxt
        node[parts[-1]] = _parse_override_value(raw)
    return data


def _build_dataclass(cls, data: dict, path: str):
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
    try:
        return cls(**data)
    except (ConfigError, DomainError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def config_from_dict(data: dict) -> ExperimentConfig:
    data = dict(data)
    kind = data.pop("kind", None)
    if kind not in KINDS:
        raise ConfigError(f"kind: expected one of {KINDS}, got {kind!r}")
    merged = default_config(kind)
    for key in ("params", "sim", "chain"):
        section = data.pop(key, None)
        if section is not None:
            if not isinstance(section, dict):
                raise ConfigError(f"{key}: expected an object, got {section!r}")
            merged[key].update(section)
    for key in ("sweep", "output_dir"):
        if key in data:
            merged[key] = data.pop(key)
    if data:
        raise ConfigError(f"unknown top-level field(s) {sorted(data)}")

    params = _build_dataclass(FrictionParams, merged["params"], "params")
    sim = _build_dataclass(SimSettings, merged["sim"], "sim")
    chain = _build_dataclass(ChainSettings, merged["chain"], "chain")
    if chain.mode not in ("exact", "approx"):
        raise ConfigError(f"chain.mode: expected 'exact' or 'approx', got {chain.mode!r}")
    if chain.n_steps < 1:
        raise ConfigError(f"chain.n_steps: must be >= 1, got {chain.n_steps}")

    sweep = merged["sweep"]
    if sweep is not None:
        if not isinstance(sweep, (list, tuple)):
            raise ConfigError(f"sweep: expected a list, got {sweep!r}")
        if len(sweep) == 0:
            raise ConfigError("sweep: must not be empty")
        try:
            sweep = tuple(float(v) for v in sweep)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"sweep: {exc}") from exc
        if any(v <= 0 for v in sweep):
            raise ConfigError("sweep: entries must be positive")

    # fail on invalid sim settings now, not mid-run
    _sim_config(params, sim, path="sim")

    return ExperimentConfig(
        kind=kind,
        params=params,
        sweep=sweep,
        sim=sim,
        chain=chain,
        output_dir=Path(merged["output_dir"]),
    )


def load_config(
    kind: str,
    config_path: Optional[str],
    overrides: Sequence[str],
    out_dir: Optional[str],
) -> ExperimentConfig:
    """Load a config file (or defaults) for a subcommand and apply overrides."""
    if config_path is None:
        data = default_config(kind)
    else:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        data.setdefault("kind", kind)
        if data["kind"] != kind:
            raise ConfigError(
                f"config kind {data['kind']!r} does not match subcommand {kind!r}"
            )
    apply_overrides(data, overrides)
    if out_dir is not None:
        data["output_dir"] = out_dir
    return config_from_dict(data)


def _sim_config(params: FrictionParams, sim: SimSettings, path: str = "sim") -> SimConfig:
    try:
        return SimConfig(
            params=params,
            x0=sim.x0,
            v0=sim.v0,
            f0=sim.f0,
            dt=sim.dt,
            t_max=sim.t_max,
            max_reversals=sim.max_reversals,
            stop_energy=sim.stop_energy,
        )
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _ratio_params(cfg: ExperimentConfig, ratio: float) -> FrictionParams:
    return FrictionParams(
        f_c=cfg.params.f_c,
        sigma=ratio * cfg.params.f_c,
        gamma=cfg.params.gamma,
        mass=cfg.params.mass,
    )


def _suffix(ratio: Optional[float]) -> str:
    return "" if ratio is None else f"_ratio{ratio:g}"


class _Collector:
    """Writes output files and accumulates manifest entries."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        out_dir.mkdir(parents=True, exist_ok=True)
        self.entries: list[tuple[str, int]] = []

    def csv(self, name: str, header: Sequence[str], rows) -> Path:
        path = self.out_dir / name
        n = write_csv(path, header, rows)
        self.entries.append((name, n))
        return path

    def csv_via(self, name: str, writer, *args) -> Path:
        path = self.out_dir / name
        n = writer(*args, path)
        self.entries.append((name, n))
        return path

    def text(self, name: str, content: str) -> Path:
        path = self.out_dir / name
        path.write_text(content, encoding="utf-8", newline="\n")
        self.entries.append((name, 0))
        return path

    def finish(self) -> list[Path]:
        lines = ["filename,rows,sha256"]
        for name, rows in sorted(self.entries):
            digest = hashlib.sha256((self.out_dir / name).read_bytes()).hexdigest()
            lines.append(f"{name},{rows},{digest}")
        manifest = self.out_dir / "manifest.txt"
        manifest.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        return [self.out_dir / name for name, _ in self.entries] + [manifest]


def run_experiment(cfg: ExperimentConfig) -> tuple[int, list[Path]]:
    """Execute one experiment config; returns (exit_code, written_paths)."""
    out = _Collector(cfg.output_dir)
    code = 0

    if cfg.kind == "simulate":
        ratios = cfg.sweep or (None,)
        for ratio in ratios:
            p = cfg.params if ratio is None else _ratio_params(cfg, ratio)
            traj = simulate(_sim_config(p, cfg.sim))
            sfx = _suffix(ratio)
            out.csv_via(f"trajectory{sfx}.csv", write_trajectory_csv, traj)
            out.csv_via(f"reversals{sfx}.csv", write_reversals_csv, traj)

    elif cfg.kind == "chain":
        ratios = cfg.sweep or (None,)
        for ratio in ratios:
            p = cfg.params if ratio is None else _ratio_params(cfg, ratio)
            entries = reversal_chain(
                cfg.chain.f0_over_fc * p.f_c, cfg.chain.n_steps, p, mode=cfg.chain.mode
            )
            out.csv_via(f"chain{_suffix(ratio)}.csv", write_chain_csv, entries)

    elif cfg.kind == "fig3":
        header, rows = fig3_table(cfg.params, cfg.sweep)
        out.csv("fig3.csv", header, rows)

    elif cfg.kind == "fig4":
        header, rows = fig4_table(cfg.params, cfg.sweep)
        out.csv("fig4.csv", header, rows)

    elif cfg.kind == "fig5":
        for name, header, rows in fig5_tables(
            cfg.params.sigma, cfg.sweep, mass=cfg.params.mass
        ):
            out.csv(name, header, rows)

    elif cfg.kind == "fig6":
        header, rows = fig6_table(cfg.params, cfg.sweep, cfg.chain.n_steps, cfg.chain.mode)
        out.csv("fig6.csv", header, rows)

    elif cfg.kind == "fig7":
        for ratio in cfg.sweep:
            p = _ratio_params(cfg, ratio)
            traj = simulate(_sim_config(p, cfg.sim))
            header, rows = fig7_energy_magnitude(traj)
            out.csv(f"fig7_traj_ratio{ratio:g}.csv", header, rows)
            header, rows = fig7_envelope(traj)
            out.csv(f"fig7_envelope_ratio{ratio:g}.csv", header, rows)
        out.text("README.txt", FIG7_README)

    elif cfg.kind == "validate":
        report = run_all()
        out.csv(
            "validation_report.csv",
            ["check", "status", "measured", "tolerance", "detail"],
            (
                (c.name, "pass" if c.passed else "FAIL", c.measured, c.tolerance, c.detail)
                for c in report.checks
            ),
        )
        out.csv("approx_audit.csv", AUDIT_HEADER, report.audit_rows)
        for c in report.checks:
            status = "pass" if c.passed else "FAIL"
            print(
                f"[{status}] {c.name}: measured={c.measured:.6g} "
                f"tolerance={c.tolerance:.6g}"
                + (f" ({c.detail})" if c.detail else "")
            )
        if not report.all_passed:
            code = 1

    else:  # pragma: no cover - config_from_dict rejects unknown kinds
        raise ConfigError(f"unknown kind {cfg.kind!r}")

    paths = out.finish()
    return code, paths


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="presliding",
        description="Pre-sliding friction hysteresis experiments and validation.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run the {kind} experiment")
        sp.add_argument("--config", default=None, help="JSON config file")
        sp.add_argument("--out", default=None, help="output directory override")
        sp.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="config override with dotted key path (repeatable)",
        )
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.kind, args.config, args.override, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    code, paths = run_experiment(cfg)
    for path in paths:
        print(f"wrote {path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
