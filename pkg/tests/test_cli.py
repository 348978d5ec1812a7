"""Tests of the CLI: configs, overrides, datasets, manifests, exit codes."""

import hashlib
import json

import numpy as np
import pytest

from presliding import ConfigError, FrictionParams, SimConfig, simulate
from presliding.cli import (
    ExperimentConfig,
    apply_overrides,
    config_from_dict,
    default_config,
    load_config,
    main,
    run_experiment,
)


def run_kind(kind, out_dir, **top):
    data = default_config(kind)
    data.update(top)
    data["output_dir"] = str(out_dir)
    return run_experiment(config_from_dict(data))


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------

def test_default_config_roundtrips():
    for kind in ("simulate", "chain", "fig3", "fig7", "validate"):
        cfg = config_from_dict(default_config(kind))
        assert isinstance(cfg, ExperimentConfig)
        assert cfg.kind == kind


def test_unknown_kind_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"kind": "fig9"})
    with pytest.raises(ConfigError):
        default_config("fig9")


def test_unknown_fields_reported_with_path():
    data = default_config("fig3")
    data["params"]["sigmma"] = 2.0
    with pytest.raises(ConfigError, match="params"):
        config_from_dict(data)
    data2 = default_config("fig3")
    data2["extra"] = 1
    with pytest.raises(ConfigError, match="extra"):
        config_from_dict(data2)


def test_invalid_params_reported_with_path():
    data = default_config("fig3")
    data["params"]["sigma"] = -1.0
    with pytest.raises(ConfigError, match="params"):
        config_from_dict(data)


def test_empty_sweep_rejected():
    data = default_config("fig3")
    data["sweep"] = []
    with pytest.raises(ConfigError, match="sweep"):
        config_from_dict(data)


def test_invalid_sim_rejected_at_parse_time():
    data = default_config("simulate")
    data["sim"]["v0"] = 0.0
    with pytest.raises(ConfigError, match="sim"):
        config_from_dict(data)


def test_overrides_nested_and_typed():
    data = default_config("fig3")
    apply_overrides(
        data, ["params.sigma=2.5", "sweep=[1,10]", "sim.max_reversals=null", "output_dir=elsewhere"]
    )
    cfg = config_from_dict(data)
    assert cfg.params.sigma == 2.5
    assert cfg.sweep == (1.0, 10.0)
    assert cfg.sim.max_reversals is None
    assert str(cfg.output_dir) == "elsewhere"


def test_override_comma_list():
    data = default_config("fig6")
    apply_overrides(data, ["sweep=10,100"])
    assert config_from_dict(data).sweep == (10.0, 100.0)


def test_override_requires_key_value():
    with pytest.raises(ConfigError):
        apply_overrides({}, ["nonsense"])


def test_load_config_kind_mismatch(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"kind": "fig3"}))
    with pytest.raises(ConfigError, match="does not match"):
        load_config("fig4", str(path), [], None)


def test_load_config_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        load_config("fig3", "no/such/file.json", [], None)


def test_load_config_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_config("fig3", str(path), [], None)


# ---------------------------------------------------------------------------
# experiment outputs
# ---------------------------------------------------------------------------

def test_fig3_dataset(tmp_path):
    code, paths = run_kind("fig3", tmp_path)
    assert code == 0
    table = np.genfromtxt(tmp_path / "fig3.csv", delimiter=",", names=True)
    assert table.dtype.names == ("F_i_over_Fc", "ratio", "E_p")
    assert len(table) == 4 * 100
    assert set(np.unique(table["ratio"])) == {1.0, 10.0, 100.0, 1000.0}
    assert np.all(table["E_p"] > 0.0)
    # each series spans the full admissible force range
    sub = table[table["ratio"] == 10.0]
    assert sub["F_i_over_Fc"][0] == pytest.approx(0.01)
    assert sub["F_i_over_Fc"][-1] == pytest.approx(1.0)


def test_fig4_dataset(tmp_path):
    run_kind("fig4", tmp_path)
    table = np.genfromtxt(tmp_path / "fig4.csv", delimiter=",", names=True)
    assert table.dtype.names == ("ratio", "F_i_over_Fc", "x", "omega", "omega_star")
    assert set(np.unique(table["ratio"])) == {1.0, 2.0, 8.0}
    assert set(np.round(np.unique(table["F_i_over_Fc"]), 10)) == {0.2, 0.4, 0.6, 0.8, 1.0}
    # both factors anchored at 1 at the reversal frame origin
    at0 = table[table["x"] == 0.0]
    assert np.all(at0["omega"] == 1.0)
    assert np.all(at0["omega_star"] == 1.0)


def test_fig5_dataset(tmp_path):
    run_kind("fig5", tmp_path)
    curves = np.genfromtxt(tmp_path / "fig5.csv", delimiter=",", names=True)
    preds = np.genfromtxt(tmp_path / "fig5_predictions.csv", delimiter=",", names=True)
    assert set(np.unique(curves["F_c"])) == {1.0, 1.5, 2.0}
    assert len(preds) == 3
    # exact predictions are finite; printed-form entries may be nan
    assert np.all(np.isfinite(preds["x_next_exact"]))
    # curve forces stay within each friction level
    for f_c in (1.0, 1.5, 2.0):
        sub = curves[curves["F_c"] == f_c]
        assert np.all(np.abs(sub["F"]) <= f_c * (1 + 1e-12))
        assert sub["F"][0] == pytest.approx(-f_c)


def test_fig6_dataset(tmp_path):
    run_kind("fig6", tmp_path)
    table = np.genfromtxt(tmp_path / "fig6.csv", delimiter=",", names=True)
    assert table.dtype.names == ("ratio", "n", "F_n", "x_n", "E_p", "E_d")
    for ratio in (10.0, 100.0, 1000.0):
        sub = table[table["ratio"] == ratio]
        assert len(sub) == 20
        assert np.all(np.diff(sub["E_p"]) < 0.0)


def test_fig7_dataset(tmp_path):
    run_kind("fig7", tmp_path)
    readme = (tmp_path / "README.txt").read_text()
    assert "energy_magnitude" in readme
    for ratio in (10, 100, 1000):
        traj = np.genfromtxt(
            tmp_path / f"fig7_traj_ratio{ratio}.csv", delimiter=",", names=True
        )
        env = np.genfromtxt(
            tmp_path / f"fig7_envelope_ratio{ratio}.csv", delimiter=",", names=True
        )
        assert traj.dtype.names == ("t", "energy_magnitude")
        assert env.dtype.names == ("i", "t_i", "E_p")
        assert np.all(np.diff(env["t_i"]) > 0.0)
        assert np.all(np.diff(env["E_p"]) < 0.0)
        # envelope dominates the signal tail near each of its instants
        assert env["E_p"][0] <= traj["energy_magnitude"].max() * (1 + 1e-12)


def test_fig7_envelope_matches_direct_simulation(tmp_path):
    run_kind("fig7", tmp_path, sweep=[10])
    env = np.genfromtxt(tmp_path / "fig7_envelope_ratio10.csv", delimiter=",", names=True)
    p = FrictionParams(f_c=1.0, sigma=10.0)
    traj = simulate(SimConfig(params=p, x0=0.0, v0=0.5, max_reversals=12, t_max=200.0))
    assert len(env) == len(traj.reversals)
    for row, rec in zip(env, traj.reversals):
        assert row["E_p"] == rec.e_p


def test_simulate_and_chain_kinds(tmp_path):
    run_kind("simulate", tmp_path / "s", sim={"max_reversals": 3})
    rev = np.genfromtxt(tmp_path / "s" / "reversals.csv", delimiter=",", names=True)
    assert len(rev) == 3
    run_kind("chain", tmp_path / "c", chain={"n_steps": 7, "mode": "approx"})
    ch = np.genfromtxt(tmp_path / "c" / "chain.csv", delimiter=",", names=True)
    assert len(ch) == 7


def test_manifest_lists_every_file_with_true_digests(tmp_path):
    run_kind("fig5", tmp_path)
    lines = (tmp_path / "manifest.txt").read_text().splitlines()
    assert lines[0] == "filename,rows,sha256"
    listed = {}
    for line in lines[1:]:
        name, rows, digest = line.split(",")
        listed[name] = (int(rows), digest)
    produced = {p.name for p in tmp_path.iterdir()} - {"manifest.txt"}
    assert set(listed) == produced
    for name, (rows, digest) in listed.items():
        data = (tmp_path / name).read_bytes()
        assert hashlib.sha256(data).hexdigest() == digest
        assert rows == len(data.splitlines()) - 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def test_main_success(tmp_path, capsys):
    assert main(["fig3", "--out", str(tmp_path), "--override", "sweep=[1]"]) == 0
    assert "fig3.csv" in capsys.readouterr().out


def test_main_config_error(tmp_path, capsys):
    assert main(["fig3", "--out", str(tmp_path), "--override", "sweep=[]"]) == 2
    assert "config error" in capsys.readouterr().err


def test_main_reads_config_file(tmp_path, capsys):
    cfg = {"kind": "chain", "chain": {"n_steps": 4}, "output_dir": str(tmp_path)}
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(cfg))
    assert main(["chain", "--config", str(path)]) == 0
    assert (tmp_path / "chain.csv").exists()
