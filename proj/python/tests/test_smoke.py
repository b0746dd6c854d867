import math
import os

import numpy as np
import pytest

import ddsl


def small_config(**changes):
    cfg = ddsl.SimulationConfig()
    cfg.L = 1.0
    cfg.T = 0.25
    cfg.N = 8
    cfg.dx = cfg.dv = 1 / 32
    cfg.U0 = 6.0
    cfg.field_kind = ddsl.FieldKind.COSINE
    cfg.field_amplitude = 1.0
    cfg.sigma = [ddsl.SigmaSpec(ddsl.SigmaKind.SINE, 0.5)]
    cfg.initial = ddsl.InitialKind.LANDAU
    for key, value in changes.items():
        setattr(cfg, key, value)
    return cfg


def test_run_returns_diagnostics_and_field():
    out = ddsl.run(small_config(), seed=3)
    diag = out["diagnostics"]
    assert len(diag["t"]) == 9
    assert diag["t"][-1] == pytest.approx(0.25)
    assert abs(diag["mass"][-1] - diag["mass"][0]) < 1e-3
    field = out["final_field"]
    grid = out["grid"]
    assert field.shape == (32, round(2 * grid["U"] / grid["dv"]) + 1)
    assert out["min_value"] >= 0.0
    assert diag["U"][-1] == grid["U"]


def test_runs_are_reproducible():
    a = ddsl.run(small_config(), seed=11)
    b = ddsl.run(small_config(), seed=11)
    np.testing.assert_array_equal(a["final_field"], b["final_field"])


def test_config_text_round_trip():
    cfg = small_config(seed=9)
    back = ddsl.parse_config(ddsl.config_text(cfg))
    assert ddsl.config_text(back) == ddsl.config_text(cfg)
    assert ddsl.config_hash(back) == ddsl.config_hash(cfg)
    assert back.sigma == cfg.sigma


def test_config_errors_are_value_errors():
    with pytest.raises(ddsl.ConfigError):
        ddsl.parse_config("[simulation]\nL = 1\n")
    with pytest.raises(ValueError):
        ddsl.parse_config(ddsl.config_text(small_config()), ["simulation.bogus=1"])


def test_numerical_abort():
    cfg = small_config(initial=ddsl.InitialKind.CUSTOM, custom_initial=lambda x, v: math.nan)
    with pytest.raises(ddsl.NumericalError, match="step 0"):
        ddsl.run(cfg)


def test_load_shipped_config():
    path = os.path.join(os.environ.get("DDSL_CONFIGS", "configs"), "landau_convergence.ini")
    cfg = ddsl.load_config(path, ["simulation.N=4", "simulation.T=0.0625"])
    assert cfg.N == 4
    assert cfg.integrator == ddsl.IntegratorKind.SSM


def test_field_solver_sine():
    n, alpha = 256, 0.05
    x = np.arange(n) / n
    E, clamped = ddsl.solve_field(1 + alpha * np.cos(2 * np.pi * x), 1.0)
    assert clamped == 0
    assert np.max(np.abs(np.asarray(E) - alpha / (2 * np.pi) * np.sin(2 * np.pi * x))) < 1e-5


def test_paths_coarsen_to_sums():
    path = ddsl.sample_path(2, 64, 1 / 64, 5)
    assert path.shape == (2, 64)
    coarse = ddsl.coarsen_path(path, 1 / 64, 8)
    np.testing.assert_allclose(coarse.sum(axis=1), path.sum(axis=1), rtol=1e-12)


def test_snapshot_round_trip(tmp_path):
    values, grid = ddsl.initial_field(small_config())
    target = tmp_path / "snap.txt"
    ddsl.write_snapshot(str(target), values, grid["L"], grid["dx"], grid["dv"], grid["U"], 0.5)
    t, back, grid2 = ddsl.read_snapshot(str(target))
    assert t == 0.5
    assert grid2 == grid
    np.testing.assert_array_equal(back, values)


def test_monte_carlo_small():
    cfg = small_config(field_kind=ddsl.FieldKind.CONSTANT,
                       sigma=[ddsl.SigmaSpec(ddsl.SigmaKind.CONSTANT, 1.0)])
    out = ddsl.monte_carlo(cfg, 3)
    assert out["samples"] == 3
    mean, se = out["kinetic"]
    assert len(mean) == 9
    assert se[0] == 0.0
