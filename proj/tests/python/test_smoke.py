"""Smoke tests for the _nsforge extension module."""

import json
import math
import os

import numpy as np
import pytest

import _nsforge as nf


@pytest.fixture(scope="module")
def grid():
    return nf.GridSpec(2, 64, 32.0)


@pytest.fixture(scope="module")
def vortex(grid):
    return nf.generate_data(grid, "gaussian_vortex", amplitude=0.5, width=1.0)


def test_generated_data_is_divergence_free(grid, vortex):
    scale = np.abs(vortex).max() * math.pi * grid.points / grid.length
    assert nf.max_divergence(grid, vortex) < 1e-12 * scale


def test_vortex_l2_matches_closed_form(grid, vortex):
    # || grad-perp (A e^{-r^2/s^2}) ||_2 = A sqrt(pi) in 2D
    assert nf.lp_norm(grid, vortex, 2.0) == pytest.approx(0.5 * math.sqrt(math.pi), rel=1e-6)


def test_heat_semigroup_law(grid, vortex):
    one = nf.heat_propagate(grid, vortex, 0.7)
    two = nf.heat_propagate(grid, nf.heat_propagate(grid, vortex, 0.3), 0.4)
    assert np.abs(one - two).max() < 1e-12 * np.abs(one).max()


def test_leray_is_idempotent(grid):
    rng = np.random.default_rng(7)
    u = rng.standard_normal((2, grid.points, grid.points))
    pu = nf.leray_project(grid, u)
    ppu = nf.leray_project(grid, pu)
    assert np.abs(pu - ppu).max() < 1e-11 * np.abs(pu).max()


def test_first_moments_of_the_vortex(grid, vortex):
    rep = nf.norms_and_moments(grid, vortex, [1.0, 2.0])
    m = rep["first_moments"]
    assert m[1][0] == pytest.approx(math.pi * 0.5, rel=1e-5)
    assert m[0][1] == pytest.approx(-math.pi * 0.5, rel=1e-5)


def test_functional_scaling_identity(grid):
    big = nf.GridSpec(2, 256, 32.0)
    a = nf.generate_data(big, "gaussian_vortex", amplitude=0.5, width=1.2)
    a2 = nf.lambda_rescale(big, a, 2)
    f = nf.functionals(big, a)
    f2 = nf.functionals(big, a2)
    assert 2.0 ** 1.5 * f2["J"] == pytest.approx(f["J"], rel=1e-3)


def test_simulation_dissipates_energy(grid):
    a = nf.generate_data(grid, "moment_free", amplitude=1.0, width=1.0)
    r = nf.simulate(grid, a, t_end=1.0, steps=64)
    l2 = r["norms"]["2.000000"]
    assert all(l2[i + 1] <= l2[i] * (1 + 1e-12) for i in range(len(l2) - 1))


def test_synthesize_trivial_on_zero_data(grid):
    a = np.zeros((2, grid.points, grid.points))
    out = nf.synthesize(grid, a, t_end=8.0, profile_R=2.0)
    assert out["converged"]
    assert out["iterations"] == 1
    assert np.allclose(np.array(out["force_coeffs"]), 0.0)


def test_kernel_norm_constant(grid):
    # 2D: t * ||F(.,t)||_2 is the constant c_2 = 0.141047
    big = nf.GridSpec(2, 256, 64.0)
    val = nf.F_kernel_lp_norm(big, 16.0, 2.0) * 16.0
    assert val == pytest.approx(0.141047, rel=1e-4)


def test_configs_validate_against_schema():
    data_dir = os.environ.get("NSFORGE_DATA_DIR")
    if not data_dir:
        pytest.skip("NSFORGE_DATA_DIR not set")
    import jsonschema

    root = os.path.dirname(data_dir)
    with open(os.path.join(data_dir, "config.schema.json")) as f:
        schema = json.load(f)
    configs = os.path.join(root, "configs")
    count = 0
    for name in sorted(os.listdir(configs)):
        if not name.endswith(".json"):
            continue
        with open(os.path.join(configs, name)) as f:
            jsonschema.validate(json.load(f), schema)
        count += 1
    assert count >= 4


def test_run_summary_validates_against_report_schema(tmp_path):
    data_dir = os.environ.get("NSFORGE_DATA_DIR")
    if not data_dir:
        pytest.skip("NSFORGE_DATA_DIR not set")
    import jsonschema

    cfg = {
        "grid": {"dim": 2, "points": 64, "length": 32.0},
        "data": {"kind": "gaussian_vortex", "amplitude": 0.05, "width": 1.0, "seed": 0},
        "profile": {"source": "builtin", "half_width": 1.0, "time_extent": 0.25,
                    "time_samples": 17},
        "solver": {
            "timegrid": {"kind": "geometric", "t_end": 16.0, "t_min": 0.01, "ratio": 1.4},
            "picard": {"max_iterations": 30, "tolerance": 1e-9},
            "integrator": "etd2",
        },
        "synthesis": {"tol": 1e-6, "max_outer": 25},
        "diagnostics": ["decay", "lemma_heat2", "wiegner"],
        "output_dir": str(tmp_path / "run"),
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = nf.run_experiment(str(cfg_path), "simulate")
    assert out["artifact_count"] > 0
    with open(os.path.join(data_dir, "report.schema.json")) as f:
        schema = json.load(f)
    with open(tmp_path / "run" / "summary.json") as f:
        jsonschema.validate(json.load(f), schema)
