"""Smoke tests for the Python bindings."""

import json
import math
import os

import pytest

import volterra as vt


def make_cp(lam=5.0, seed=1):
    spec = vt.DriverSpec()
    spec.kind = vt.DriverKind.compound_poisson
    spec.jump_intensity = lam
    spec.jump_law.kind = vt.JumpLawKind.normal
    spec.seed = seed
    return spec


def test_version():
    assert vt.__version__ == "0.1.0"


def test_kernel_values_and_domain():
    k = vt.Kernel.power(0.5)
    assert k.eval(1.0, 0.75) == pytest.approx(0.5, abs=1e-15)
    assert k.eval(0.3, 0.3) == 0.0
    assert k.index_rho == 0.5
    with pytest.raises(ValueError):
        vt.Kernel.power(1.5)
    kl = vt.Kernel.power_log(0.3, 1.0)
    assert kl.eval(1.0, 1.0 - math.exp(-1.0)) == pytest.approx(
        math.exp(-0.3), rel=1e-12
    )


def test_simulate_and_path_queries():
    spec = vt.DriverSpec()
    spec.kind = vt.DriverKind.deterministic_jumps
    spec.jump_times = [0.5]
    spec.jump_sizes = [1.0]
    x = vt.simulate(spec, 0.0, 1.0)
    assert x.value(0.49) == 0.0
    assert x.value(0.5) == 1.0
    assert x.left_value(0.5) == 0.0
    assert x.jump_at(0.5) == 1.0
    assert vt.sup_jump(x, 0.0, 1.0) == 1.0


def test_dual_route_agreement():
    k = vt.Kernel.power(0.25)
    x = vt.simulate(make_cp(), 0.0, 1.0)
    for i in range(1, 21):
        t = i / 20.0
        direct = vt.eval_direct(k, x, t)
        byparts = vt.eval_by_parts(k, x, t)
        assert abs(direct - byparts) <= 1e-12 * (1.0 + abs(direct))


def test_seed_determinism():
    a = vt.simulate(make_cp(seed=9), 0.0, 1.0)
    b = vt.simulate(make_cp(seed=9), 0.0, 1.0)
    assert a.to_json() == b.to_json()


def test_fraclevy_and_holder():
    l = vt.make_two_sided(make_cp(10.0, 3), make_cp(10.0, 4), 10.0, 1.0)
    grid = [i / 4096.0 for i in range(4097)]
    path = vt.eval_fraclevy(l, 0.25, grid, 10.0, second_moment=10.0)
    assert path.values[0] == 0.0
    assert all(
        v == m1 + m2
        for v, m1, m2 in zip(path.values, path.m1_values, path.m2_values)
    )
    assert path.truncation_bound > 0.0
    fit = vt.holder_exponent(path.values, 1.0, 5)
    assert not fit.degenerate
    assert 0.0 < fit.slope < 1.0


def test_holder_calibration():
    n = 1 << 14
    values = [(i / n) ** 0.4 for i in range(n + 1)]
    fit = vt.holder_exponent(values, 1.0, 6)
    assert abs(fit.slope - 0.4) <= 0.02
    assert fit.r2 >= 0.98


def test_smooth_variation_report():
    k = vt.Kernel.power(0.5)
    rep = vt.check_smooth_variation(k, 0.0, 1.0, [1e-2, 1e-3, 1e-4], 1e-12)
    assert rep["pass"]
    assert max(rep["cond_a"]["residuals"]) <= 1e-12
    assert rep["csv"].startswith("h,res_a,res_b,res_c,res_d,res_eq39")


def test_run_experiment_from_config(tmp_path):
    config_dir = os.environ.get("VOLTERRA_CONFIG_DIR")
    if not config_dir:
        pytest.skip("VOLTERRA_CONFIG_DIR not set")
    src = json.load(open(os.path.join(config_dir, "smooth_variation_power.json")))
    src["out_dir"] = str(tmp_path / "out")
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(src))
    manifest = vt.run_experiment(str(cfg_path))
    assert manifest["pass"]
    assert (tmp_path / "out" / "smooth_variation.csv").exists()
    assert vt.validate_config(str(cfg_path)) == []


def test_config_error_is_typed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(vt.ConfigError):
        vt.run_experiment(str(bad))
