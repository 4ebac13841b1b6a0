import json
import math

import numpy as np
import pytest

import qlienard as ql


def test_coefficient_maps():
    assert ql.a_from_m([-1, 1, 2]) == [-1, 1, 1]
    assert ql.m_from_beta([-1, -1, 1, 1]) == [-1, -3, 10, 35]
    with pytest.raises(ql.DegenerateDegreeError):
        ql.a_from_m([1.0])


def test_census_and_averaging_agree():
    spec = ql.DampingSpec.from_a([-1, 1, -0.144, 0.005])
    params = ql.SystemParams(gamma=2.5e-4, n=3)
    census = ql.limit_cycle_census(spec, params)
    averaged = ql.averaging_amplitude_condition(spec, params)
    assert [c.stability for c in census] == [ql.Stability.Stable, ql.Stability.Unstable, ql.Stability.Stable]
    for c, a in zip(census, averaged):
        assert a.amplitude == pytest.approx(c.amplitude, rel=1e-9)


def test_van_der_pol_run_reaches_amplitude_two():
    spec = ql.DampingSpec.from_a([-1, 1])
    traj = ql.simulate(spec, ql.SystemParams(gamma=0.2), t_total=200.0, initial=(0.5, 0.0), stride=5)
    states = traj.states()
    assert states.shape == (len(traj), 2)
    assert 2.0 * traj.poincare_radii()[-1] == pytest.approx(2.0, rel=0.02)


def test_noisy_amplitude_run_is_reproducible():
    spec = ql.DampingSpec.from_a([-1, 1])
    params = ql.SystemParams(gamma=2.0)
    kw = dict(noise=ql.NoiseSpec.internal(), representation="amplitude", t_total=1000.0, seed=4, stride=10)
    a = ql.simulate(spec, params, **kw)
    b = ql.simulate(spec, params, **kw)
    assert np.array_equal(a.states(), b.states())
    assert a.states().dtype == np.complex128
    c = ql.simulate(spec, params, **{**kw, "seed": 5})
    assert not np.array_equal(a.states(), c.states())
    stats = ql.radial_statistics([a, c])
    assert stats["window_drift"] < 0.05
    assert 1.0 < stats["mean_r"] < 1.7


def test_noise_intensity():
    params = ql.SystemParams(gamma=1.0, theta=50.0)
    assert ql.noise_intensity(params, ql.NoiseSpec.internal()) == pytest.approx(4.0 / math.tanh(0.02))
    assert ql.noise_intensity(params, ql.NoiseSpec.vacuum()) == pytest.approx(4.0)


def test_presets_and_config_errors(tmp_path):
    assert "fig4b" in ql.preset_names()
    cfg = json.loads(ql.preset("fig2b"))
    assert cfg["params"]["gamma"] == pytest.approx(2.0)
    cfg["t_total"] = 700.0
    out = ql.run_config(json.dumps(cfg), str(tmp_path / "run"))
    assert out["exit_code"] == 0
    assert any(f.endswith("manifest.json") for f in out["files"])
    with pytest.raises(ql.ConfigError):
        ql.run_config('{"spec": {"family": "position", "coeffs": [-1, 1]}, "params": {"gamma": 1}, "bogus": 1}')


def test_small_fdr_check():
    result = ql.fdr_closure_check(ql.SystemParams(gamma=0.01, theta=1.0), members=100, modes=1024)
    assert result["relative_error"] < 0.3
