import json
import math

import numpy as np
import pytest

import ringqed


def test_single_atom_rates():
    cavity = ringqed.CavityParams()
    atom = ringqed.from_positions(np.array([[0.0, 0.0, cavity.z_ref]]))
    m = ringqed.decay_metrics(atom, cavity, "tds")
    assert m["gamma_f"] == pytest.approx(1.0, abs=1e-12)
    assert m["gamma_c"] == pytest.approx(cavity.c_ref, rel=1e-12)
    assert m["theta"] == pytest.approx(1.0)


def test_half_wavelength_pair():
    g = ringqed.greens_pair(np.array([0.5, 0, 0.4]), np.array([0, 0, 0.4]))
    assert -2 * g.imag == pytest.approx(-3 / (2 * math.pi**2), rel=1e-13)
    assert g.real == pytest.approx(0.75 * (1 / math.pi - 1 / math.pi**3), rel=1e-13)


def test_free_space_matrix_is_symmetric():
    cloud = ringqed.CloudParams()
    cloud.n_atoms = 15
    config = ringqed.sample_cloud(cloud, 3)
    assert config.positions.shape == (15, 3)
    g = ringqed.free_space_matrix(config)
    assert np.allclose(g, g.T)
    assert np.allclose(np.diag(g), -0.5j)


def test_eigendecomposition_biorthonormal():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    lam, right, left = ringqed.eigendecompose(a)
    assert np.allclose(left.T @ right, np.eye(6), atol=1e-10)
    assert np.allclose(a @ right, right * lam, atol=1e-10)


def test_uniform_c_superradiance():
    cloud = ringqed.CloudParams()
    cloud.n_atoms = 20
    out = ringqed.cloud_ensemble(cloud, trials=8, uniform_c=True, seed=4)
    assert len(out) == 1
    mean, _ = out[0]["gamma_c"]
    assert mean == pytest.approx(20 * 0.05, rel=1e-9)


def test_ring_below_line():
    g = ringqed.ring_vs_line([1, 20, 40])
    ring, line = g["gamma_f_ring"]["mean"], g["gamma_f_line"]["mean"]
    assert ring[0] == pytest.approx(1.0) and line[0] == pytest.approx(1.0)
    assert ring[1] < line[1] and ring[2] < ring[1]


def test_errors_map_to_python():
    with pytest.raises(ringqed.NearCoincidence):
        ringqed.free_space_matrix(ringqed.from_positions(np.array([[0, 0, 1.0], [0, 0, 1.0]])))
    with pytest.raises(ringqed.ConfigError):
        ringqed.run("experiment: spectrum\nbogus: 1\n")
    assert issubclass(ringqed.ConfigError, ringqed.Error)


def test_run_writes_outputs(tmp_path):
    yaml = "experiment: ring-vs-line\nring_vs_line:\n  n_values: [1, 5, 10]\n"
    result = ringqed.run(yaml, out=str(tmp_path))
    assert "ring" in result["summary"]
    sidecar = json.loads((tmp_path / "ring_vs_line.json").read_text())
    assert sidecar["status"] == "complete"
    assert (tmp_path / "ring_vs_line.csv").exists()


def test_config_template_lists_every_experiment():
    for name in ringqed.experiments():
        assert f'experiment: "{name}"' in ringqed.emit_config(name)


def test_git_blob_hash():
    assert ringqed.content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a"
