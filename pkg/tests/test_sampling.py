import numpy as np
import pytest

from polerec import (
    MatrixPoleModel,
    NoiseSpec,
    PoleModel,
    evaluate,
    matsubara_grid,
    random_access_grid,
    sample,
    sample_set_from_json,
    sample_set_to_json,
)


def test_random_access_grid_small(cfg):
    grid = random_access_grid(4, cfg)
    assert np.allclose(grid.points_t, [1.0, 1.0j, -1.0, -1.0j], atol=1e-15)
    assert np.isinf(grid.points_z[0])
    # hand evaluation: t = i maps to z = c*i
    assert grid.points_z[1] == pytest.approx(10.0j, abs=1e-12)
    assert grid.points_z[2] == pytest.approx(0.0, abs=1e-12)
    assert grid.points_z[3] == pytest.approx(-10.0j, abs=1e-12)


def test_random_access_grid_validation(cfg):
    with pytest.raises(ValueError):
        random_access_grid(5, cfg)
    with pytest.raises(ValueError):
        random_access_grid(2, cfg)


def test_grid_nodes_are_roots_of_unity(cfg):
    n_s = 64
    grid = random_access_grid(n_s, cfg)
    assert np.max(np.abs(np.abs(grid.points_t) - 1.0)) <= 1e-14
    product = np.prod(grid.points_t)
    assert abs(product - (-1.0) ** (n_s - 1)) <= 1e-12


def test_grid_conjugate_pairing(cfg):
    grid = random_access_grid(16, cfg)
    z = grid.points_z
    for n in range(1, 16):
        # nodes n and N_s - n are complex conjugates, i.e. negatives on the axis
        partner = z[(16 - n) % 16]
        if np.isinf(z[n]) or np.isinf(partner):
            continue
        assert abs(partner + z[n]) <= 1e-12 * (1.0 + abs(z[n]))


def test_matsubara_grid_boson():
    grid = matsubara_grid(3, 10 * np.pi, "boson")
    assert len(grid.points_z) == 7
    assert grid.points_z[3] == 0.0  # n = 0 frequency included
    assert np.all(grid.points_z.real == 0.0)
    assert grid.points_z[4] == pytest.approx(0.2j, abs=1e-15)


def test_matsubara_grid_fermion():
    grid = matsubara_grid(3, 10 * np.pi, "fermion")
    assert len(grid.points_z) == 6
    # n = 0 entry sits at pi*i/beta
    assert np.min(np.abs(grid.points_z - 0.1j)) <= 1e-16
    # symmetric set under negation
    omega = grid.points_z.imag
    assert np.array_equal(np.sort(omega), np.sort(-omega))


def test_matsubara_grid_validation():
    with pytest.raises(ValueError):
        matsubara_grid(0, 1.0, "boson")
    with pytest.raises(ValueError):
        matsubara_grid(3, 0.0, "boson")
    with pytest.raises(ValueError):
        matsubara_grid(3, 1.0, "anyon")


def test_sample_noiseless_is_exact(cfg):
    model = PoleModel([5.0, -12.0], [1.0, 2.0])
    grid = random_access_grid(64, cfg)
    samples = sample(model, grid, NoiseSpec(0.0, 0))
    assert samples.values[0] == 0.0  # assigned limit at the node mapping to infinity
    expected = evaluate(model, grid.points_z[1:])
    assert np.array_equal(samples.values[1:], expected)


def test_sample_matsubara_single_pole(cfg):
    model = PoleModel([5.0], [1.0])
    grid = matsubara_grid(4, 10 * np.pi, "boson")
    samples = sample(model, grid, NoiseSpec(0.0, 0))
    assert samples.values[4] == pytest.approx(0.2, abs=0)  # value at z = 0


def test_sample_matrix_shape_and_noise(cfg):
    model = MatrixPoleModel(
        [5.0, -7.0],
        np.stack([np.eye(4, dtype=complex), 2 * np.eye(4, dtype=complex)]),
    )
    grid = random_access_grid(16, cfg)
    clean = sample(model, grid, NoiseSpec(0.0, 0))
    noisy = sample(model, grid, NoiseSpec(1e-3, 1))
    assert clean.values.shape == (16, 4, 4)
    assert noisy.values.shape == (16, 4, 4)
    nonzero = clean.values != 0
    assert np.all(noisy.values[nonzero] != clean.values[nonzero])


def test_sample_noise_deterministic(cfg):
    model = PoleModel([5.0], [1.0])
    grid = random_access_grid(32, cfg)
    a = sample(model, grid, NoiseSpec(1e-4, 13))
    b = sample(model, grid, NoiseSpec(1e-4, 13))
    c = sample(model, grid, NoiseSpec(1e-4, 14))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_real_model_sample_symmetry(cfg):
    model = PoleModel([3.0, -40.0], [1.0, 0.7])
    grid = matsubara_grid(16, 10 * np.pi, "boson")
    samples = sample(model, grid, NoiseSpec(0.0, 0))
    values = samples.values
    flipped = values[::-1]  # grid is symmetric: index reversal negates z
    assert np.max(np.abs(flipped - np.conj(values))) <= 1e-13 * np.max(np.abs(values))


def test_sample_set_json_round_trip_scalar(cfg):
    model = PoleModel([5.0 + 1j], [1.5 - 0.5j])
    grid = random_access_grid(16, cfg)
    samples = sample(model, grid, NoiseSpec(1e-5, 3))
    doc = sample_set_to_json(samples)
    back = sample_set_from_json(doc, cfg)
    assert back.access == samples.access
    assert back.n_s == samples.n_s
    assert np.array_equal(back.values, samples.values)


def test_sample_set_json_round_trip_matrix(cfg):
    model = MatrixPoleModel([5.0], np.eye(2, dtype=complex)[None])
    grid = matsubara_grid(5, 10 * np.pi, "fermion")
    samples = sample(model, grid, NoiseSpec(0.0, 0))
    doc = sample_set_to_json(samples)
    back = sample_set_from_json(doc, cfg)
    assert back.statistics == "fermion"
    assert back.beta == samples.beta
    assert np.array_equal(back.values, samples.values)
