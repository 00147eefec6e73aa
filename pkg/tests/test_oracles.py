import numpy as np
import pytest

from polerec import NoiseSpec, PoleModel, fourier_from_circle, generate_scenario, random_access_grid, sample, z_to_t
from polerec.oracles import contour_coeff_oracle, tplane_model_oracle


def analytic_disk_residue(residue, tau, cfg):
    """Residue of the mapped function at its disk-coordinate pole.

    Follows from the chain rule: the residue divides by dz/dt = 2c/(t-1)^2.
    """
    return residue * (tau - 1.0) ** 2 / (2.0 * cfg.c)


def test_oracle_matches_closed_form_single_pole(cfg):
    model = PoleModel([5.0], [2.0])
    tau = z_to_t(5.0, cfg)
    w = analytic_disk_residue(2.0, tau, cfg)
    for k in [-1, -2, -5]:
        expected = -w * tau ** (abs(k) - 1)
        assert abs(contour_coeff_oracle(model, cfg, k) - expected) <= 1e-12
    for k in [1, 3]:
        assert abs(contour_coeff_oracle(model, cfg, k)) <= 1e-12


def test_oracle_order_zero_of_constant(cfg):
    const = 2.5 - 1.0j
    value = contour_coeff_oracle(lambda z: np.full(np.shape(z), const), cfg, 0)
    assert value == pytest.approx(const, abs=1e-13)


def test_oracle_agrees_with_fft_path(cfg):
    model = generate_scenario("complex8", cfg, seed=3)
    samples = sample(model, random_access_grid(1024, cfg), NoiseSpec(0.0, 0))
    coeffs = fourier_from_circle(samples, 8)
    for k in [-8, -3, -1, 1, 4, 8]:
        assert abs(contour_coeff_oracle(model, cfg, k) - coeffs.coefficient(k)) <= 1e-10


def test_oracle_requires_dense_grid(cfg):
    with pytest.raises(ValueError):
        contour_coeff_oracle(PoleModel([5.0], [1.0]), cfg, 1, n_quad=512)


def test_tplane_oracle_map_center(cfg):
    model = PoleModel([10.0], [1.0])  # pole exactly at c
    taus, _ = tplane_model_oracle(model, cfg)
    assert abs(taus[0]) <= 1e-15


def test_tplane_oracle_consistency_with_contour(cfg):
    model = PoleModel([5.0 + 2.0j], [1.3 - 0.4j])
    taus, weights = tplane_model_oracle(model, cfg)
    # order -1 coefficient equals minus the sum of interior disk residues
    g_minus_1 = contour_coeff_oracle(model, cfg, -1)
    assert abs(g_minus_1 - (-weights[0])) <= 1e-10


def test_tplane_oracle_real_model(cfg):
    model = PoleModel([3.0, -25.0], [1.0, 0.5])
    taus, weights = tplane_model_oracle(model, cfg)
    assert np.max(np.abs(taus.imag)) <= 1e-12
    assert np.max(np.abs(weights.imag)) <= 1e-10


def test_oracle_self_consistency_multi_pole(cfg):
    model = generate_scenario("complex8", cfg, seed=6)
    taus, weights = tplane_model_oracle(model, cfg)
    inside = np.abs(taus) < 1.0
    for k in [-6, -2, -1, 1, 2, 6]:
        if k < 0:
            closed = -np.sum(weights[inside] * taus[inside] ** (abs(k) - 1))
        else:
            closed = np.sum(weights[~inside] * taus[~inside] ** (-(k + 1)))
        assert abs(contour_coeff_oracle(model, cfg, k) - closed) <= 1e-10


def test_tplane_oracle_matches_analytic_residues(cfg):
    model = generate_scenario("complex8", cfg, seed=12)
    taus, weights = tplane_model_oracle(model, cfg)
    expected = analytic_disk_residue(model.residues, taus, cfg)
    assert np.max(np.abs(weights - expected)) <= 1e-10
