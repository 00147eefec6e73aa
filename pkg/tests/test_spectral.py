import numpy as np
import pytest

from polerec import (
    NoiseSpec,
    PoleModel,
    SampleSet,
    fourier_from_circle,
    fourier_from_matsubara,
    matsubara_grid,
    random_access_grid,
    sample,
)
from polerec.sampling import RANDOM_ACCESS


def circle_samples_from_function(fn, n_s, cfg):
    """Synthesize a random-access SampleSet from a function of t directly."""
    grid = random_access_grid(n_s, cfg)
    values = np.asarray(fn(grid.points_t), dtype=np.complex128)
    return SampleSet(
        access=RANDOM_ACCESS,
        points_z=grid.points_z,
        values=values,
        points_t=grid.points_t,
        n_s=n_s,
    )


def test_constant_function_has_no_nonzero_orders(cfg):
    const = 3.0 - 4.0j
    samples = circle_samples_from_function(lambda t: np.full(len(t), const), 256, cfg)
    coeffs = fourier_from_circle(samples, 12)
    assert np.max(np.abs(coeffs.neg)) <= 1e-14 * abs(const)
    assert np.max(np.abs(coeffs.pos)) <= 1e-14 * abs(const)


def test_single_inside_pole_closed_form(cfg):
    # w/(tau - t) with |tau| < 1 contributes only to the negative orders:
    # coefficient of order k <= -1 is -w * tau^(|k| - 1)
    tau, w = 0.5, 2.0
    samples = circle_samples_from_function(lambda t: w / (tau - t), 1024, cfg)
    coeffs = fourier_from_circle(samples, 10)
    assert coeffs.coefficient(-1) == pytest.approx(-2.0, abs=1e-10)
    assert coeffs.coefficient(-2) == pytest.approx(-1.0, abs=1e-10)
    assert coeffs.coefficient(-3) == pytest.approx(-0.5, abs=1e-10)
    assert np.max(np.abs(coeffs.pos)) <= 1e-10


def test_single_outside_pole_closed_form(cfg):
    # |tau| > 1 contributes only to the positive orders: w * tau^(-(k+1))
    tau, w = 2.0, 3.0
    samples = circle_samples_from_function(lambda t: w / (tau - t), 1024, cfg)
    coeffs = fourier_from_circle(samples, 10)
    assert coeffs.coefficient(1) == pytest.approx(0.75, abs=1e-10)
    assert coeffs.coefficient(2) == pytest.approx(0.375, abs=1e-10)
    assert coeffs.coefficient(3) == pytest.approx(0.1875, abs=1e-10)
    assert np.max(np.abs(coeffs.neg)) <= 1e-10


def test_closed_form_oracle_random_single_poles(cfg, rng):
    for _ in range(10):
        inside = rng.uniform() < 0.5
        radius = rng.uniform(0.1, 0.8) if inside else rng.uniform(1.25, 10.0)
        tau = radius * np.exp(2j * np.pi * rng.uniform())
        w = (rng.uniform(0.5, 2.0)) * np.exp(2j * np.pi * rng.uniform())
        samples = circle_samples_from_function(lambda t: w / (tau - t), 1024, cfg)
        coeffs = fourier_from_circle(samples, 20)
        for k in range(1, 21):
            expected_neg = -w * tau ** (k - 1) if inside else 0.0
            expected_pos = 0.0 if inside else w * tau ** (-(k + 1))
            assert abs(coeffs.coefficient(-k) - expected_neg) <= 1e-10
            assert abs(coeffs.coefficient(k) - expected_pos) <= 1e-10


def test_linearity(cfg):
    m1 = PoleModel([5.0 + 1j], [1.0])
    m2 = PoleModel([-20.0], [2.0 - 1j])
    both = PoleModel(np.concatenate([m1.poles, m2.poles]), np.concatenate([m1.residues, m2.residues]))
    grid = random_access_grid(512, cfg)
    spec = NoiseSpec(0.0, 0)
    c1 = fourier_from_circle(sample(m1, grid, spec), 16)
    c2 = fourier_from_circle(sample(m2, grid, spec), 16)
    c12 = fourier_from_circle(sample(both, grid, spec), 16)
    scale = max(np.max(np.abs(c12.neg)), np.max(np.abs(c12.pos)))
    assert np.max(np.abs(c12.neg - (c1.neg + c2.neg))) <= 1e-12 * scale
    assert np.max(np.abs(c12.pos - (c1.pos + c2.pos))) <= 1e-12 * scale


def test_inside_outside_separation(cfg):
    # all poles in the right half-plane: positive orders are pure aliasing
    model = PoleModel([5.0, 30.0 + 10j, 80.0], [1.0, 0.5, 2.0])
    samples = sample(model, random_access_grid(1024, cfg), NoiseSpec(0.0, 0))
    coeffs = fourier_from_circle(samples, 20)
    assert np.max(np.abs(coeffs.pos)) <= 1e-10 * np.max(np.abs(coeffs.neg))


def test_real_poles_give_real_coefficients(cfg):
    model = PoleModel([3.0, -40.0, 70.0], [1.0, 0.7, 1.3])
    samples = sample(model, random_access_grid(1024, cfg), NoiseSpec(0.0, 0))
    coeffs = fourier_from_circle(samples, 20)
    assert np.max(np.abs(coeffs.neg.imag)) <= 1e-10
    assert np.max(np.abs(coeffs.pos.imag)) <= 1e-10


def test_matrix_coefficients_are_entrywise(cfg):
    m_a = PoleModel([5.0], [1.0])
    m_b = PoleModel([-8.0], [2.0j])
    grid = random_access_grid(256, cfg)
    spec = NoiseSpec(0.0, 0)
    sa = sample(m_a, grid, spec)
    sb = sample(m_b, grid, spec)
    values = np.zeros((256, 2, 2), dtype=complex)
    values[:, 0, 0] = sa.values
    values[:, 1, 1] = sb.values
    samples = SampleSet(
        access=RANDOM_ACCESS, points_z=grid.points_z, values=values, points_t=grid.points_t, n_s=256
    )
    coeffs = fourier_from_circle(samples, 8)
    ca = fourier_from_circle(sa, 8)
    cb = fourier_from_circle(sb, 8)
    assert np.array_equal(coeffs.neg[:, 0, 0], ca.neg)
    assert np.array_equal(coeffs.pos[:, 1, 1], cb.pos)
    assert np.max(np.abs(coeffs.neg[:, 0, 1])) == 0.0


def test_order_zero_is_not_available(cfg):
    model = PoleModel([5.0], [1.0])
    samples = sample(model, random_access_grid(64, cfg), NoiseSpec(0.0, 0))
    coeffs = fourier_from_circle(samples, 4)
    with pytest.raises(ValueError):
        coeffs.coefficient(0)
    with pytest.raises(ValueError):
        coeffs.coefficient(5)


def test_access_model_checks(cfg):
    model = PoleModel([5.0], [1.0])
    circle = sample(model, random_access_grid(16, cfg), NoiseSpec(0.0, 0))
    with pytest.raises(ValueError):
        fourier_from_circle(circle, 8)  # needs n_s >= 18
    with pytest.raises(ValueError):
        fourier_from_matsubara(circle, cfg, 4)
    matsu = sample(model, matsubara_grid(8, 10 * np.pi, "boson"), NoiseSpec(0.0, 0))
    with pytest.raises(ValueError):
        fourier_from_circle(matsu, 2)


def test_matsubara_zero_function(cfg):
    grid = matsubara_grid(50, 10 * np.pi, "boson")
    samples = SampleSet(
        access="matsubara",
        points_z=grid.points_z,
        values=np.zeros(len(grid.points_z), dtype=complex),
        n_m=grid.n_m,
        beta=grid.beta,
        statistics=grid.statistics,
    )
    coeffs = fourier_from_matsubara(samples, cfg, 6)
    assert np.all(coeffs.neg == 0.0)
    assert np.all(coeffs.pos == 0.0)


def test_matsubara_matches_circle_cross_oracle(cfg):
    # same model through both quadratures; truncation keeps them within 1e-4
    model = PoleModel([5.0], [1.0])
    circ = fourier_from_circle(sample(model, random_access_grid(1024, cfg), NoiseSpec(0.0, 0)), 6)
    mats = fourier_from_matsubara(
        sample(model, matsubara_grid(10**6, 10 * np.pi, "boson"), NoiseSpec(0.0, 0)), cfg, 6
    )
    assert abs(mats.coefficient(-1) - circ.coefficient(-1)) <= 1e-4
    assert np.max(np.abs(mats.neg - circ.neg)) <= 1e-4
    assert np.max(np.abs(mats.pos - circ.pos)) <= 1e-4


def test_matsubara_warns_when_beta_too_small(cfg):
    model = PoleModel([5.0], [1.0])
    samples = sample(model, matsubara_grid(64, 1.0, "boson"), NoiseSpec(0.0, 0))
    with pytest.warns(UserWarning, match="converges slowly"):
        fourier_from_matsubara(samples, cfg, 4)
