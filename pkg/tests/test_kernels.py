import os
import subprocess
import sys

import numpy as np
import pytest

from polerec import kernels


def _random_matsubara_data(rng, n_pts=4097, n_col=3, beta=10 * np.pi):
    omega = 2.0 * np.arange(-(n_pts // 2), n_pts - n_pts // 2) * np.pi / beta
    z = 1j * omega
    values = rng.standard_normal((n_pts, n_col)) + 1j * rng.standard_normal((n_pts, n_col))
    # make the values decay like real Matsubara data so the sums converge
    values /= 1.0 + np.abs(omega)[:, None]
    return values, z


def test_backends_agree(rng):
    if not kernels.compiled_available():
        pytest.skip("compiled kernel not built")
    values, z = _random_matsubara_data(rng)
    neg_c, pos_c = kernels.matsubara_reduce(values, z, 10.0, 10 * np.pi, 8, backend="compiled")
    neg_n, pos_n = kernels.matsubara_reduce(values, z, 10.0, 10 * np.pi, 8, backend="numpy")
    scale = max(np.max(np.abs(neg_c)), np.max(np.abs(pos_c)))
    assert np.max(np.abs(neg_c - neg_n)) <= 1e-12 * scale
    assert np.max(np.abs(pos_c - pos_n)) <= 1e-12 * scale


@pytest.mark.parametrize("backend", ["numpy", "compiled"])
def test_single_point_weights(backend):
    # hand substitution of z = 0: t = -1, jacobian 2c/c^2, so the order
    # -(i+1) weight is (-1/beta) * (-1)^i * 2/c, and the +(i+1) one matches it
    if backend == "compiled" and not kernels.compiled_available():
        pytest.skip("compiled kernel not built")
    c, beta = 10.0, 5.0
    value = 0.7 - 0.2j
    values = np.array([[value]])
    z = np.array([0.0j])
    neg, pos = kernels.matsubara_reduce(values, z, c, beta, 4, backend=backend)
    for i in range(4):
        expected = value * (-1.0 / beta) * ((-1.0) ** i) * 2.0 / c
        assert neg[i, 0] == pytest.approx(expected, rel=1e-14)
        assert pos[i, 0] == pytest.approx(expected, rel=1e-14)


def test_kernel_validation(rng):
    values, z = _random_matsubara_data(rng, n_pts=33, n_col=1)
    with pytest.raises(ValueError):
        kernels.matsubara_reduce(values, z, 10.0, 1.0, 0)
    with pytest.raises(ValueError):
        kernels.matsubara_reduce(values, z[:-1], 10.0, 1.0, 2)
    with pytest.raises(ValueError):
        kernels.matsubara_reduce(values, z, 10.0, 1.0, 2, backend="fortran")


def test_active_backend_name():
    assert kernels.active_backend() in kernels.BACKENDS


def test_env_var_forces_pure_python():
    env = dict(os.environ, POLEREC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import polerec; print(polerec.active_backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
