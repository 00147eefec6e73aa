"""Pole and residue recovery from noisy samples on the imaginary axis.

A change of coordinates sends the imaginary axis onto the unit circle; the
circle-harmonic coefficients of the data then split the poles by half-plane,
a Hankel rank decision counts them per side, the null vector's roots locate
them, and a least-squares fit recovers the residues.  Scalar, matrix-valued,
and real-constrained variants are supported, for both free sampling along the
axis and sampling restricted to a Matsubara frequency grid.
"""

from .kernels import active_backend, compiled_available
from .mobius import DiskPairConfig, circle_image_radius, t_to_z, z_to_t
from .models import (
    MatrixPoleModel,
    NoiseSpec,
    PoleModel,
    add_noise,
    evaluate,
    evaluate_matrix,
    generate_scenario,
)
from .pipeline import (
    MatchReport,
    RecoveryConfig,
    RecoveryResult,
    match_poles,
    recover,
)
from .prony import (
    HankelSystem,
    PronyPolynomial,
    RankDecision,
    SideRecovery,
    build_hankel,
    estimate_rank,
    prony_polynomial,
    recover_side,
    roots_of,
)
from .residues import ResidueFit, ResidueSolveError, rank1_extract, solve_residues, solve_residues_matrix
from .sampling import (
    MatsubaraGrid,
    RandomAccessGrid,
    SampleSet,
    matsubara_grid,
    random_access_grid,
    sample,
    sample_set_from_json,
    sample_set_to_json,
)
from .spectral import FourierCoeffs, fourier_from_circle, fourier_from_matsubara

__version__ = "0.1.0"

__all__ = [
    "DiskPairConfig",
    "z_to_t",
    "t_to_z",
    "circle_image_radius",
    "PoleModel",
    "MatrixPoleModel",
    "NoiseSpec",
    "evaluate",
    "evaluate_matrix",
    "add_noise",
    "generate_scenario",
    "RandomAccessGrid",
    "MatsubaraGrid",
    "SampleSet",
    "random_access_grid",
    "matsubara_grid",
    "sample",
    "sample_set_to_json",
    "sample_set_from_json",
    "FourierCoeffs",
    "fourier_from_circle",
    "fourier_from_matsubara",
    "HankelSystem",
    "RankDecision",
    "PronyPolynomial",
    "SideRecovery",
    "build_hankel",
    "estimate_rank",
    "prony_polynomial",
    "roots_of",
    "recover_side",
    "ResidueFit",
    "ResidueSolveError",
    "solve_residues",
    "solve_residues_matrix",
    "rank1_extract",
    "RecoveryConfig",
    "RecoveryResult",
    "MatchReport",
    "recover",
    "match_poles",
    "active_backend",
    "compiled_available",
    "__version__",
]
