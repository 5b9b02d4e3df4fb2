"""Sampling, property checks and the fiber falsifier."""

from .checks import (
    check_commutation,
    check_conjugate_invariance,
    check_lower_twist_invariance,
    check_moebius_spectral_mapping,
    check_roundtrip,
    check_spectrum_preservation,
    diag_conj_collision_search,
    diag_conj_roundtrip,
)
from .falsifier import (
    AffineFitReport,
    FiberPoint,
    FitReport,
    Verdict,
    fiber_affine_test,
    fiber_image,
    fiber_point,
    fit_constant_conjugation,
)
from .hermitian import hermitian4_min_eigenpair
from .sampling import SamplerConfig, sample_ball
