"""Automorphisms of the 2x2 spectral ball and numerical checks of their laws."""

from .automorphisms import (
    Compose,
    DiagConj,
    DiagTwist,
    EntirePoly,
    GeneralConj,
    MatrixFunction,
    InvariantFunction,
    LinearMap2,
    LowerTwist,
    Moebius,
    MoebiusParams,
    Transpose,
    TwistFunction,
    apply,
    commutation_conjugate,
    derivative_at_zero,
    invert,
)
from .errors import (
    ConvergenceFailure,
    DegenerateFit,
    NotInvertibleForm,
    NotOriginFixing,
    OutsideDomain,
    OverflowGuard,
    SingularMatrix,
    SpectralBallError,
    VanishingConjugator,
    WrongForm,
)
from .matrix_core import (
    Mat2,
    det,
    eigenvalues2,
    frobenius_norm,
    in_spectral_ball,
    inverse2,
    similarity,
    spectral_radius,
    trace,
)

__version__ = "0.1.0"
