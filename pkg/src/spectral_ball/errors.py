"""Exception hierarchy shared by every module of the package."""


class SpectralBallError(Exception):
    """Base class for all errors raised by spectral_ball."""


class SingularMatrix(SpectralBallError, ZeroDivisionError):
    pass


class OutsideDomain(SpectralBallError, ValueError):
    """The input matrix does not lie in the spectral ball."""


class OverflowGuard(SpectralBallError, OverflowError):
    """An exponential twist factor e^{±φ} would leave the safe range."""


class NotInvertibleForm(SpectralBallError):
    pass


class NotOriginFixing(SpectralBallError):
    pass


class WrongForm(SpectralBallError, TypeError):
    """An automorphism of the wrong family was passed to a form-specific operation."""


class VanishingConjugator(SpectralBallError):
    pass


class DegenerateFit(SpectralBallError):
    pass


class ConvergenceFailure(SpectralBallError):
    pass
