"""Exception hierarchy shared by every module."""


class DispersionError(Exception):
    """Base class for all errors raised by the package."""


class InvalidParameter(DispersionError, ValueError):
    """A physical or numerical parameter violates its invariant."""


class DegenerateAtoms(InvalidParameter):
    """The two atoms are too close to resonance to be treated as independent."""


class ZeroSeparation(InvalidParameter):
    """A distance or kernel argument is zero where a pole sits."""


class PoleOnAxis(DispersionError):
    """A response function was evaluated exactly on an undamped pole."""


class LosslessMedium(DispersionError):
    """The photon mean free path is infinite (no density or no linewidth)."""


class QuadratureFailure(DispersionError):
    """An adaptive integral did not reach its tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class StepUnderflow(DispersionError):
    """A finite-difference step is too small relative to the abscissa."""


class RegimeWarning(UserWarning):
    """An asymptotic formula is used outside its window of validity."""
