"""Exception and warning types raised by the library."""


class MovingMirrorError(Exception):
    """Base class for numerical failures (the CLI maps these to exit code 3)."""


class SingularSystemError(MovingMirrorError, ArithmeticError):
    """An elimination pivot or closed-form denominator is exactly zero."""


class BranchPointError(MovingMirrorError, ValueError):
    """A sideband sits exactly on a branch point of K, so K(omega_m) = 0 in a denominator."""


class DegenerateDriveError(MovingMirrorError, ValueError):
    """dq0 * H(omega) vanishes where the closed form divides by it."""


class NoPeakError(MovingMirrorError):
    """The coarse scan of the rate found no interior maximum."""


class NonrelativisticWarning(RuntimeWarning):
    """Omega0 * dq0 is large enough that the long-wavelength expansion is doubtful."""
