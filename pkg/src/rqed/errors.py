"""Exception hierarchy shared across the package.

ConfigError maps to CLI exit code 2, NumericalError and its subclasses to
exit code 3.
"""


class ConfigError(Exception):
    """Malformed or incomplete experiment configuration."""


class NumericalError(Exception):
    """Base class for physics/numerics failures."""


class NonHermitianError(NumericalError):
    """Input matrix violates the Hermiticity contract."""


class NotPositiveSemidefiniteError(NumericalError):
    """Matrix expected to be PSD has a significantly negative eigenvalue."""


class ResonanceError(NumericalError):
    """A Schrieffer-Wolff denominator is too close to zero."""


class DispersiveRegimeError(NumericalError):
    """Dispersive-regime gate |g/(w' - w_c)| exceeded its threshold."""


class InstabilityError(NumericalError):
    """Bogoliubov frequency would be imaginary (w_c <= 4 B_+)."""


class PoleError(NumericalError):
    """Resolvent evaluated too close to an eigenvalue of the Q block."""


class ConvergenceError(NumericalError):
    """An iterative procedure failed to converge within its budget."""
