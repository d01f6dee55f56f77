"""Exception hierarchy.

Validation problems (bad parameters, bad input files) derive from
:class:`ConfigurationError`; failures of a numerical computation derive from
:class:`NumericalFailure`.  The CLI maps the two families to exit codes 1 and 2.
"""


class SpecenvError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SpecenvError, ValueError):
    """Invalid parameters or inputs."""


class DomainError(ConfigurationError):
    """A symbol is undefined (has a pole) at a required frequency."""


class SingularityError(ConfigurationError):
    """The requested spectral parameter lies in the spectrum."""


class ProximityError(ConfigurationError):
    """The spectral parameter is too close to the range of the symbol."""


class NumericalFailure(SpecenvError, ArithmeticError):
    """A numerical computation failed or is unreliable."""


class PrecisionError(NumericalFailure):
    """Input does not meet the decay or resolution needed for the stated accuracy."""
