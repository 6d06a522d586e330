"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numeric failures with 3, I/O errors with 4.
"""


class InvalidPolicyError(ValueError):
    """A vector that should be a probability distribution is not one."""


class ParameterError(ValueError):
    """An operation received a parameter outside its legal range."""


class DivergenceUndefinedError(ValueError):
    """KL divergence requested against a distribution with a zero where mass sits."""


class RegularizationRequiredError(ValueError):
    """An operation needs strictly positive policies; apply the floor first."""


class ConfigurationError(Exception):
    """A scenario file or society configuration is invalid."""


class NumericFailureError(RuntimeError):
    """A numeric routine failed to converge to its requested accuracy."""
