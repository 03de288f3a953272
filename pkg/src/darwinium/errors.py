"""Exception taxonomy shared across the package.

Three failure categories are distinguished so callers (and the CLI) can
map them to exit codes: bad configuration, numerical inputs that violate
a required property, and inputs that are structurally fine but carry no
usable content.
"""


class DarwiniumError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(DarwiniumError):
    """Invalid configuration value, qubit layout, or argument combination."""


class ValidationError(DarwiniumError):
    """Numerical input violates a required property (norm, unitarity, hermiticity)."""


class DegenerateInputError(DarwiniumError):
    """Input is valid in shape but degenerate in content (e.g. all weight discarded)."""
