"""Exception types shared across the package."""


class HeatRenyiError(Exception):
    """Base class for all package errors."""


class ValidationError(HeatRenyiError, ValueError):
    """Malformed input: wrong shape, broken invariant, mismatched dimensions."""


class DomainError(HeatRenyiError, ValueError):
    """Mathematically undefined request, e.g. log of a singular state."""


class ConfigError(HeatRenyiError, ValueError):
    """Bad configuration value or unknown configuration key."""


class IntegrationError(HeatRenyiError, RuntimeError):
    """Trajectory integration failure: non-finite state or drift budget blown."""
