class FareyError(Exception):
    """Base class for fareyprod errors."""
    pass


class ConfigError(FareyError):
    """Custom exception for configuration errors."""
    pass


class DomainError(FareyError, ValueError):
    """An argument lies outside the domain of an operation (n out of range, base < 2, ...)."""
    pass


class CrossCheckError(FareyError):
    """Two independent computations disagreed, or an exactness guard tripped."""
    pass
