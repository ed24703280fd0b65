"""Exception types shared across the package."""


class CircssError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CircssError, ValueError):
    """An argument violates a mathematical precondition (bad modulus, non-unit,
    zero tuple, malformed permutation, ...)."""


class ResourceLimitError(CircssError, RuntimeError):
    """An operation would exceed a configured size cap (2^n state tables,
    materialized edge sets)."""


class ConfigurationError(CircssError, ValueError):
    """A scan/verify configuration is inconsistent and is rejected before any
    work starts."""


class TableMismatchError(CircssError, AssertionError):
    """A regenerated height table disagrees with the embedded reference rows."""
