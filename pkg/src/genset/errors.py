"""Exception types shared across the package."""


class GensetError(Exception):
    """Base class for all package-specific errors."""


class CapExceeded(GensetError):
    """An input exceeds a configured resource cap (table size, vertex count, ...)."""


class WorkLimitExceeded(CapExceeded):
    """An enumeration or search blew through its node/work budget."""


class FamilyFormatError(GensetError):
    """A family or graph file failed strict parsing."""
