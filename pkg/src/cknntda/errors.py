"""Exception types shared across the package."""


class CknntdaError(Exception):
    """Base class for all package errors."""


class ValidationError(CknntdaError, ValueError):
    """Bad input data or out-of-range parameters (CLI exit code 2)."""


class DegenerateBandwidthError(ValidationError):
    """A bandwidth came out non-positive, typically from duplicate points."""


class ResourceLimitError(CknntdaError, RuntimeError):
    """A requested computation exceeds a configured resource cap (CLI exit code 3)."""
