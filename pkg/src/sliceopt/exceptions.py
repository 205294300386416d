"""Exception hierarchy shared across the package."""


class SliceOptError(Exception):
    """Base class for all package errors."""


class DomainError(SliceOptError, ValueError):
    """An objective evaluated to a non-finite value, or a point is not finite."""


class ConfigError(SliceOptError, ValueError):
    """Invalid experiment configuration or mode set."""


class EmptyTraceError(SliceOptError, ValueError):
    """A summary statistic was requested on a trace without usable entries."""


class EmptySliceError(SliceOptError, RuntimeError):
    """A sampler was asked to draw from an empty set."""


class UnsupportedError(SliceOptError, ValueError):
    """The objective does not provide the requested decomposition or sampler."""
