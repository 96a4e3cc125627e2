"""Exception types raised across the package."""


class StopStareError(Exception):
    """Base class for all errors raised by :mod:`stopstare`."""


class GraphParseError(StopStareError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class NodeRangeError(StopStareError, IndexError):
    pass


class WeightRangeError(StopStareError, ValueError):
    pass


class BinaryFormatError(StopStareError, ValueError):
    pass


class ModelError(StopStareError, ValueError):
    """The graph does not satisfy the requirements of the diffusion model."""


class GuardError(StopStareError, ValueError):
    """An exhaustive oracle was asked to enumerate more than its guard allows."""
