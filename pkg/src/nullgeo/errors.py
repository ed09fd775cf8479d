"""Exception hierarchy used across the package."""


class NullGeoError(Exception):
    """Base class for all package errors."""


class UsageError(NullGeoError):
    """Bad arguments: dimension mismatch, malformed input, unknown surface."""


class ExprSyntaxError(UsageError):
    """Expression text could not be parsed.

    Carries the byte offset of the failure and the set of token kinds
    that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class UnknownIdentifierError(UsageError):
    """Expression used a name that is neither a variable nor a known function."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


class DegenerateInputError(NullGeoError):
    """An input vector or field is degenerate (e.g. the zero vector)."""


class DegenerateMetricError(NullGeoError):
    """A Gram matrix is (near-)singular: the surface is not timelike there."""


class EvalDomainError(NullGeoError):
    """A function left its domain during evaluation (log/sqrt/division)."""


class DomainRangeError(NullGeoError):
    """A chart point or finite-difference stencil left the surface domain."""


class FrameError(NullGeoError):
    """The adapted null frame could not be constructed at the point."""


class UnsupportedPointError(NullGeoError):
    """Gauss-map quantities requested at a point where they are undefined
    (the normal part of the second fundamental form along the null
    direction vanishes there)."""


class ConsistencyError(NullGeoError):
    """Two routes that must agree (closed form vs. assembled form)
    disagreed beyond tolerance; indicates a bug upstream, not bad data."""
