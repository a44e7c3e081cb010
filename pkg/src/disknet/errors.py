"""Domain errors. Every error raised on bad input derives from NetworkError."""


class NetworkError(Exception):
    """Base class for all domain errors (CLI exit code 1)."""


class EmbeddingInconsistent(NetworkError):
    pass


class SelfLoopContraction(NetworkError):
    pass


class ConnectivityBroken(NetworkError):
    pass


class FaceNotFound(NetworkError):
    pass


class AttachNotOnFace(NetworkError):
    pass


class EmptyRestriction(NetworkError):
    pass


class Singular(NetworkError):
    pass


class ShapeMismatch(NetworkError):
    pass


class Disconnected(NetworkError):
    pass


class SpikeSingular(NetworkError):
    pass


class NegativeConductance(NetworkError):
    pass


class SiteMismatch(NetworkError):
    pass


class AmbiguousOrientation(NetworkError):
    pass


class NotATriangle(NetworkError):
    pass


class OrderingViolation(NetworkError):
    pass


class NotACprn(NetworkError):
    pass


class PeelStuck(NetworkError):
    pass


class InconsistentResponse(NetworkError):
    pass


class DegenerateSystem(NetworkError):
    pass


class BadN(NetworkError):
    pass


class ParseError(NetworkError):
    """Malformed network document; carries an optional line/column anchor."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column
