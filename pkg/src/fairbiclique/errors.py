"""Exception types shared across the package."""

from __future__ import annotations


class FairBicliqueError(Exception):
    """Base class for all errors raised by fairbiclique."""


class MissingAttribute(FairBicliqueError):
    def __init__(self, vertex_id, side):
        self.vertex_id = vertex_id
        self.side = side
        super().__init__(f"no attribute label for {side.name.lower()} vertex {vertex_id!r}")


class EmptyGraph(FairBicliqueError):
    def __init__(self, msg: str = "edge list is empty"):
        super().__init__(msg)


class EmptySet(FairBicliqueError):
    pass


class PreconditionViolated(FairBicliqueError):
    pass


class InstanceTooLarge(FairBicliqueError):
    pass


class ParseError(FairBicliqueError):
    def __init__(self, line_no: int, content: str, reason: str = "malformed line"):
        self.line_no = line_no
        self.content = content
        super().__init__(f"line {line_no}: {reason}: {content!r}")


class TimeLimitExceeded(FairBicliqueError):
    """Raised when an enumeration runs past its time limit.

    ``result`` holds everything emitted before the deadline, with
    ``result.complete`` set to False.
    """

    def __init__(self, result):
        self.result = result
        super().__init__(f"time limit exceeded after {result.count} results")
