"""Exception types shared across the package."""

from __future__ import annotations


class WdSparqlError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WdSparqlError):
    """Malformed pattern or N-Triples input.

    ``span`` holds ``(start, end)`` character offsets for pattern text;
    ``line`` is set instead for N-Triples input.
    """

    def __init__(self, message: str, span: tuple[int, int] | None = None,
                 line: int | None = None):
        self.message = message
        self.span = span
        self.line = line
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif span is not None:
            where = f" (at {span[0]}..{span[1]})"
        super().__init__(message + where)


class NotInOptNormalForm(WdSparqlError):
    pass


class NotWellDesigned(WdSparqlError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"pattern is not well-designed: {lines}")


class UnsupportedNode(WdSparqlError):
    pass


class ResourceLimit(WdSparqlError):
    pass


class ShapeInfeasible(WdSparqlError):
    pass
