"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class DegenerateQuadrupleError(DomainError):
    """A quadruple has a point metrically between two of the others."""


class RealizationError(DomainError):
    """No coordinates realize the requested metric data."""


class ParseError(ValueError):
    """Malformed input document."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateEdgeError(ParseError):
    """The same edge is listed more than once."""


class NonpositiveLengthError(ParseError):
    """An edge length is zero or negative."""


class UnknownVertexError(ValueError):
    """Vertex label or index not present in the graph."""


class MissingKappaError(ValueError):
    """No curvature prescribed for a vertex that requires one."""


class MeshError(ValueError):
    """Mesh is unusable for the requested computation."""
