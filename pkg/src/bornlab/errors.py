"""Exception types shared across the package."""


class BornlabError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(BornlabError):
    """Operands live in incompatible (or empty) Hilbert spaces."""


class ParameterError(BornlabError):
    """A parameter is outside its documented range."""


class DomainError(BornlabError):
    """A candidate distribution was evaluated outside the closed unit disk."""


class CertificateError(BornlabError):
    """A constraint certificate failed to verify, or its inputs mismatch."""


class ParseError(BornlabError):
    """Candidate expression has a syntax error."""

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        msg = f"at offset {position}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnknownNameError(ParseError):
    """Candidate expression refers to an identifier that does not exist."""

    def __init__(self, position: int, name: str):
        self.position = position
        self.name = name
        BornlabError.__init__(self, f"at offset {position}: unknown identifier {name!r}")


class EvalError(BornlabError):
    """Candidate expression hit an undefined operation (1/0, ln(-1), ...)."""
