"""
Exception hierarchy

Every failure raised by the library derives from CuspAtlasError. Domain errors
(bad inputs to the mathematics) map to CLI exit code 3, parse errors to exit
code 2.
"""


class CuspAtlasError(Exception):
    """Root of all cusp-atlas errors"""

    exit_code = 3


class DomainError(CuspAtlasError):
    exit_code = 3


class ParseError(CuspAtlasError):
    """Malformed JSON, schema violations or unknown labels"""

    exit_code = 2


class NotNilpotent(DomainError):
    pass


class NotUnipotent(DomainError):
    pass


class EmptyInput(DomainError):
    pass


class Singular(DomainError):
    pass


class BadParams(DomainError):
    pass


class DegenerateTangent(DomainError):
    """The orbit map is not an immersion at the base point"""


class NotAbelian(DomainError):
    pass


class ComplexSpectrum(DomainError):
    """A generic element of the algebra has non-real eigenvalues"""


class IllConditioned(DomainError):
    """Numerical triangularization or weight separation could not be trusted"""


class Unrecognized(DomainError):
    """The computed invariants match no catalog family"""

    def __init__(self, message: str, evidence: dict = None):
        super().__init__(message)
        self.evidence = evidence or {}


class NotConvex(DomainError):
    pass
