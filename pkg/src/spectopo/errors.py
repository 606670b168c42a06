"""Exception hierarchy.

Every structural failure carries the offending element indices in
``witness`` so callers can replay it.
"""


class SpectopoError(Exception):
    """Base class for all errors raised by spectopo."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


# finorder

class NotReflexive(SpectopoError):
    pass


class NotAntisymmetric(SpectopoError):
    pass


class NotTransitive(SpectopoError):
    pass


class MissingJoin(SpectopoError):
    """No least upper bound for a pair.

    ``reason`` is ``"no upper bound"`` or ``"no least upper bound"``; in the
    latter case ``minimal`` holds two incomparable minimal upper bounds.
    """

    def __init__(self, message="", witness=None, reason="", minimal=None):
        super().__init__(message, witness)
        self.reason = reason
        self.minimal = minimal


class NotSemilattice(SpectopoError):
    pass


# spec

class InvalidStructure(SpectopoError):
    """A structure failed its axioms; ``report`` holds the AxiomReport if any."""

    def __init__(self, message="", witness=None, report=None):
        super().__init__(message, witness)
        self.report = report


class NotPrincipal(SpectopoError):
    pass


class NotIsotone(SpectopoError):
    pass


class NotExtensive(SpectopoError):
    pass


class NotIdempotent(SpectopoError):
    pass


class NotJoinHom(SpectopoError):
    pass


class NotTolerance(SpectopoError):
    pass


class NotMonotone(SpectopoError):
    pass


class GroundTooLarge(SpectopoError):
    pass


class BaseMismatch(SpectopoError):
    pass


# closure

class OpenMapNeedsTopology(SpectopoError):
    pass


class NotMorphism(SpectopoError):
    pass


class ConsistencyError(SpectopoError):
    """Two independent computations of the same fact disagreed."""


# embed

class KindMismatch(SpectopoError):
    pass


class NotCongruence(SpectopoError):
    pass


class Condition44Violated(SpectopoError):
    """An identified pair is not mutually specialization-related."""


class PreconditionFailed(SpectopoError):
    def __init__(self, message="", witness=None, failed=()):
        super().__init__(message, witness)
        self.failed = tuple(failed)


# folang

class ParseError(SpectopoError):
    def __init__(self, line, column, expected, found=""):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        self.found = found
        exp = ", ".join(self.expected)
        super().__init__(f"{line}:{column}: expected {exp}; found {found or 'end of input'}")


class SignatureMismatch(SpectopoError):
    pass


class UnknownBuiltin(SpectopoError):
    pass


# enumeration

class SizeGuard(SpectopoError):
    pass


# sst documents

class DocumentError(SpectopoError):
    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")
