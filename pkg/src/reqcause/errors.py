"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ReqCauseError(Exception):
    """Base class for every error raised by reqcause."""


# extraction


class MalformedClause(ReqCauseError, ValueError):
    """A cue was found but the sentence has no separable cause/effect clauses."""


class EmptyClause(ReqCauseError, ValueError):
    pass


# annotation


class AnnotationError(ReqCauseError, ValueError):
    """Malformed bracket annotation. ``offset`` points into the input string."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnbalancedBrackets(AnnotationError):
    pass


class UnknownLabel(AnnotationError):
    pass


class NonBinaryNode(AnnotationError):
    pass


class OverlappingSpans(AnnotationError):
    pass


class MissingCause(AnnotationError):
    pass


class MissingEffect(AnnotationError):
    pass


class DegenerateAgreement(ReqCauseError, ValueError):
    """Fleiss kappa is undefined because chance agreement equals one."""


class InvalidRatings(ReqCauseError, ValueError):
    pass


class MisalignedInputs(ReqCauseError, ValueError):
    pass


# logic / testgen


class UnboundAtom(ReqCauseError, KeyError):
    pass


class EffectMismatch(ReqCauseError, ValueError):
    pass


class AtomLimitExceeded(ReqCauseError, ValueError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} atoms exceed the brute-force cap of {cap}")
        self.count = count
        self.cap = cap


class InvalidRelation(ReqCauseError, ValueError):
    pass


class UnsupportedKind(ReqCauseError, ValueError):
    pass


class TooManyCauses(ReqCauseError, ValueError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} cause atoms exceed the enumeration cap of {cap}")
        self.count = count
        self.cap = cap


class NoTogglePair(UserWarning):
    """A cause atom has no influence on the cause formula."""

    def __init__(self, atom_id: str):
        super().__init__(f"cause atom {atom_id!r} has no toggle pair")
        self.atom_id = atom_id
