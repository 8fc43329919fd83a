"""Exception hierarchy for the engine.

Every error raised by mltg derives from :class:`MltgError`, so callers can
catch engine failures without swallowing programming errors.
"""

from __future__ import annotations


class MltgError(Exception):
    """Base class for all engine errors."""


class CodomainMismatch(MltgError):
    """Two morphisms were composed or paired over different graphs."""


class SignatureMismatch(MltgError):
    """Partial morphisms compared under the definedness order must share dom and cod."""


class HomomorphismViolation(MltgError):
    """A node or arrow map does not preserve sources and targets."""


class NotASubgraph(MltgError):
    """A graph claimed to be a subgraph is not contained in its host."""


class NotInclusion(MltgError):
    """An operation requiring an inclusion morphism got a non-inclusion."""


class IdentificationConflict(MltgError):
    """A deleted element shares its image with a preserved one, so the
    pullback complement does not exist."""


class PullbackViolation(MltgError):
    """A constructed square failed its post-hoc pullback check."""


class UnknownElement(MltgError):
    """An element id does not belong to the graph it was looked up in."""


class ChainMismatch(MltgError):
    """Chain morphisms composed end to end do not share the middle chain."""


class DepthMismatch(MltgError):
    """Two typings expected to live over chains of equal depth do not."""


class DepthExceedsTarget(MltgError):
    """A level map was requested from a deeper chain into a shallower one."""


class ChainAxiomViolation(MltgError):
    """A typing chain violates the total/transitive/connex axioms."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class CoherenceViolation(MltgError):
    """Left- and right-hand typings of a rule disagree about which levels
    type the shared elements."""


class TypingDisagreement(MltgError):
    """Left- and right-hand typings assign different types to a shared element."""


class MatchInvalid(MltgError):
    """A match re-check failed before rule application."""

    def __init__(self, issues):
        super().__init__("; ".join(str(i) for i in issues) or "invalid match")
        self.issues = list(issues)


class ParseError(MltgError):
    """A document could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DanglingTypeReference(MltgError):
    """A direct-type annotation points at an element that does not exist."""
