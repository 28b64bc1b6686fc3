"""Exception taxonomy shared across the package.

The CLI maps these to exit codes: ParseError -> 2, PreconditionError (and
subclasses) -> 3, IdentityError -> 4.  Everything raised on purpose derives
from LinkformError; anything else escaping is a plain bug.
"""

from __future__ import annotations


class LinkformError(Exception):
    """Base class for all errors raised deliberately by this package."""


class ParseError(LinkformError):
    """Malformed textual or JSON input."""


class PreconditionError(LinkformError):
    """A documented mathematical precondition was violated by the caller."""


class DegenerateFormError(PreconditionError):
    """The linking form is degenerate; classification requires non-degeneracy."""


class FieldExtensionError(PreconditionError):
    """The computation would leave the session's coefficient field."""


class ExactnessError(PreconditionError):
    """An exactly identified circle point was required but only an isolated
    (interval-certified) one is available."""


class TruncationError(PreconditionError):
    """Jet truncation order too small to certify a valuation."""


class RefinementLimitError(LinkformError):
    """Interval refinement hit its iteration cap without a decision.

    This is a safety valve; with sign-definite isolating intervals it should
    be unreachable."""


class IdentityError(LinkformError):
    """An internal cross-check identity failed.

    Raised when two independently computed views of the same invariant
    disagree; indicates a bug (or an inconsistent hand-built input), never a
    routine bad argument."""
