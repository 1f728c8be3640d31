"""Exception taxonomy for the workbench.

Every error that a caller might want to catch programmatically (the CLI maps
them to exit codes) lives here, so modules never need to import each other
just for exception types.
"""


class TiltbenchError(Exception):
    """Base class for all package errors."""


class SpecFileError(TiltbenchError):
    """Malformed algebra spec file.  Carries a 1-based line/column."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + loc)


class NotAdmissible(TiltbenchError):
    """An input fails an admissibility hypothesis: a relation ideal that
    does not truncate path lengths, or an endomorphism algebra that
    collapses to zero in the requested flavor."""


class SearchCapExceeded(TiltbenchError):
    """An exhaustive search (idempotents, isomorphisms) exceeded its cap."""


class EnumerationCapExceeded(TiltbenchError):
    """Indecomposable enumeration hit the count or dimension cap
    (interpreted as "possibly infinite representation type")."""


class ApproximationNotMono(TiltbenchError):
    """A left approximation inside an n-cokernel chain failed to be injective;
    diagnostic that the subcategory is not actually n-cluster-tilting."""


class LastTermNotInM(TiltbenchError):
    """The deep end of an n-(co)kernel chain left the subcategory."""


class NotSelfInjective(TiltbenchError):
    """An operation requiring a self-injective base algebra was invoked
    on an algebra that is not self-injective."""


class NotAlmostSplit(TiltbenchError):
    """A candidate almost-split sequence failed verification."""


class NotMinimal(TiltbenchError):
    """Internal guard: a presentation expected to be minimal was not."""


class RepresentabilityFailure(TiltbenchError):
    """No generator represents a functor that the theory says must be
    representable; signals a bug or a non-theorem instance."""
