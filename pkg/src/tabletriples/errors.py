"""Exception types shared across the toolkit.

Everything raised on purpose derives from TableTriplesError so the CLI can
catch one base class and emit a structured error report.
"""


class TableTriplesError(Exception):
    """Base class for all toolkit errors."""


class DuplicateHeaderError(TableTriplesError):
    """A table has repeated (or empty) column headers; must be fixed upstream."""


class CycleError(TableTriplesError):
    """Parent annotations form a cycle among columns."""


class DisconnectedError(TableTriplesError):
    """Some node cannot reach the root by parent links."""


class BadIndexError(TableTriplesError):
    """A column parent reference is out of range or points at itself."""


class EmptyTreeError(TableTriplesError):
    """The ontology tree has no nodes besides the root."""


class OversizeError(TableTriplesError):
    """A tripleset exceeded the maximum allowed number of triples."""


class EmptyRealizationError(TableTriplesError):
    """An entry was assembled without any (non-empty) realization text."""


class ParseError(TableTriplesError):
    """Malformed textual input (meaning representation, annotation record, ...)."""


class MalformedEntryError(TableTriplesError):
    """An XML entry is structurally invalid.

    Carries the entry id (when known) so callers can point at the offender.
    """

    def __init__(self, message: str, eid: str | None = None):
        super().__init__(message if eid is None else f"entry {eid}: {message}")
        self.eid = eid


class DegenerateSplitError(TableTriplesError):
    """A dataset split ended up with an empty train, dev, or test partition."""


class PredicateMapError(TableTriplesError):
    """A predicate mapping table violates the no-chains closure or the format."""
