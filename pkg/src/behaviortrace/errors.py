"""Exception hierarchy shared across the engine.

Every error that can cross the wire carries a stable ``code`` (its class
name) so the session layer can turn any failure into an error frame
without a lookup table.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- dataset ---------------------------------------------------------------

class IngestError(EngineError):
    """Base for tabular ingestion failures."""


class EmptyInput(IngestError):
    """Source had no header or no data rows."""


class RaggedRow(IngestError):
    """A data row's arity does not match the header arity."""

    def __init__(self, row_number: int, expected: int, got: int):
        super().__init__(
            f"row {row_number} has {got} cells, expected {expected}"
        )
        self.row_number = row_number


class DuplicateAttributeName(IngestError):
    def __init__(self, name: str):
        super().__init__(f"duplicate attribute name: {name!r}")
        self.name = name


class AllNullColumn(IngestError):
    """A column has no non-null cells; the caller must supply an explicit
    datatype override."""

    def __init__(self, name: str):
        super().__init__(
            f"attribute {name!r} is entirely null; pass an explicit datatype override"
        )
        self.name = name


class CellParseError(IngestError):
    """A cell could not be coerced to the (declared or inferred) datatype."""


# --- charts ----------------------------------------------------------------

class UnknownAttribute(EngineError):
    def __init__(self, name: str):
        super().__init__(f"unknown attribute: {name!r}")
        self.name = name


class InvalidPredicate(EngineError):
    """A filter predicate is malformed or inconsistent with the schema."""


# --- ledger ----------------------------------------------------------------

class UnknownElement(EngineError):
    def __init__(self, element_id: str):
        super().__init__(f"unknown visual element: {element_id!r}")
        self.element_id = element_id


class CorruptLog(EngineError):
    """A session-log line failed to parse. Reports the 1-based line number."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"corrupt log line {line_number}: {reason}")
        self.line_number = line_number


# --- targets ---------------------------------------------------------------

class TargetError(EngineError):
    """Base for target-distribution failures."""


class NegativeWeight(TargetError):
    def __init__(self, key, weight):
        super().__init__(f"negative weight {weight!r} for {key!r}")


class DegenerateSketch(TargetError):
    """All weights / the sketch integral are zero; no distribution exists."""


class InvalidControlPoints(TargetError):
    """Custom Q/T control points are not strictly increasing, too few, or
    outside the attribute range."""


# --- behavior --------------------------------------------------------------

class SupportMismatch(EngineError):
    def __init__(self, observed_keys, target_keys):
        super().__init__(
            f"observed support {sorted(map(str, observed_keys))} != "
            f"target support {sorted(map(str, target_keys))}"
        )


# --- session ---------------------------------------------------------------

class ProtocolError(EngineError):
    """A client message had an unknown type or malformed fields."""


class FingerprintMismatch(EngineError):
    """The dataset on disk no longer matches the archived fingerprint."""
