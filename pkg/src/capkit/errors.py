"""Exception types shared across the package.

Everything raised deliberately by capkit derives from :class:`CapkitError` so
the CLI can map failures onto its exit-code contract: input problems exit 2,
anything unexpected exits 3.
"""

from __future__ import annotations


class CapkitError(Exception):
    """Base class for all errors raised by capkit."""


class SchemaError(CapkitError):
    """A vector, map, or threshold does not fit its declared dimension schema."""


class ValuationError(CapkitError):
    """A valuation map could not produce an image for a functioning vector."""


class DeltaError(CapkitError):
    """An interaction delta references something absent from the scenario."""


class IncompleteRecordError(CapkitError):
    """A detector needs a declared counterfactual scenario the record omits."""


class TraceError(CapkitError):
    """A trace is empty, unresolvable, or its steps do not chain."""


class InternalInvariantError(CapkitError):
    """The engine broke one of its own guarantees; always a bug, never input."""


class DocumentError(CapkitError):
    """A scenario document failed to parse or validate.

    Carries the full list of located diagnostics so callers can report every
    problem at once instead of stopping at the first.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics[:5])
        more = len(self.diagnostics) - 5
        if more > 0:
            lines += f" (and {more} more)"
        super().__init__(lines or "invalid document")
