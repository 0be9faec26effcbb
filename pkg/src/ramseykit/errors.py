"""Shared exception types."""

from __future__ import annotations


class RamseykitError(Exception):
    """Base class for all library errors."""


class InvalidInput(RamseykitError):
    """Malformed structure, language, or argument."""


class NotClosed(InvalidInput):
    """A vertex set is not closed under function values."""

    def __init__(self, vset, violation):
        self.vset = frozenset(vset)
        self.violation = violation
        super().__init__(f"set {sorted(self.vset)} not function-closed: {violation}")


class SearchCapExceeded(RamseykitError):
    """An exhaustive search hit its node or size cap before deciding."""

    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


class SizeCapExceeded(RamseykitError):
    """A construction would exceed the configured vertex/tuple cap."""

    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


# Conservative defaults; every cap is overridable per call.
DEFAULT_VERTEX_CAP = 10**5
DEFAULT_NODE_CAP = 10**7
