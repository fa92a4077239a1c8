"""Exception types shared across the package.

Everything derives from ValueError so callers that do not care about the
fine-grained category can catch a single base class.
"""


class EntpowError(ValueError):
    """Base class for all validation errors raised by this package."""


class DimensionError(EntpowError):
    """Dimension list and matrix/vector shape disagree, or an index is out of range."""


class ArityError(EntpowError):
    """Operation restricted to a fixed party count (usually bipartite) got another."""


class InvalidCutError(EntpowError):
    """A bipartition of the parties is empty, overlapping, or out of range."""


class NotAWitnessError(EntpowError):
    """An operation requiring a valid entanglement witness received a non-witness."""


class IncomparableWitnessError(EntpowError):
    """Shifted witnesses with different test operators cannot be ordered."""


class SpecError(EntpowError):
    """A JSON spec file failed validation; `field` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
