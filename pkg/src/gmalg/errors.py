"""Exception hierarchy shared by all gmalg modules."""


class GmalgError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatchError(GmalgError):
    """Operands built over different scalar fields."""


class DimensionMismatchError(GmalgError):
    """Shapes or ambient dimensions do not line up."""


class BudgetExceededError(GmalgError):
    """A computation would exceed the configured resource budget."""

    def __init__(self, what: str, required: int, allowed: int):
        super().__init__(f"{what}: needs {required}, budget allows {allowed}")
        self.what = what
        self.required = required
        self.allowed = allowed


class InvalidContextError(GmalgError):
    """A Morita context failed validation; carries the report."""

    def __init__(self, report):
        super().__init__(f"context validation failed: {report.summary()}")
        self.report = report


class ExtremalPreconditionError(GmalgError):
    """Seed element does not annihilate the commutator span."""

    def __init__(self, witness):
        super().__init__(
            "seed does not commute with the commutator span; "
            f"witness bracket index {witness}"
        )
        self.witness = witness


class LieLeibnizError(GmalgError):
    """Input map is not an n-Lie derivation; carries the failing slot/tuple."""

    def __init__(self, witness):
        super().__init__(f"map fails the slot Leibniz law at {witness}")
        self.witness = witness


class CenterStructureError(GmalgError):
    """Center-linkage construction failed on (likely hand-edited) input."""


class SpecFileError(GmalgError):
    """A spec or map file could not be parsed or failed validation on load."""
