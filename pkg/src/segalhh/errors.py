class SegalHHError(Exception):
    """Base class for errors raised by segalhh."""


class StructuralError(SegalHHError):
    """Malformed input: wrong array shapes, indices out of range, mismatched truncations."""


class TruncationError(SegalHHError):
    """The requested degree is not reliable at the available truncation."""


class BudgetExceeded(SegalHHError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class Unsupported(SegalHHError):
    """The construction is outside what the desk-scale implementation handles."""


class CheckFailed(SegalHHError):
    """A mathematical check failed; ``witness`` carries a counterexample."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
