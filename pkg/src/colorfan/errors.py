"""Exception types shared by the library and mapped to CLI exit codes."""


class ColorfanError(Exception):
    """Base class for all library errors."""


class InputError(ColorfanError, ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class BudgetExceeded(InputError):
    """A computation was refused because it exceeds a configured size budget."""


class HypothesisViolated(InputError):
    """An operation was called on input outside the hypotheses it relies on."""


class InternalConsistencyError(ColorfanError, AssertionError):
    """An internal invariant (balancing, span membership, oracle agreement) failed (exit code 3)."""
