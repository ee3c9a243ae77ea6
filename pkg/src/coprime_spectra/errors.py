"""Exception types shared across the package."""


class BoundedInputError(ValueError):
    """An input exceeds the configured practical bounds."""


class NotAForestError(ValueError):
    """A graph that must be acyclic contains a cycle (or a repeated edge)."""


class NonpositiveFactorError(ValueError):
    """An Euler-product factor evaluated to a nonpositive number."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; results cannot be trusted."""
