"""Exception types shared across the package."""


class GridMismatchError(ValueError):
    """Two signals that must share a grid do not."""


class CostGateError(ValueError):
    """A computation would exceed its documented size gate."""


class CoverError(ValueError):
    """A collection of patches fails to cover the requested interval."""


class ToleranceNotReachedError(RuntimeError):
    """An adaptive search exhausted its budget before meeting its target."""
