"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class MaskViolationError(InvalidArgumentError):
    """A coefficient matrix breaks a required zero/nonzero pattern.

    ``entries`` lists the offending positions as (name, row, col) tuples.
    """

    def __init__(self, message, entries=()):
        super().__init__(message)
        self.entries = tuple(entries)


class SingularFactorError(ArithmeticError):
    """A block of a block-diagonal factor is (numerically) singular."""

    def __init__(self, factor_index, block_index, cond=None):
        self.factor_index = factor_index
        self.block_index = block_index
        self.cond = cond
        detail = f"factor {factor_index}, block {block_index}"
        if cond is not None:
            detail += f" (cond ~ {cond:.3e})"
        super().__init__(f"singular block in factorization: {detail}")


class SingularSystemError(ArithmeticError):
    """A dense linear system required by an oracle is singular."""


class ResourceLimitError(RuntimeError):
    """A test-scale guard was exceeded (e.g. materializing a huge matrix)."""
