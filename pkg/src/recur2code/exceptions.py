"""Exception types shared across the package."""


class FieldError(ValueError):
    """Invalid field construction or element input."""


class FieldMismatchError(FieldError):
    """Operands live in different fields."""


class BudgetExceeded(ValueError):
    """A brute-force enumeration would exceed its configured work budget."""


class InvariantViolation(AssertionError):
    """A closed-form result disagrees with an independent computation.

    This signals a bug (or a false mathematical claim), never bad input.
    """
