"""Exception types shared by all modules."""


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class DegenerateInputError(InvalidInputError):
    """Raised when a recurrence step would divide by zero."""


class NoRootError(RuntimeError):
    """Raised when a root finder cannot bracket or converge on a root.

    ``bracket`` holds the interval that was searched, when one exists.
    """

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class UndefinedMeritError(InvalidInputError):
    """Raised when the figure of merit has a zero denominator."""
