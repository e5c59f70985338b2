class InvalidParameter(ValueError):
    pass


class PreconditionViolated(ValueError):
    """A bound or theorem hypothesis does not hold for the given inputs.

    ``condition`` names the failed inequality so callers (and the CLI) can
    report it.
    """

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or f"precondition violated: {condition}")


class BudgetExceeded(RuntimeError):
    pass
