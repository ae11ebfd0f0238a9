"""Exceptions shared across modules."""


class TheoremCheckError(AssertionError):
    """A checked identity or inequality failed; carries the offending instance."""


class BudgetExhausted(RuntimeError):
    """Rejection sampling ran out of trials."""

    def __init__(self, trials: int):
        super().__init__(f"no accepted sample within {trials} trials")
        self.trials = trials
