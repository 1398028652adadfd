from locklab.exceptions import LockLabError


class AttackError(LockLabError):
    """An attack could not run to completion. ``trace`` holds the partial trace when one exists."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NotADistinguishingInputError(AttackError):
    pass


class IterationCapExceeded(AttackError):
    pass


class AttackBudgetExceeded(AttackError):
    pass


class ConstraintInconsistencyError(AttackError):
    pass


class ReplayIncompleteError(AttackError):
    pass


class KeyspaceTooLargeError(AttackError):
    pass


class OracleMismatchError(AttackError):
    pass
