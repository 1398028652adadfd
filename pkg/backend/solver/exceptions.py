from locklab.exceptions import LockLabError


class SolverError(LockLabError):
    """The satisfiability engine was misused or is unavailable."""


class UnknownVariableError(SolverError):
    pass


class BackendUnavailableError(SolverError):
    pass
