from locklab.exceptions import LockLabError


class CnfError(LockLabError):
    """Clause-form construction or conversion failed."""


class UnsatisfiableUnderAssignment(CnfError):
    """Simplification derived the empty clause."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class DimacsFormatError(CnfError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
