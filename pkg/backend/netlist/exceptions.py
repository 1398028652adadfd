"""
Netlist errors. Every parse either yields a validated Circuit or raises one of these.
"""
from locklab.exceptions import LockLabError


class NetlistError(LockLabError):
    """Invalid or unsupported netlist content."""


class BenchSyntaxError(NetlistError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedGateError(NetlistError):
    pass


class ArityError(NetlistError):
    pass


class DuplicateDriverError(NetlistError):
    pass


class UndrivenNetError(NetlistError):
    pass


class CombinationalLoopError(NetlistError):
    pass


class MissingInputError(NetlistError):
    pass
