from locklab.exceptions import LockLabError


class LockingError(LockLabError):
    """A locking construction or key operation was rejected."""


class KeyWidthError(LockingError):
    pass


class InsertionCapacityError(LockingError):
    pass


class BlockWidthError(LockingError):
    pass


class OrPositionError(LockingError):
    pass


class HammingDistanceError(LockingError):
    pass


class MultiOutputError(LockingError):
    pass
