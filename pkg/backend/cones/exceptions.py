from locklab.exceptions import LockLabError


class ConeError(LockLabError):
    """Cone extraction or selection failed."""
