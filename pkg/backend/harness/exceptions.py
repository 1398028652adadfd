from locklab.exceptions import LockLabError


class HarnessError(LockLabError):
    """An experiment could not be set up or summarised."""


class DegenerateFitError(HarnessError):
    pass
