"""Exception taxonomy shared by all modules.

InputError: the caller asked for something outside the contract (bad label,
coincident points, empty window).  CLI maps it to exit code 1.

InternalError: a verified invariant failed, which means the implementation is
wrong, not the input.  CLI maps it to exit code 2.
"""


class InputError(ValueError):
    pass


class InternalError(AssertionError):
    pass
