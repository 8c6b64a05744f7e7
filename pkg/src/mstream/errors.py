"""Exception hierarchy and the exit codes the CLI maps them to."""


class MStreamError(Exception):
    exit_code = 1


class InstanceError(MStreamError):
    """Malformed or inconsistent instance data."""

    exit_code = 2

    def __init__(self, message, pointer=None):
        self.pointer = pointer
        if pointer is not None:
            message = f"{pointer}: {message}"
        super().__init__(message)


class ParamError(MStreamError):
    exit_code = 2


class InvariantError(MStreamError):
    """A runtime-checked guarantee failed; this is a bug, not bad input."""

    exit_code = 3


class BudgetError(MStreamError):
    """Exhaustive enumeration refused because the input is too large."""

    exit_code = 4
