"""Exception hierarchy shared by the library and the CLI exit codes."""


class ZKError(Exception):
    exit_code = 1


class ValidationError(ZKError, ValueError):
    """Malformed input: bad complex, bad parameters, parse failures."""


class UnsupportedOperation(ZKError):
    pass


class CapExceeded(ZKError):
    """An enumeration would exceed a configured size cap."""

    exit_code = 2

    def __init__(self, what, value, cap):
        super().__init__(f"{what} = {value} exceeds the cap of {cap}; raise the cap explicitly to proceed")
        self.what = what
        self.value = value
        self.cap = cap


class InvariantViolation(ZKError):
    """An internal consistency check failed. Indicates a bug or bad input."""

    exit_code = 3
