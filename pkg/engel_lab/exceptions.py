class EngelLabError(Exception):
    """Base error; carries a human readable detail and the CLI exit status."""

    exit_status: int = 2

    def __init__(self, detail: str, exit_status: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_status is not None:
            self.exit_status = exit_status


class InvalidElement(EngelLabError, ValueError):
    """Bad index, bad text form, or an element that violates its invariants."""


class GroundSetMismatch(EngelLabError, ValueError):
    """A subset escapes the ground set it is used with."""


class NonDisjointSets(EngelLabError, ValueError):
    pass


class RangeCapError(EngelLabError, ValueError):
    exit_status = 3


class ResourceCapExceeded(EngelLabError):
    exit_status = 3


class CollectionError(EngelLabError, RuntimeError):
    """Collection into normal form did not finish within its step budget."""


class NotUnipotent(EngelLabError, ArithmeticError):
    pass
