"""Exception hierarchy shared by every module.

The CLI maps :class:`InputError` to exit code 1 and :class:`RefusalError`
to exit code 2.
"""


class CmkError(Exception):
    pass


class InputError(CmkError, ValueError):
    """Malformed or inconsistent input (dimension mismatch, unknown id, ...)."""


class ParseError(InputError):
    """A quiver file could not be read.

    ``context`` names the offending field path or line, when known.
    """

    def __init__(self, message, context=None):
        self.context = context
        if context:
            message = f"{context}: {message}"
        super().__init__(message)


class RefusalError(CmkError):
    """A computation was declined because its hypotheses are not met."""


class OracleBudgetError(RefusalError):
    pass
