"""Exception hierarchy.

Every error raised for bad caller input derives from :class:`GameInputError`
(itself a ``ValueError``), so callers can catch one class.
"""


class GameInputError(ValueError):
    """Structurally invalid input: wrong dimensions, bad distributions, etc."""


class ParseError(GameInputError):
    """Text document could not be parsed."""

    def __init__(self, reason, line=None, column=None):
        self.reason = reason
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + reason)


class PreconditionError(GameInputError):
    """Input is well formed but violates an operation's precondition."""


class NotEquilibriumError(PreconditionError):
    """A profile claimed to be an equilibrium is not one.

    The failing :class:`~coopetition.equilibria.VerificationReport` is kept
    on ``report``.
    """

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class ScaleError(GameInputError):
    """Problem exceeds the documented desk-scale ceiling."""
