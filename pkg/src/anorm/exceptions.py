"""Exception hierarchy; each family maps to one CLI exit code."""


class AnormError(Exception):
    exit_code = 1


class InputError(AnormError, ValueError):
    """Malformed or inconsistent user input."""

    exit_code = 2


class RingMismatchError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ComputationLimit(AnormError):
    """A configured pair or coefficient-size cap was exceeded."""

    exit_code = 3


class NumericError(AnormError):
    exit_code = 4


class VerificationError(AnormError):
    """An algebraic step failed; carries which stage failed."""

    exit_code = 1

    def __init__(self, message, stage=None, residual=None):
        super().__init__(message)
        self.stage = stage
        self.residual = residual

