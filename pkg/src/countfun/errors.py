"""Exception types raised across the package."""


class CountfunError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""

    code = "Error"


class InvalidLetter(CountfunError, ValueError):
    code = "InvalidLetter"


class NonReducedWord(CountfunError, ValueError):
    code = "NonReducedWord"


class EmptyPattern(CountfunError, ValueError):
    code = "EmptyPattern"


class ModeMismatch(CountfunError, ValueError):
    code = "ModeMismatch"


class LevelTooSmall(CountfunError, ValueError):
    code = "LevelTooSmall"


class LevelOutOfRange(CountfunError, ValueError):
    code = "LevelOutOfRange"


class NotPure(CountfunError, ValueError):
    code = "NotPure"


class Disconnected(CountfunError, ValueError):
    code = "Disconnected"


class DepthTooSmall(CountfunError, ValueError):
    code = "DepthTooSmall"


class IllegalLetter(CountfunError, ValueError):
    code = "IllegalLetter"


class NotConstant(CountfunError, ValueError):
    code = "NotConstant"


class NotSpecialWord(CountfunError, ValueError):
    code = "NotSpecialWord"


class TooLarge(CountfunError, ValueError):
    code = "TooLarge"


class ParseError(CountfunError, ValueError):
    code = "ParseError"

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position
