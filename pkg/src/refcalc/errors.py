"""Shared exception types.

Every error the package raises deliberately is one of these, so callers
(including the CLI, which maps them to exit codes) can tell user mistakes
apart from internal bugs.
"""

from __future__ import annotations


class RefcalcError(Exception):
    """Base class for all deliberate errors raised by this package."""


class ParseError(RefcalcError):
    """Input text does not match the grammar.

    Carries the offending position so CLI diagnostics can point at it.
    """

    def __init__(self, message: str, text: str = "", pos: int = -1):
        if pos >= 0:
            message = f"{message} (at position {pos} in {text!r})"
        super().__init__(message)
        self.text = text
        self.pos = pos


class ClassMismatchError(RefcalcError):
    """A reflection class was applied to a theory of the wrong sort."""


class NoRuleError(RefcalcError):
    """No conservation rule applies to the expression/target pair.

    `partial` holds whatever result was computed before getting stuck,
    so diagnostics can show the partial trace.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class UnsupportedError(RefcalcError):
    """The operation is deliberately refused for this input shape."""


class LetterUnderflowError(RefcalcError):
    """Decrementing a worm that contains the letter 0."""
