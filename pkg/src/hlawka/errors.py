"""Exception types shared across the library.

Numeric failures (poles, divergent series, overflow) are distinguished from
input-validation failures so the CLI can map them to different exit codes.
"""


class ValidationError(ValueError):
    """Invalid input: bad parameters, violated preconditions, parse errors."""


class ShapeSpecError(ValidationError):
    """Shape mini-language parse failure; carries the offending position."""

    def __init__(self, text: str, pos: int, reason: str):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"shape spec error at position {pos}: {reason} (in {text!r})")


class NumericError(ArithmeticError):
    """Base class for runtime numeric failures."""


class PoleError(NumericError):
    """Evaluation requested at (or too close to) a pole."""


class DivergenceError(NumericError):
    """A series or continued fraction failed to converge."""


class OverflowSignal(NumericError):
    """Result magnitude exceeds the floating-point range; signaled, not returned."""
