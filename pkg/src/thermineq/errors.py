"""Exception types shared across the package."""


class ParseError(ValueError):
    """Expression text failed to parse. Carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class EvalDomainError(ValueError):
    """Evaluation left the mathematical domain (log of a negative, overflow, ...)."""


class DomainError(ValueError):
    """A point or interval falls outside a function's declared domain."""


class ValidationError(ValueError):
    """A precondition on the inputs does not hold."""


class NumericsError(RuntimeError):
    """A numerical procedure exhausted its budget or lost consistency."""


class BracketError(NumericsError):
    """A bracketed root search was started without a sign change."""


class UsageError(Exception):
    """Bad command-line usage. Maps to exit status 1."""
