"""Exception types shared across knotcalc."""

from __future__ import annotations


class KnotcalcError(Exception):
    """Base class for all knotcalc errors."""


class InputError(KnotcalcError, ValueError):
    """Malformed or out-of-domain input."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CertificateError(KnotcalcError, ArithmeticError):
    """An identity that must hold exactly was found to fail.

    These indicate a bug (or a counterexample to a stated bound), never bad
    input, and the CLI maps them to a dedicated exit code.
    """


class PrecisionError(KnotcalcError, ArithmeticError):
    """The working precision is too low to certify a result."""


def certify(condition: bool, message: str) -> None:
    # Not an assert: must survive python -O.
    if not condition:
        raise CertificateError(message)
