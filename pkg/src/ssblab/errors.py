"""Exception hierarchy shared by the library and the CLI.

Every error carries a structured ``details`` mapping so failure reports can
be emitted as machine-readable JSON.  ``exit_code`` is what the CLI returns
when the error escapes: 1 for validation/precondition/input problems, 2 for
non-convergence and capability limits.
"""

from __future__ import annotations

from fractions import Fraction


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    if hasattr(value, "item") and not isinstance(value, (int, float, str, bool)):
        return value.item()
    return value


class SsbLabError(Exception):
    """Base error with a JSON-serializable payload."""

    exit_code = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def payload(self) -> dict:
        return {
            "type": type(self).__name__,
            "message": str(self),
            "details": _jsonable(self.details),
        }


class ValidationError(SsbLabError):
    """Structural invariant violated (bad algebra, split, table, matrix...)."""

    exit_code = 1


class InputError(SsbLabError):
    """Unparseable or inconsistent input (file, field, CLI option)."""

    exit_code = 1


class PreconditionError(SsbLabError):
    """Operation precondition not met by otherwise valid data."""

    exit_code = 1


class DomainError(SsbLabError):
    """Input outside the mathematical domain (e.g. no principal logarithm)."""

    exit_code = 1


class NoGeneratorError(PreconditionError):
    """Derivation is not implementable in the given representation."""

    exit_code = 1


class NonConvergenceError(SsbLabError):
    """Iteration or series failed to converge; diagnostics attached."""

    exit_code = 2


class CapabilityError(SsbLabError):
    """Request outside the tool's supported desk-scale envelope."""

    exit_code = 2
