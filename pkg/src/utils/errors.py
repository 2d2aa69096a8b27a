"""
Error Types

Exceptions raised across the toolkit. Argument problems also derive from
ValueError so callers that only catch ValueError keep working.
"""

from typing import List, Optional


class QuditMSDError(Exception):
    """Base class for all toolkit errors."""


class InvalidModulus(QuditMSDError, ValueError):
    """The modulus is not an odd prime inside the supported range."""


class ZeroInverse(QuditMSDError, ArithmeticError):
    """Attempted to invert zero modulo d."""


class NoSolution(QuditMSDError, ValueError):
    """A linear system over Z_d is inconsistent."""


class DimensionMismatch(QuditMSDError, ValueError):
    """Operands disagree on qudit count or local dimension."""


class ShapeError(QuditMSDError, ValueError):
    """An array does not have the shape the operation needs."""


class InvalidCode(QuditMSDError, ValueError):
    """A stabilizer code failed validation."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class EmptyCodespace(QuditMSDError, ValueError):
    """No phase-space point satisfies the code's syndrome equations."""


class ZeroAcceptance(QuditMSDError, ArithmeticError):
    """The codespace carries no statistical weight for the given input."""


class NegativeInput(QuditMSDError, ValueError):
    """A sampler was given a quasi-distribution with negative entries."""


class BudgetExceeded(QuditMSDError, ValueError):
    """A dense computation would exceed the configured size budget."""


class InputFormatError(QuditMSDError, ValueError):
    """A file could not be parsed into one of the supported formats."""


class SolverTimedOut(QuditMSDError, TimeoutError):
    """The independent-set search ran out of time.

    Carries the best certificate found before the deadline.
    """

    def __init__(self, best_size: int, certificate: Optional[List[int]] = None):
        super().__init__(f"search timed out; best lower bound {best_size}")
        self.best_size = best_size
        self.certificate = list(certificate or [])


class ContractViolation(QuditMSDError, RuntimeError):
    """A computed result broke a property the toolkit guarantees."""
