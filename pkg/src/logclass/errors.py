"""Exception types shared across the package."""


class LogClassError(Exception):
    """Base class for all package errors."""


class DivisionByZeroDivisor(LogClassError):
    """Division by an l-adic number that is 0 at its stated precision."""


class PrecisionExhausted(LogClassError):
    """A result would carry precision <= 0, or a tail cannot be bounded."""


class SearchExhausted(LogClassError):
    """A bounded search (relations, elements, primes) hit its bound."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class UnsupportedField(LogClassError):
    """Field or extension outside the degree <= 4 catalogue."""


class FinitenessNotCertified(LogClassError):
    """Group order failed the support/precision stability certificate."""


class InvalidModulus(LogClassError):
    """Ray modulus violates its invariants (e.g. a place divides l)."""


class NotDegreeZero(LogClassError):
    """Divisor has nonzero degree at the working precision."""


class SupportMeetsModulus(LogClassError):
    """Divisor support is not coprime to the modulus."""


class IncompatibleModuli(LogClassError):
    """Relative operation on moduli that do not lie above one another."""


class VerificationFailed(LogClassError):
    """A capitulation certificate failed its verification step."""


class PreconditionFailed(LogClassError):
    """Documented operation precondition violated by the caller."""
