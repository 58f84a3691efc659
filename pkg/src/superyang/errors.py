"""Shared exception types."""


class SuperyangError(Exception):
    """Base class for all package errors."""


class PoleError(SuperyangError):
    """Evaluation or expansion hit a zero of a denominator."""

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"pole: denominator factor {factor} vanishes")


class TruncationExhausted(SuperyangError):
    """A series operation produced an empty validity window."""

    def __init__(self, var):
        self.var = var
        super().__init__(f"truncation exhausted in variable {var!r}")


class SingularPivot(SuperyangError):
    """A series or matrix pivot is not invertible."""

    def __init__(self, what="leading coefficient not invertible"):
        super().__init__(f"Gauss pivot singular: {what}")


class GuardViolation(SuperyangError):
    """A relation was requested outside its index guard."""
