"""Exact classification of q-bic forms over finite and rational function fields."""

__version__ = "0.1.0"


class CostGuardError(Exception):
    """Raised when an operation would exceed its configured cost guard."""
