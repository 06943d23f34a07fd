"""Shared exception types.

GuardError marks a refused computation (instance too large for an exact
oracle, interval with several integer candidates, and so on).  The CLI maps
GuardError and ValidationError to exit code 2; anything else is an internal
error (exit code 1).
"""


class RegcolorError(Exception):
    pass


class GuardError(RegcolorError):
    """A feasibility guard refused the computation."""


class ValidationError(RegcolorError):
    """Input violates a documented precondition or constraint."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations) if violations else []
