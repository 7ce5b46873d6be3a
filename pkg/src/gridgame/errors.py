"""Exception types shared across the solver stack.

Exception names mirror the failure they report (singular recursion
denominator, singular linear system, ...) so callers can branch on the
class without parsing messages.
"""

from __future__ import annotations


class GridGameError(Exception):
    """Base class for all solver errors."""


class ScenarioValidationError(GridGameError):
    """One or more scenario invariants are violated.

    Carries the full list of violations so a caller (or the CLI) can report
    everything wrong with a file at once instead of failing one field at a
    time. Each violation is a ``(code, message)`` pair, e.g.
    ``("NonNegativeOmega", "omega[3] = 0.1 must be < 0")``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{code}: {msg}" for code, msg in self.violations]
        super().__init__("scenario validation failed:\n  " + "\n  ".join(lines))

    @property
    def codes(self):
        return [code for code, _ in self.violations]


class NonPositiveDelta(GridGameError):
    """A generator cost coefficient is <= 0."""


class NonPositiveDemand(GridGameError):
    """Consumption allocation requested for a negative demand."""


class SingularRecursion(GridGameError):
    """A backward-recursion denominator vanished at some slot."""

    def __init__(self, t, value):
        self.t = t
        self.value = value
        super().__init__(
            f"recursion denominator at slot t={t} is {value:.3e} (|.| < 1e-12)"
        )


class SingularSystem(GridGameError):
    """A direct linear solve failed or left an unacceptable residual."""


class NoConvergence(GridGameError):
    """Best-response iteration hit the sweep limit.

    The last iterate is preserved so diagnostics can still be produced.
    """

    def __init__(self, message, solution=None, residual=None):
        self.solution = solution
        self.residual = residual
        super().__init__(message)


class NonInteriorProbe(GridGameError):
    """A response-map probe solve returned a non-interior Nash solution."""
