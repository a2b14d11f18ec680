"""Exception types raised when an internal invariant is violated."""

from __future__ import annotations


class InvariantError(RuntimeError):
    """An internal consistency check failed.

    ``context`` carries the offending parameters (m, n, d, t, p) so that
    failures can be reproduced from the error message alone.
    """

    def __init__(self, message: str, **context):
        self.context = {k: v for k, v in context.items() if v is not None}
        if self.context:
            where = ", ".join(f"{k}={v}" for k, v in self.context.items())
            message = f"{message} [{where}]"
        super().__init__(message)


class BoundarySquareError(InvariantError):
    pass


class WellDefinednessError(InvariantError):
    pass


class RankInconsistencyError(InvariantError):
    pass


class NormalizationError(InvariantError):
    pass
