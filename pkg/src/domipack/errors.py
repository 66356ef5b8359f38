"""Exception types shared across the package.

The CLI maps these onto exit codes: parse/usage problems exit 2, domain
failures (infeasible instance, missing order, blown budget) exit 1.
"""


class ParseError(ValueError):
    """A graph/instance/order file is malformed. Carries the offending line."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class InfeasibleInstanceError(ValueError):
    """A domination instance admits no feasible assignment (quota exceeds
    the reachable capacity of some closed neighborhood)."""

    def __init__(self, vertex: int, quota: int, capacity: int):
        super().__init__(
            f"infeasible dominate instance: vertex {vertex} needs quota "
            f"{quota} but its closed neighborhood caps at {capacity}"
        )
        self.vertex = vertex
        self.quota = quota
        self.capacity = capacity


class NotNormalizedError(ValueError):
    """An operation required a (partially) normalized instance; run
    ``normalize`` on the instance first."""


class UnsupportedFormError(ValueError):
    """A labelled packing form outside start=0, step=1, labels in {0, free}."""


class InvalidOrderError(ValueError):
    """An elimination order failed verification for the given graph."""


class BudgetExceededError(RuntimeError):
    """The oracle's enumeration space exceeds the configured budget."""

    def __init__(self, space: int, budget: int):
        super().__init__(
            f"brute-force space {space} exceeds budget {budget}; "
            "supply an elimination order or raise --budget"
        )
        self.space = space
        self.budget = budget
