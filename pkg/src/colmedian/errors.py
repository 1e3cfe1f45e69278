"""Exception hierarchy shared across the package."""


class ColmedianError(Exception):
    """Base class for all library-specific errors."""


class FormatError(ColmedianError):
    """Malformed input file (instance, graph, coverage, grid config)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MetricViolationError(ColmedianError):
    """A distance matrix violates the metric axioms."""

    def __init__(self, message: str, violation=None):
        self.violation = violation
        super().__init__(message)


class ParameterError(ColmedianError):
    """Structurally valid input with out-of-range or inconsistent parameters."""


class InfeasibleError(ColmedianError):
    """No feasible solution exists for the requested operation."""


class BudgetError(ColmedianError):
    """An enumeration would exceed the configured subset budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} subsets, exceeding the budget of {budget}"
        )
