ALLOC_LENGTH_MISMATCH = "Allocation length does not match the number of agents"
DIMENSION_MISMATCH = "LP dimensions are inconsistent"
NOT_A_MATCHING = "Edges share a vertex"
UNKNOWN_EDGE = "Edge is not part of the graph"


class DomainError(Exception):
    pass


class DomainValidationError(DomainError):
    pass


class GraphFormatError(DomainValidationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class SizeGuardError(DomainValidationError):
    pass


class InvariantViolationError(DomainError):
    pass


class DivergenceError(DomainError):
    def __init__(self, message: str, t: float | None = None):
        self.t = t
        super().__init__(message)


class OracleAssertionError(DomainError):
    pass


class RunOutcomeError(DomainError):
    """A run finished but its outcome could not be decided; `result` keeps the partial run."""

    def __init__(self, message: str, result=None):
        self.result = result
        super().__init__(message)


class UndecidedMatchingError(RunOutcomeError):
    pass


class UnsettledMatchingError(RunOutcomeError):
    pass
