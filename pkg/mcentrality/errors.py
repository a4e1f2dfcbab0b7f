class RankingError(RuntimeError):
    """Generic ranking toolkit exception."""


class GraphParseError(RankingError):
    def __init__(self, message: str, line_number: int | None = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptyGraphError(RankingError):
    pass


class NodeOutOfRangeError(RankingError, IndexError):
    pass


class TooFewNodesError(RankingError):
    pass


class InvalidParameterError(RankingError, ValueError):
    pass


class DegenerateAttributeError(RankingError):
    """Both M-Centrality attributes carry no ranking information."""


class ConvergenceError(RankingError):
    def __init__(self, message: str, residual: float, iterations: int) -> None:
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")


class ThresholdError(RankingError):
    pass


class UnknownMethodError(RankingError):
    pass
