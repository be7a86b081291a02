"""Exception hierarchy shared across the toolkit."""


class WptError(Exception):
    """Base class for all toolkit-specific errors."""


class DegenerateNetworkError(WptError):
    """A network conversion hit a (near-)singular denominator."""


class UnmatchableError(WptError):
    """No lossless two-element network can match the given port."""


class InfeasibleDesignError(WptError):
    """A design stage has no solution under the given constraints.

    ``stage`` names the pipeline step that failed and ``nearest`` carries
    whatever near-miss data the stage could report.
    """

    def __init__(self, stage: str, message: str, nearest=None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.nearest = nearest


class TouchstoneFormatError(WptError):
    """Malformed Touchstone content; ``line`` is the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
