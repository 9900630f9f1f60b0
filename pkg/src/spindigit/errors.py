"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """Invalid argument or inconsistent specification."""


class CapacityError(ValidationError):
    """Requested system size exceeds the configured ceiling."""


class DegenerateSeriesError(ValidationError):
    """A series is too flat for the requested normalization."""


class ToleranceError(RuntimeError):
    """A numerical routine could not meet the requested tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class QasmParseError(ValueError):
    """OpenQASM text could not be parsed."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedQasmError(ValueError):
    """OpenQASM construct outside the supported u3/cx subset."""

    def __init__(self, construct: str, line: int):
        super().__init__(f"unsupported OpenQASM construct {construct!r} at line {line}")
        self.construct = construct
        self.line = line
