"""movepat exceptions"""


class MovepatError(Exception):
    """Base exception for movepat"""

    pass


class ConfigError(MovepatError):
    """Configuration failed validation"""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class GapError(MovepatError):
    """Tracking stream is not on a uniform 0.1 s grid"""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class InvalidSampleError(MovepatError):
    """A tracking sample carries a NaN or infinite signal"""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class UnrecoverableInputError(MovepatError):
    """A required signal is missing and cannot be derived"""

    pass


class EmptyInputError(MovepatError):
    """An operation received no sequences, transactions or rows"""

    pass


class KindMismatchError(MovepatError):
    """Patterns from different algorithms were mixed"""

    def __init__(self, message: str, expected: str | None = None, actual: str | None = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class UndefinedInputError(MovepatError):
    """The result is undefined for this input (e.g. Jaccard of two empty sets)"""

    pass


class MissingClassError(MovepatError):
    """A requested position label has no observations"""

    def __init__(self, message: str, label: str | None = None):
        super().__init__(message)
        self.label = label


class DegenerateLabelsError(MovepatError):
    """Training data does not hold exactly two labels, or has no features"""

    pass


class NotFittedError(MovepatError):
    """Model used before fit()"""

    pass


class StageError(MovepatError):
    """A pipeline stage failed"""

    def __init__(self, message: str, stage: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
