import typing as t


class ShapeError(ValueError):
    pass


class NumericError(ArithmeticError):
    pass


class ArgumentError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class DatasetFormatError(ValueError):
    def __init__(self, msg: str, line: t.Optional[int] = None):
        self.line = line
        if line is not None:
            msg = f'line {line}: {msg}'
        super(DatasetFormatError, self).__init__(msg)


class TrainingError(RuntimeError):
    def __init__(self, msg: str, step: int, metrics: t.Optional[t.Dict[str, float]] = None):
        self.step = step
        self.metrics = dict(metrics or {})
        super(TrainingError, self).__init__(f'step {step}: {msg}. Last metrics: {self.metrics}')


class BufferTooSmallError(LookupError):
    """Raised when a sampler cannot yet serve a batch. Callers keep exploring or defer the update."""
    pass
