"""Exception hierarchy for rimc_calibration"""


class RimcError(Exception):
    """Base class for all toolkit errors"""


class ShapeError(RimcError, ValueError):
    """Tensor shapes do not compose"""


class ParameterError(RimcError, ValueError):
    """An argument is outside its valid range"""


class AdapterStateError(ParameterError):
    """Adapter used in the wrong lifecycle state (e.g. merged twice)"""


class DatasetError(RimcError, ValueError):
    """Dataset is empty, malformed or inconsistent"""


class ConfigError(RimcError, ValueError):
    """Experiment configuration is invalid"""


class NumericError(RimcError, ArithmeticError):
    """Base class for numeric failures (exit code 3)"""


class DegenerateNormError(NumericError):
    """A column norm needed for normalization is zero"""


class TrainingError(NumericError):
    """Teacher training or backprop calibration diverged"""


class CalibrationError(NumericError):
    """Layer calibration produced a non-finite loss"""

    def __init__(self, message: str, layer_index: int | None = None) -> None:
        super().__init__(message)
        self.layer_index = layer_index


class ModelFormatError(RimcError):
    """Model file is malformed"""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class ModelVersionError(ModelFormatError):
    """Model file was written by an unsupported format version"""
