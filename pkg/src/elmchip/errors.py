"""Exception hierarchy shared by all simulator modules."""


class ElmChipError(Exception):
    """Base class for all simulator errors."""


class InputDomainError(ElmChipError, ValueError):
    """An argument is outside the physical or digital domain of an operation."""


class ShapeError(ElmChipError, ValueError):
    """Vector/matrix dimensions do not match the chip or model geometry."""


class CapacityError(ShapeError):
    """A virtual shape exceeds what weight reuse can synthesize."""


class NoOscillationError(ElmChipError):
    """Neuron input current is outside the oscillation window."""


class ModelDomainError(ElmChipError):
    """A closed-form model was evaluated outside its validity region."""


class ConfigError(ElmChipError):
    """Invalid configuration (chip parameters, ridge spec, sweep spec, CLI)."""


class DataError(ElmChipError):
    """Dataset parsing or consistency failure."""


class SplitError(DataError):
    """A requested train/test split cannot be realized."""


class SingularMatrixError(ElmChipError):
    """A linear solve failed on a degenerate matrix."""


class EvaluationError(ElmChipError):
    """A prediction or decision was requested on a non-finite value."""


class NormalizationWarning(UserWarning):
    """Hidden-layer normalization was undefined; row passed through raw."""


class ClampWarning(UserWarning):
    """Input features outside [-1, 1] were clamped before code mapping."""
