"""Exception hierarchy for stackcp."""


class StackCPError(Exception):
    """Base class for all errors raised by stackcp."""


class DimensionMismatch(StackCPError, ValueError):
    pass


class SingularGram(StackCPError, ValueError):
    """Gram matrix is rank deficient or too ill-conditioned to invert.

    Usually means two base learners produce (nearly) collinear predictions.
    Drop one of them or add a small ridge penalty upstream.
    """


class DenominatorNearZero(StackCPError, ArithmeticError):
    pass


class BadFoldCount(StackCPError, ValueError):
    pass


class IndexOutOfRange(StackCPError, IndexError):
    pass


class EmptyTrainingSet(StackCPError, ValueError):
    pass


class BadHyperparameter(StackCPError, ValueError):
    pass


class FoldTooSmall(StackCPError, ValueError):
    pass


class RankOutOfRange(StackCPError, ValueError):
    """The conformal rank ceil((1 - alpha)(n + 1)) exceeds n."""


class CalibrationTooSmall(StackCPError, ValueError):
    pass


class LengthMismatch(StackCPError, ValueError):
    pass


class MissingColumn(StackCPError, KeyError):
    pass


class EmptyAfterCleaning(StackCPError, ValueError):
    pass


class ConfigError(StackCPError, ValueError):
    pass
