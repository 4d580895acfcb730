"""Exception hierarchy.

Three families map onto the CLI exit codes: configuration problems (2), data
problems (3) and numeric failures (4).
"""


class ModecastError(Exception):
    exit_code = 1


class ConfigError(ModecastError, ValueError):
    exit_code = 2


class DataError(ModecastError, ValueError):
    exit_code = 3


class NumericError(ModecastError, ArithmeticError):
    exit_code = 4


# ingest
class MissingColumn(DataError):
    pass


class UnparseableDate(DataError):
    pass


class DuplicateDate(DataError):
    pass


class EmptyAfterDrop(DataError):
    pass


class EmptySeries(DataError):
    pass


# series
class DegenerateRange(DataError):
    pass


class TooFewValues(DataError):
    pass


class SeriesTooShort(DataError):
    pass


class EmptyPartition(DataError):
    pass


# shared shape / length checks
class LengthMismatch(DataError):
    pass


class ShapeMismatch(DataError):
    pass


class Empty(DataError):
    pass


# vmd
class SignalTooShort(DataError):
    pass


class NonFiniteInput(DataError):
    pass


class ZeroSignal(DataError):
    pass


class NoConvergence(NumericError):
    pass


# neural
class NonFiniteActivation(NumericError):
    pass


# metrics
class ConstantActual(DataError):
    pass


# pipeline
class HorizonZero(ConfigError):
    pass


class IncompleteModel(DataError):
    """A model directory is missing files needed to forecast."""
