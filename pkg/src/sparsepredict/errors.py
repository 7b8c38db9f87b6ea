"""Exception hierarchy. ``exit_code`` is what the CLI returns for each kind."""


class SparsePredictError(Exception):
    code = "error"
    exit_code = 2


class ArgumentError(SparsePredictError, ValueError):
    code = "argument_error"
    exit_code = 2


class ConfigError(ArgumentError):
    code = "config_error"
    exit_code = 2


class PreconditionError(ArgumentError):
    code = "precondition_error"
    exit_code = 2


class CapacityError(SparsePredictError):
    code = "capacity_error"
    exit_code = 3


class HorizonError(SparsePredictError):
    code = "horizon_error"
    exit_code = 1


class DegenerateProjectionError(SparsePredictError):
    code = "degenerate_projection"
    exit_code = 1


class SpectrumNotSparseError(SparsePredictError):
    """Two eigenfrequencies share a q-bit cell but differ at n bits."""

    code = "spectrum_not_sparse"
    exit_code = 2

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InternalConsistencyError(SparsePredictError):
    code = "internal_consistency"
    exit_code = 1
