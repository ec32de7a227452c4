"""Exception types and CLI exit codes shared across the package."""

EXIT_OK = 0
EXIT_CONFIG_SYNTAX = 2
EXIT_CONFIG_INVARIANT = 3
EXIT_IO = 4
EXIT_NUMERIC = 5


class ParameterError(ValueError):
    """A physical or numerical parameter violates its contract."""


class DefinitenessError(ParameterError):
    """Transverse quadratic form of the medium is not positive definite."""


class GridError(ValueError):
    """Grid is degenerate or too small for the requested operation."""


class ProbeError(ValueError):
    """Probe point lies outside the sampled grid."""


class WindowError(ValueError):
    """Series is shorter than the averaging window."""


class DegenerateEnvelopeError(ValueError):
    """Envelope trend dropped to (numerical) zero; probe point is dark."""


class NormalizationError(ValueError):
    """Density or coefficient set is not normalized."""


class EmptyProductError(ValueError):
    """Density product has no common support."""


class AtomicDistributionError(ValueError):
    """Requested a density for a distribution with atoms (no pdf exists)."""


class BranchError(ParameterError):
    """Chosen sign branch yields a negative energy-scale factor."""


class NonDiagonalizableError(ParameterError):
    """Diagonalized oscillator constants left the valid regime."""

    def __init__(self, message, *, kappa=None, big_lambda=None):
        super().__init__(message)
        self.kappa = kappa
        self.big_lambda = big_lambda


class AccuracyError(RuntimeError):
    """Quadrature failed its self-convergence requirement."""


class RegimeError(ValueError):
    """Capacity formula was evaluated outside its valid parameter regime."""


class ConfigError(ValueError):
    """Configuration content is invalid (unknown key or invariant breach)."""


class ConfigSyntaxError(ConfigError):
    """Configuration file is not well-formed JSON."""


class PipelineStageError(RuntimeError):
    """Wraps a failure with the name of the pipeline stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
