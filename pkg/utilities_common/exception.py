"""
Module holding the exceptions shared by the diracutil packages
"""


class DiracRuntimeException(Exception):
    """Root exception used to report numerical laboratory errors
    """
    pass


class ConfigurationError(DiracRuntimeException, ValueError):
    """Invalid run configuration or command-line value"""
    pass


class BumpError(DiracRuntimeException, ValueError):
    """Unknown bump profile or normalization that did not converge"""
    pass


class SelectionError(DiracRuntimeException, RuntimeError):
    """Frequency constant search exceeded its ceiling"""

    def __init__(self, msg, worst_xi=None, ceiling=None):
        super(SelectionError, self).__init__(msg)
        self.worst_xi = worst_xi
        self.ceiling = ceiling


class ChirpError(DiracRuntimeException, ValueError):
    """Chirp parameters outside the supported family"""
    pass


class SamplingError(DiracRuntimeException, ValueError):
    """Sampling preconditions or memory budget violated"""

    def __init__(self, msg, required_dx=None, required_count=None):
        super(SamplingError, self).__init__(msg)
        self.required_dx = required_dx
        self.required_count = required_count


class ResolutionError(DiracRuntimeException, ValueError):
    """Frequency outside the phase-resolution window of a sampled signal"""
    pass


class GridMismatchError(DiracRuntimeException, ValueError):
    """Signals do not share one sampling grid"""
    pass


class BudgetError(DiracRuntimeException, ValueError):
    """Brute-force simplex quadrature over its support or point budget"""
    pass


class FitError(DiracRuntimeException, ValueError):
    """Empty fit window or estimator input"""
    pass


class IntegrationError(DiracRuntimeException, RuntimeError):
    """Conservation drift above the failure threshold"""

    def __init__(self, msg, drift=None):
        super(IntegrationError, self).__init__(msg)
        self.drift = drift


class SeriesRegimeError(DiracRuntimeException, ValueError):
    """Termwise summation requested outside the contraction regime"""
    pass


class TailBudgetError(DiracRuntimeException, RuntimeError):
    """Frequency window misses the tail budget of the scattering identity"""

    def __init__(self, msg, tail_fraction=None):
        super(TailBudgetError, self).__init__(msg)
        self.tail_fraction = tail_fraction


class EmitError(DiracRuntimeException, OSError):
    """Result file could not be written"""
    pass
