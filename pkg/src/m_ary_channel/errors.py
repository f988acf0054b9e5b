"""Semantic exception hierarchy for the m-ary channel toolkit."""


class ChannelModelError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ChannelModelError, ValueError):
    """An argument violates its documented domain."""


class ConvergenceError(ChannelModelError, RuntimeError):
    """An iterative routine exhausted its budget before converging."""


class InfeasibleTarget(ChannelModelError):
    """The target probability is unattainable on the search bracket."""


class InfeasibleParameter(ChannelModelError):
    """The recovered parameter falls outside its physical domain."""


class DegenerateInvariant(ChannelModelError):
    """The solved invariant is zero, so the requested parameter is undetermined."""


class ThresholdTooHigh(ChannelModelError):
    """The well-posedness threshold exceeds the peak sensitivity of the channel."""
