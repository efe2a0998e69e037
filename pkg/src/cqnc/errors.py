"""Exception and warning types raised across the package."""


class CQNCError(Exception):
    """Base class for all package errors."""


class ParameterError(CQNCError, ValueError):
    """Invalid or inconsistent physical parameters."""


class NonPositiveRate(ParameterError):
    pass


class MassMissing(ParameterError):
    """SI conversion requested but no effective mass was supplied."""


class UnknownPreset(ParameterError, KeyError):
    pass


class ConfigError(ParameterError):
    pass


class ZeroCoupling(ParameterError):
    """Force referral is undefined when the mechanics is not coupled (g = 0)."""


class DivisionSingularity(CQNCError, ArithmeticError):
    pass


class SingularSystem(CQNCError, ArithmeticError):
    pass


class NegativeDamping(RuntimeWarning):
    """Net optical damping is negative (heating regime)."""
