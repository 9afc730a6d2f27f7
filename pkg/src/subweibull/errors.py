"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class SubWeibullError(ValueError):
    """Base class for all errors raised by this package."""

    exit_code = 2


class DomainError(SubWeibullError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 2


class DegenerateSampleError(SubWeibullError):
    """The data carry no tail information (e.g. an all-zero sample)."""

    exit_code = 3


class ValidityError(SubWeibullError):
    """The inputs are well formed but outside the region where a bound holds."""

    exit_code = 4
