"""Exception hierarchy shared by every module."""


class SliceError(Exception):
    """Base class for all library errors."""


class ConfigurationError(SliceError, ValueError):
    """Invalid construction parameters (dimension out of range, bad run config)."""


class UsageError(SliceError, ValueError):
    """Operands that cannot be combined, e.g. values from different contexts."""


class InvalidPointError(SliceError, ValueError):
    """A point or axis violates the slice-structure contract."""


class NotInvertibleError(SliceError, ArithmeticError):
    """A multivector (or a series' constant term) has no inverse."""


class ZeroSetError(NotInvertibleError):
    """The point lies (numerically) in the zero set of the symmetrization."""


class PreconditionError(SliceError, ValueError):
    """A verification routine was handed input outside its hypotheses."""


class NumericalFailure(SliceError, RuntimeError):
    """A numerical procedure produced an untrustworthy answer."""
