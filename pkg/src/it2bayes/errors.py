"""Exception hierarchy shared across the package."""


class IT2Error(Exception):
    """Base class for all package errors."""


class InputError(IT2Error, ValueError):
    """Invalid user-supplied data (malformed intervals, bad bounds, bad parameters)."""


class ComputationError(IT2Error, ArithmeticError):
    """A numerical step could not be carried out on otherwise valid inputs."""


class DegenerateInputsError(ComputationError):
    """Numerator and evidence are both identically zero at some membership level."""
