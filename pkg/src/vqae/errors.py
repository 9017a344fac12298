"""Exception hierarchy shared by all vqae modules."""


class VqaeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIndex(VqaeError):
    """Qubit or basis-state index out of range."""


class SameQubit(VqaeError):
    """Two-qubit gate given identical control and target."""


class WidthMismatch(VqaeError):
    """Operation on statevectors of different qubit counts."""


class InvalidWidth(VqaeError):
    """Requested register width is not supported."""


class InvalidProbability(VqaeError):
    """Probability argument outside [0, 1]."""


class InvalidTrials(VqaeError):
    """Bernoulli trial count must be positive."""


class DegenerateDistribution(VqaeError):
    """Unnormalized probability table sums to zero or is non-finite."""


class EncodingInfeasible(VqaeError):
    """f(x) leaves [0, 1] somewhere on the grid, so the state cannot be prepared."""


class InfeasibleRescaling(VqaeError):
    """Requested rescaling factor violates r * f(x) <= 1."""


class ParameterCountMismatch(VqaeError):
    """Parameter vector length does not match the ansatz."""


class IndexOutOfRange(VqaeError):
    """Parameter index outside the ansatz parameter count."""


class EmptyRecords(VqaeError):
    """Likelihood evaluation requires at least one sample record."""


class LooseEstimateZero(VqaeError):
    """Loose Monte Carlo estimate returned zero; rescaling factor undefined."""


class AnsatzInitMismatch(VqaeError):
    """Ansatz initial-state kind is incompatible with the estimation mode."""
