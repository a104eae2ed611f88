"""Exception types shared across the package.

The command line maps these onto exit codes: configuration problems exit 2,
numerical failures exit 3, resource exhaustion exits 4. Everything derives
from BoltzmixError so callers can catch the whole family at once.
"""


class BoltzmixError(Exception):
    """Base class for all package-specific errors."""


class ArgumentError(BoltzmixError, ValueError):
    """An argument violates a documented precondition (bad index, zero
    vector, exponent out of range, ...)."""


class DomainError(BoltzmixError, ValueError):
    """A mathematical object is ill-defined for the given inputs, e.g. a
    cross-section that cannot be normalized."""


class NumericalError(BoltzmixError, ArithmeticError):
    """A numerical routine produced an unusable result (quadrature failure,
    root bracketing impossible). CLI exit code 3."""


class UnsupportedError(BoltzmixError, NotImplementedError):
    """A parameter combination that is valid mathematically but deliberately
    outside this implementation's scope."""


class StateError(BoltzmixError, RuntimeError):
    """An object was used before being put into the required state, e.g.
    drawing from an empty sample cache."""


class ResourceError(BoltzmixError, RuntimeError):
    """A configured budget (tree nodes, memory) would be exceeded. The
    message includes guidance on how to proceed. CLI exit code 4."""


class ConfigError(BoltzmixError, ValueError):
    """A run configuration failed validation. CLI exit code 2."""
