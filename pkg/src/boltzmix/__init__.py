"""Collision cascades for inelastic kinetic models.

The package covers the full pipeline from model parameters to verified
equilibria: rotation-group sampling (`rotations`), the Fourier-side
collision kernel (`collision`), the spectral function S and its root alpha
(`spectral`), weighted branching trees and the limiting mixing weight M
(`cascade`), heavy-tailed initial and stationary laws (`stablelaws`), time
evolution by exact-in-law trees and by DSMC particles (`evolution`),
statistical diagnostics (`diagnostics`), release-gate checks (`verify`),
and a reproducible command-line runner (`cli`).

Numerical kernels run on a compiled core when the built extension is
importable and on a pure-python core otherwise; `backend_name()` reports
which one is active.
"""

from ._backend import backend_name
from .errors import (ArgumentError, BoltzmixError, ConfigError, DomainError,
                     NumericalError, ResourceError, StateError,
                     UnsupportedError)
from .rng import RandomStream

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BoltzmixError",
    "ConfigError",
    "DomainError",
    "NumericalError",
    "RandomStream",
    "ResourceError",
    "StateError",
    "UnsupportedError",
    "backend_name",
    "__version__",
]
