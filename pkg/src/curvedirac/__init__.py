"""Dirac wave packets in flat and conformally flat 1+1 D spacetimes.

Modules
-------
geometry, closed_forms
    Christoffel symbols, vielbein, spin and spinor connections, Ricci scalar.
dirac, zitter, profiles
    Spinor packets, exact and FRW evolution, zitterbewegung analysis.
bogolyubov
    Scalar particle creation through Bogolyubov coefficients.
waveguide
    Binary waveguide arrays as a discretised Dirac equation.
io, cli
    Output formats, comparison harness and the command line tool.
estimators
    scikit-learn style wrappers.
"""
__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    CurveDiracError,
    DomainError,
    DomainTooSmallError,
    EdgeReflectionWarning,
    NumericalError,
    ResonanceError,
    UnreliableObservableWarning,
)
from .profiles import ConformalProfile  # noqa: E402

__all__ = [
    "__version__",
    "ConformalProfile",
    "CurveDiracError",
    "DomainError",
    "DomainTooSmallError",
    "EdgeReflectionWarning",
    "NumericalError",
    "ResonanceError",
    "UnreliableObservableWarning",
]
