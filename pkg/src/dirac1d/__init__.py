"""Bound states of the 1-D Dirac equation with a linear scalar potential g|x|.

Modules:
    specfun   gamma, Kummer M, Hermite functions of real order, Airy functions and zeros
    nonrel    Schroedinger reference spectrum (Airy zeros)
    dirac     Hermite-function eigencondition, wavefunctions, diagnostics
    shooting  independent ODE shooting oracle
    cli       command-line front end (``dirac1d``)
"""

from .dirac import (
    SpectralLevel,
    SpinorSample,
    WavefunctionGrid,
    eigencondition,
    find_levels,
    nonrel_limit_report,
    theorem_b_check,
    to_tilde,
    wavefunction,
)
from .errors import (
    AccuracyLossError,
    ContinuityError,
    ConvergenceError,
    Dirac1DError,
    DomainError,
    GridError,
    PoleError,
    ScanExhaustedError,
)
from .nonrel import ModelParams, NonrelLevel, Parity, nonrel_spectrum, nonrel_wavefunction
from .shooting import ShootingConfig, match_determinant, oracle_spectrum

__version__ = "0.1.0"

__all__ = [
    "AccuracyLossError",
    "ContinuityError",
    "ConvergenceError",
    "Dirac1DError",
    "DomainError",
    "GridError",
    "ModelParams",
    "NonrelLevel",
    "Parity",
    "PoleError",
    "ScanExhaustedError",
    "ShootingConfig",
    "SpectralLevel",
    "SpinorSample",
    "WavefunctionGrid",
    "eigencondition",
    "find_levels",
    "match_determinant",
    "nonrel_limit_report",
    "nonrel_spectrum",
    "nonrel_wavefunction",
    "oracle_spectrum",
    "theorem_b_check",
    "to_tilde",
    "wavefunction",
]
