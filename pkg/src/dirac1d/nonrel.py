"""Nonrelativistic reference: Schroedinger equation with V = g|x|.

Units are hbar = c = 1.  The bound states are shifted Airy functions,

    u(x) = N Ai((2 m g)**(1/3) (|x| - e/g)),

and matching at the origin puts -(2 m g)**(1/3) e / g on a zero of Ai'
(even states) or of Ai (odd states).  Energies are therefore

    e_n = rho_n (g**2 / 2m)**(1/3)

with rho_n the magnitude of the n-th zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridError
from .specfun import AiryKind, airy_ai, airy_zero

DEFAULT_POINTS = 4001
# tail beyond the turning point, in units of the Airy length (2 m g)**(-1/3);
# Ai(12) ~ 1e-11 relative to the peak
TAIL_AIRY_LENGTHS = 12.0


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1

    @classmethod
    def from_sign(cls, sign: float) -> "Parity":
        return cls.EVEN if sign > 0 else cls.ODD


@dataclass(frozen=True)
class ModelParams:
    """Mass ``m`` and coupling ``g`` of the potential g|x| (both > 0)."""

    m: float
    g: float

    def __post_init__(self):
        for name in ("m", "g"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive, got {value!r}")

    @classmethod
    def from_alpha(cls, alpha: float, g: float = 1.0) -> "ModelParams":
        if not (math.isfinite(alpha) and alpha > 0):
            raise DomainError("alpha must be positive")
        return cls(m=alpha * math.sqrt(g), g=g)

    @property
    def alpha(self) -> float:
        """Dimensionless coupling m / sqrt(g); large alpha is weak coupling."""
        return self.m / math.sqrt(self.g)

    @property
    def energy_scale(self) -> float:
        """(g**2 / 2m)**(1/3), the nonrelativistic energy unit."""
        return (self.g**2 / (2.0 * self.m)) ** (1.0 / 3.0)

    @property
    def airy_length(self) -> float:
        """(2 m g)**(-1/3), the decay length of the nonrelativistic states."""
        return (2.0 * self.m * self.g) ** (-1.0 / 3.0)


@dataclass(frozen=True)
class NonrelLevel:
    n: int
    parity: Parity
    zero: float
    epsilon_tilde: float
    epsilon: float


def nonrel_level(params: ModelParams, parity: Parity, n: int) -> NonrelLevel:
    kind = AiryKind.AI_PRIME if parity is Parity.EVEN else AiryKind.AI
    rho = -airy_zero(kind, n).value
    e = rho * params.energy_scale
    return NonrelLevel(n=n, parity=parity, zero=rho, epsilon_tilde=e, epsilon=e / params.m)


def nonrel_spectrum(params: ModelParams, n_max: int) -> list[NonrelLevel]:
    """Lowest ``n_max`` levels of each parity, sorted by energy."""
    if n_max < 1:
        raise DomainError("n_max must be a positive integer")
    levels = [nonrel_level(params, p, n) for n in range(1, n_max + 1) for p in Parity]
    return sorted(levels, key=lambda lv: lv.epsilon_tilde)


@dataclass(frozen=True)
class NonrelWavefunction:
    level: NonrelLevel
    x: np.ndarray
    u: np.ndarray
    norm: float


def default_grid(params: ModelParams, level: NonrelLevel, points: int = DEFAULT_POINTS) -> np.ndarray:
    """Symmetric grid on [-L, L] with x = 0 as a node.

    L = max(3 x_turn, x_turn + 12 Airy lengths), x_turn = e/g.
    """
    if points < 5 or points % 2 == 0:
        raise GridError("grid needs an odd number of points >= 5")
    x_turn = level.epsilon_tilde / params.g
    half = max(3.0 * x_turn, x_turn + TAIL_AIRY_LENGTHS * params.airy_length)
    xp = np.linspace(0.0, half, (points + 1) // 2)
    return np.concatenate([-xp[:0:-1], xp])


def _check_symmetric(x: np.ndarray) -> None:
    if x.ndim != 1 or x.size < 5:
        raise GridError("grid must be a 1-D array with at least 5 points")
    if not np.all(np.diff(x) > 0):
        raise GridError("grid must be strictly increasing")
    if not np.allclose(x, -x[::-1], rtol=0.0, atol=1e-12 * np.max(np.abs(x))):
        raise DomainError("grid must be symmetric about x = 0")


def trapezoid_with_check(y: np.ndarray, x: np.ndarray, rtol: float = 1e-8) -> float:
    """Composite trapezoid with a step-doubling (Richardson) convergence check."""
    fine = float(np.trapezoid(y, x))
    if x.size % 2 == 1 and x.size >= 9:
        coarse = float(np.trapezoid(y[::2], x[::2]))
        # trapezoid error scales as h**2, so fine - exact ~ (coarse - fine)/3
        if abs(coarse - fine) / 3.0 > rtol * abs(fine):
            raise GridError(
                f"quadrature not converged: step-doubling estimate {abs(coarse - fine) / 3:.2e}"
            )
    return fine


def nonrel_wavefunction(
    params: ModelParams, level: NonrelLevel, grid: np.ndarray | None = None
) -> NonrelWavefunction:
    """Normalized samples of N Ai((2mg)**(1/3)(|x| - e/g)); odd states flip sign for x < 0."""
    x = default_grid(params, level) if grid is None else np.asarray(grid, dtype=float)
    _check_symmetric(x)
    kappa = (2.0 * params.m * params.g) ** (1.0 / 3.0)
    u = airy_ai(kappa * (np.abs(x) - level.epsilon_tilde / params.g))
    if level.parity is Parity.ODD:
        u = np.sign(x) * u
    norm2 = trapezoid_with_check(u * u, x)
    u = u / math.sqrt(norm2)
    return NonrelWavefunction(level=level, x=x, u=u, norm=float(np.trapezoid(u * u, x)))
