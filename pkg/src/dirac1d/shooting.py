"""Independent eigenvalue oracle: shoot the first-order Dirac system directly.

No special functions are involved.  Each half line is integrated inward from
|x| = x_max, starting on the decaying eigen-direction of the frozen-coefficient
system, and the two boundary rays are matched at the origin through

    W(E) = u_L(0) v_R(0) - u_R(0) v_L(0)

normalized by the ray lengths.  W vanishes exactly at bound-state energies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, ScanExhaustedError
from .nonrel import ModelParams, Parity

RENORM_HIGH = 1e100
RENORM_LOW = 1e-100
MAX_ORACLE_LEVELS = 8


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ShootingConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    x_max: float | None = None
    extra_decay: float = 5.0  # beyond 3 x_turn, in units of 1/sqrt(g)
    segments: int = 2
    method: str = "DOP853"

    def start(self, params: ModelParams, E: float) -> float:
        if self.x_max is not None:
            return self.x_max
        x_turn = max(E - params.m, 0.0) / params.g
        return 3.0 * x_turn + self.extra_decay / math.sqrt(params.g)


@dataclass(frozen=True)
class BoundaryData:
    """Unit-norm ray (u, v) at 0+ (right) or 0- (left)."""

    side: Side
    E: float
    u: float
    v: float
    path: list = field(default_factory=list, repr=False, compare=False)


def _rhs_factory(params: ModelParams, E: float):
    m, g = params.m, params.g

    def rhs(x, y):
        w = m + g * abs(x)
        return [E * y[1] - w * y[0], w * y[1] - E * y[0]]

    return rhs


def initial_ray(params: ModelParams, E: float, x0: float) -> tuple[float, float]:
    """Decaying direction of the frozen-coefficient system at |x| = x0 (right side)."""
    w = params.m + params.g * abs(x0)
    if w <= E:
        raise DomainError("integration start lies inside the classically allowed region")
    r = E / (w + math.sqrt(w * w - E * E))
    return 1.0, r


def integrate_halfline(
    params: ModelParams,
    E: float,
    side: Side | str,
    config: ShootingConfig = ShootingConfig(),
    *,
    keep_path: bool = False,
) -> BoundaryData:
    """Integrate from +-x_max to the origin and return the unit-norm ray there.

    The running solution is rescaled between segments whenever its norm
    leaves [1e-100, 1e100]; only the direction of (u, v) matters.  With
    ``keep_path`` the dense samples of each segment are kept as
    ``(x, u, v)`` arrays, each segment on its own scale.
    """
    side = Side(side)
    if not E > 0:
        raise DomainError("shooting needs E > 0")
    x_max = config.start(params, E)
    u0, v0 = initial_ray(params, E, x_max)
    if side is Side.LEFT:
        # mirror image: decaying toward -infinity means u/v swapped
        u0, v0 = v0, u0
    x_from = x_max if side is Side.RIGHT else -x_max
    edges = np.linspace(x_from, 0.0, config.segments + 1)
    y = np.array([u0, v0])
    rhs = _rhs_factory(params, E)
    path = []
    for a, b in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(
            rhs,
            (a, b),
            y,
            method=config.method,
            rtol=config.rtol,
            atol=config.atol,
            dense_output=keep_path,
        )
        if not sol.success:
            raise ConvergenceError(f"half-line integration failed: {sol.message}")
        y = sol.y[:, -1]
        if keep_path:
            xs = np.linspace(a, b, 201)
            us, vs = sol.sol(xs)
            path.append((xs, us, vs))
        n = math.hypot(y[0], y[1])
        if not math.isfinite(n) or n == 0.0:
            raise ConvergenceError("half-line solution overflowed")
        if n > RENORM_HIGH or n < RENORM_LOW:
            y = y / n
    n = math.hypot(y[0], y[1])
    return BoundaryData(side, E, float(y[0] / n), float(y[1] / n), path)


def _determinant(left: BoundaryData, right: BoundaryData) -> float:
    return left.u * right.v - right.u * left.v


def match_determinant(params: ModelParams, E: float, config: ShootingConfig = ShootingConfig()) -> float:
    """Normalized matching determinant W(E); zero iff the half-line solutions join."""
    left = integrate_halfline(params, E, Side.LEFT, config)
    right = integrate_halfline(params, E, Side.RIGHT, config)
    return _determinant(left, right)


@dataclass(frozen=True)
class OracleLevel:
    E: float
    parity: Parity

    def nu(self, params: ModelParams) -> float:
        return self.E * self.E / (2.0 * params.g) - 1.0


def default_energy_step(params: ModelParams) -> float:
    """Scan step in E: a tenth of sqrt(g), shrunk like alpha**(-1/3) at weak coupling.

    Neighbouring levels (of either parity) sit roughly sqrt(g) alpha**(-1/3)/2
    apart, so this keeps several scan points between consecutive roots.
    """
    return 0.1 * math.sqrt(params.g) * min(1.0, params.alpha ** (-1.0 / 3.0))


def oracle_spectrum(
    params: ModelParams,
    count: int,
    config: ShootingConfig = ShootingConfig(),
    *,
    step: float | None = None,
    e_max: float | None = None,
) -> list[OracleLevel]:
    """Lowest ``count`` positive-energy levels (both parities together).

    E is scanned upward from m; every sign change of W is refined by
    Brent's method to |dE|/E < 1e-10.  Parity is the sign of u_L(0) u_R(0) at the
    root (the left ray equals +-the right one there).
    """
    if not 1 <= count <= MAX_ORACLE_LEVELS:
        raise DomainError(f"count must be in [1, {MAX_ORACLE_LEVELS}], got {count}")
    step = default_energy_step(params) if step is None else step
    e_max = params.m + 200.0 * math.sqrt(params.g) if e_max is None else e_max

    def w(E):
        return match_determinant(params, E, config)

    levels: list[OracleLevel] = []
    # E = m itself is a regular point of W for g > 0; start just above it
    a = params.m * (1.0 + 1e-12)
    fa = w(a)
    k = 0
    while len(levels) < count:
        k += 1
        b = params.m + k * step
        if b > e_max:
            raise ScanExhaustedError(f"found {len(levels)} of {count} levels below E={e_max:g}", levels)
        fb = w(b)
        if fa == 0.0 or (fa > 0) != (fb > 0):
            E = a if fa == 0.0 else brentq(w, a, b, xtol=1e-11 * b, rtol=4 * np.finfo(float).eps)
            left = integrate_halfline(params, E, Side.LEFT, config)
            right = integrate_halfline(params, E, Side.RIGHT, config)
            levels.append(OracleLevel(E, Parity.from_sign(left.u * right.u)))
        a, fa = b, fb
    return levels
