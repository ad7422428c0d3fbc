"""Bound states of the 1-D Dirac equation with a Lorentz-scalar potential g|x|.

With beta = sigma_x and alpha = sigma_y the components psi = (u, v) obey

    u' + (m + g|x|) u = E v,      -v' + (m + g|x|) v = E u.

In xi = sqrt(g) (m/g + |x|) the normalizable solutions are

    x > 0:  u = C   e^{-xi^2/2} H_{nu+1}(xi),   v = C (E/sqrt g) e^{-xi^2/2} H_nu(xi)
    x < 0:  u = C' (E/sqrt g) e^{-xi^2/2} H_nu(xi),   v = C' e^{-xi^2/2} H_{nu+1}(xi)

with E**2 = 2 (nu + 1) g and real, generally non-integer, order nu.
Continuity at x = 0 forces C' = +-C (the parity) and the eigenvalue condition

    H_{nu+1}(alpha) = +- (E / sqrt g) H_nu(alpha),      alpha = m / sqrt(g).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContinuityError, DomainError, ScanExhaustedError
from .nonrel import (
    DEFAULT_POINTS,
    ModelParams,
    Parity,
    nonrel_spectrum,
)
from .specfun import LN2, NU_MAX, XI_MAX, hermite_pair

NU_SCAN_STEP = 0.05
NU_GUARD = 0.5
ROOT_TOL = 1e-12
RESIDUAL_TOL = 1e-9
CONTINUITY_TOL = 1e-8
MAX_LEVELS = 16
TAIL_DECAY_LENGTHS = 12.0

NU_BOX_ENV = "DIRAC1D_NU_BOX"


def nu_box() -> float:
    """Upper end of the order scan; ``DIRAC1D_NU_BOX`` may raise (never lower) it."""
    raw = os.environ.get(NU_BOX_ENV)
    if raw is None or raw.strip() == "":
        return NU_MAX
    try:
        value = float(raw)
    except ValueError:
        raise DomainError(f"{NU_BOX_ENV} must be a number, got {raw!r}") from None
    return max(NU_MAX, value)


@dataclass(frozen=True)
class SpectralLevel:
    """One bound state; ``index`` counts from 0 within its parity."""

    index: int
    parity: Parity
    nu: float
    E: float
    epsilon: float
    residual: float


class SpinorSample(NamedTuple):
    x: float
    u: float
    v: float


def xi_of_x(params: ModelParams, x):
    """xi = sqrt(g) (m/g + |x|); works elementwise on arrays."""
    return math.sqrt(params.g) * (params.m / params.g + np.abs(x))


def energy_of_nu(params: ModelParams, nu: float, energy_sign: int = 1) -> float:
    return energy_sign * math.sqrt(2.0 * (nu + 1.0) * params.g)


def nu_of_energy(params: ModelParams, E: float) -> float:
    return E * E / (2.0 * params.g) - 1.0


def _condition_sign(parity: Parity, energy_sign: int) -> int:
    # C' = parity * C; continuity gives H_{nu+1} = parity * (E/sqrt g) H_nu
    return parity.sign * (1 if energy_sign > 0 else -1)


def _scan_start(alpha: float) -> float:
    return max(-1.0 + 1e-6, 0.5 * alpha * alpha - 1.0 - NU_GUARD)


def _scaled_condition(alpha: float, nu: float, sign: int) -> float:
    h0, h1 = hermite_pair(nu, alpha)
    log_s = -0.5 * alpha * alpha - nu * LN2 - math.lgamma(0.5 * (nu + 1.0))
    t1 = h1.mantissa * math.exp(h1.log_scale + log_s) if h1.mantissa else 0.0
    t0 = h0.mantissa * math.exp(h0.log_scale + log_s) if h0.mantissa else 0.0
    return t1 - sign * math.sqrt(2.0 * nu + 2.0) * t0


def eigencondition(params: ModelParams, parity: Parity, nu: float, energy_sign: int = 1) -> float:
    """Scaled F(nu) = H_{nu+1}(alpha) -+ sqrt(2 nu + 2) H_nu(alpha).

    Multiplied by exp(-alpha**2/2) 2**-nu / Gamma((nu+1)/2) > 0, which keeps
    the value O(1) without moving its roots.  Upper sign for even parity at
    positive energy.
    """
    alpha = params.alpha
    if alpha > XI_MAX:
        raise DomainError(f"alpha={alpha} outside supported range (<= {XI_MAX})")
    if not nu > max(-1.0, 0.5 * alpha * alpha - 1.0 - NU_GUARD - 1e-12):
        raise DomainError(f"nu={nu} below the admissible window for alpha={alpha}")
    return _scaled_condition(alpha, nu, _condition_sign(parity, energy_sign))


def _bisect(f, a: float, b: float, fa: float, tol: float) -> float:
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def find_levels(
    params: ModelParams,
    parity: Parity,
    count: int,
    *,
    step: float = NU_SCAN_STEP,
    energy_sign: int = 1,
) -> list[SpectralLevel]:
    """The ``count`` lowest bound states of one parity.

    Orders are scanned upward from alpha**2/2 - 1.5 on a uniform grid, each
    sign change is refined by bisection to |d nu| < 1e-12.  With
    ``energy_sign=-1`` the mirror (E <= -m) branch is returned.
    """
    if not 1 <= count <= MAX_LEVELS:
        raise DomainError(f"count must be in [1, {MAX_LEVELS}], got {count}")
    alpha = params.alpha
    if alpha > XI_MAX:
        raise DomainError(f"alpha={alpha} outside supported range (<= {XI_MAX})")
    sign = _condition_sign(parity, energy_sign)

    def f(nu):
        return _scaled_condition(alpha, nu, sign)

    start = _scan_start(alpha)
    top = nu_box() - 1.0  # the condition also needs order nu + 1
    levels: list[SpectralLevel] = []
    k = 0
    a = start
    fa = f(a)
    while len(levels) < count:
        k += 1
        b = start + k * step
        if b > top:
            raise ScanExhaustedError(
                f"found {len(levels)} of {count} {parity.value} levels below nu={top:g}",
                found=levels,
            )
        fb = f(b)
        if fa == 0.0 or (fa > 0) != (fb > 0):
            root = a if fa == 0.0 else _bisect(f, a, b, fa, ROOT_TOL)
            E = energy_of_nu(params, root, energy_sign)
            levels.append(
                SpectralLevel(
                    index=len(levels),
                    parity=parity,
                    nu=root,
                    E=E,
                    epsilon=E / params.m - 1.0,
                    residual=abs(f(root)),
                )
            )
        a, fa = b, fb
    return levels


# --------------------------------------------------------------------------
# wavefunctions


def turning_point(params: ModelParams, E: float) -> float:
    """Classical turning point (|E| - m)/g of the scalar potential."""
    return max(abs(E) - params.m, 0.0) / params.g


def default_grid(params: ModelParams, level: SpectralLevel, points: int = DEFAULT_POINTS) -> np.ndarray:
    """Symmetric grid, x = 0 a node, half-width max(3 x_turn, x_turn + 12 decay lengths).

    The decay length beyond the turning point is (2 |E| g)**(-1/3).
    """
    if points < 5 or points % 2 == 0:
        raise DomainError("grid needs an odd number of points >= 5")
    x_turn = turning_point(params, level.E)
    decay = (2.0 * abs(level.E) * params.g) ** (-1.0 / 3.0)
    half = max(3.0 * x_turn, x_turn + TAIL_DECAY_LENGTHS * decay)
    xp = np.linspace(0.0, half, (points + 1) // 2)
    return np.concatenate([-xp[:0:-1], xp])


def _radial_profiles(params: ModelParams, nu: float, xi: np.ndarray):
    """exp(-xi^2/2) H_nu and exp(-xi^2/2) H_{nu+1}, both times 2**-nu / Gamma((nu+1)/2)."""
    log_k = -nu * LN2 - math.lgamma(0.5 * (nu + 1.0))
    phi0 = np.empty_like(xi)
    phi1 = np.empty_like(xi)
    for i, z in enumerate(xi):
        h0, h1 = hermite_pair(nu, float(z))
        shift = log_k - 0.5 * z * z
        phi0[i] = h0.mantissa * math.exp(h0.log_scale + shift) if h0.mantissa else 0.0
        phi1[i] = h1.mantissa * math.exp(h1.log_scale + shift) if h1.mantissa else 0.0
    return phi0, phi1


def _rotate(u, v):
    s = 1.0 / math.sqrt(2.0)
    return (u + v) * s, (v - u) * s


def to_tilde(spinor: SpinorSample) -> SpinorSample:
    """Components in the beta = sigma_z representation (global phase i dropped)."""
    ut, vt = _rotate(spinor.u, spinor.v)
    return SpinorSample(spinor.x, ut, vt)


@dataclass(frozen=True)
class WavefunctionGrid:
    """Normalized spinor samples of one level on a grid.

    ``du``/``dv`` are exact derivatives obtained from the Hermite identities
    (not finite differences).
    """

    params: ModelParams
    level: SpectralLevel
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    norm: float
    continuity_gap: float

    @property
    def samples(self) -> list[SpinorSample]:
        return [SpinorSample(float(a), float(b), float(c)) for a, b, c in zip(self.x, self.u, self.v)]

    def tilde(self) -> tuple[np.ndarray, np.ndarray]:
        return _rotate(self.u, self.v)

    def tilde_derivatives(self) -> tuple[np.ndarray, np.ndarray]:
        return _rotate(self.du, self.dv)


def wavefunction(
    params: ModelParams,
    level: SpectralLevel,
    grid: np.ndarray | None = None,
    *,
    points: int = DEFAULT_POINTS,
) -> WavefunctionGrid:
    """Assemble and normalize (u, v) of ``level`` on ``grid``."""
    if not level.residual < RESIDUAL_TOL:
        raise DomainError(f"level residual {level.residual:.2e} is not a valid root")
    x = default_grid(params, level, points) if grid is None else np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DomainError("grid must be a 1-D array")

    nu, E, p = level.nu, level.E, level.parity.sign
    sg = math.sqrt(params.g)
    ratio = E / sg

    # evaluate once per distinct |x|, so mirrored points get identical values
    ax, inverse = np.unique(np.abs(x), return_inverse=True)
    xi = xi_of_x(params, ax)
    phi0, phi1 = _radial_profiles(params, nu, xi)
    # d/dxi of the two profiles, from the Hermite derivative and recurrence
    dphi0 = xi * phi0 - phi1
    dphi1 = -xi * phi1 + 2.0 * (nu + 1.0) * phi0
    phi0, phi1 = phi0[inverse], phi1[inverse]
    dphi0, dphi1 = dphi0[inverse], dphi1[inverse]

    right = x >= 0
    u = np.where(right, phi1, p * ratio * phi0)
    v = np.where(right, ratio * phi0, p * phi1)
    du = sg * np.where(right, dphi1, -p * ratio * dphi0)
    dv = sg * np.where(right, ratio * dphi0, -p * dphi1)

    norm2 = float(np.trapezoid(u * u + v * v, x))
    if not norm2 > 0:
        raise DomainError("wavefunction vanishes on the grid")
    c = 1.0 / math.sqrt(norm2)
    # keep the larger component of the right half positive at its peak
    if u[np.argmax(np.abs(u))] < 0:
        c = -c
    u, v, du, dv = u * c, v * c, du * c, dv * c

    phi0a, phi1a = _radial_profiles(params, nu, np.array([params.alpha]))
    gap_u = abs(phi1a[0] - p * ratio * phi0a[0])
    gap_v = abs(ratio * phi0a[0] - p * phi1a[0])
    amp = max(np.max(np.abs(u)), np.max(np.abs(v)))
    gap = abs(c) * max(gap_u, gap_v) / amp
    if gap >= CONTINUITY_TOL:
        raise ContinuityError(f"continuity gap {gap:.2e} at x=0: not an eigenstate")
    norm = float(np.trapezoid(u * u + v * v, x))
    return WavefunctionGrid(params, level, x, u, v, du, dv, norm, gap)


# --------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class TheoremBCheck:
    """Inner-product identities of the tilde equations and the energy bound."""

    cross_term: float
    mass_term_u: float
    mass_term_v: float
    norm_u: float
    norm_v: float
    identity_u_residual: float
    identity_v_residual: float
    E_bound_satisfied: bool


def theorem_b_check(wf: WavefunctionGrid) -> TheoremBCheck:
    """Evaluate int vt ut' dx, int ut (m+V) ut dx, ... by quadrature.

    For a real solution of the tilde equations
        int vt ut' + int ut (m+V) ut = E int ut**2
        int vt ut' - int vt (m+V) vt = E int vt**2
    and, for E > 0, the cross term is non-negative, which forces E >= m.
    """
    params, E = wf.params, wf.level.E
    x = wf.x
    ut, vt = wf.tilde()
    dut, _ = wf.tilde_derivatives()
    mass = params.m + params.g * np.abs(x)
    cross = float(np.trapezoid(vt * dut, x))
    mu = float(np.trapezoid(ut * mass * ut, x))
    mv = float(np.trapezoid(vt * mass * vt, x))
    nu_ = float(np.trapezoid(ut * ut, x))
    nv_ = float(np.trapezoid(vt * vt, x))

    def rel(lhs, rhs):
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)

    r_u = rel(cross + mu, E * nu_)
    r_v = rel(cross - mv, E * nv_)
    if E > 0:
        ok = cross >= -1e-6 and E >= params.m * (1.0 - 1e-9)
    else:
        ok = cross <= 1e-6 and E <= -params.m * (1.0 - 1e-9)
    return TheoremBCheck(cross, mu, mv, nu_, nv_, r_u, r_v, ok)


@dataclass(frozen=True)
class LimitRow:
    index: int
    parity: Parity
    epsilon_rel: float
    epsilon_nonrel: float

    @property
    def deviation(self) -> float:
        """Relative deviation (eps_rel - eps_nr) / eps_nr."""
        return (self.epsilon_rel - self.epsilon_nonrel) / self.epsilon_nonrel


def nonrel_limit_report(params: ModelParams, count: int) -> list[LimitRow]:
    """Pair the lowest ``count`` levels of each parity with their Airy counterparts."""
    if params.alpha < 2.0:
        raise DomainError("the weak-coupling comparison needs alpha >= 2")
    nonrel = nonrel_spectrum(params, count)
    rows = []
    for parity in Parity:
        nr = [lv for lv in nonrel if lv.parity is parity]
        for lv, ref in zip(find_levels(params, parity, count), nr):
            rows.append(LimitRow(lv.index, parity, lv.epsilon, ref.epsilon))
    return rows
