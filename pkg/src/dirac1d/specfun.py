"""Real-argument special functions for the linear-potential bound-state problem.

Everything here is a pure function of its arguments.  The Hermite function
of real order is the workhorse:

    H_nu(xi) = 2**nu sqrt(pi) [ M(-nu/2, 1/2, xi**2) / Gamma((1-nu)/2)
                                - 2 xi M((1-nu)/2, 3/2, xi**2) / Gamma(-nu/2) ]

Its two Kummer terms lose digits quickly once xi**2 grows, so every
evaluation carries a lost-digit estimate.  When the estimate exceeds
``KUMMER_DIGIT_BUDGET`` the value is recomputed by upward recurrence in the
order, seeded at two negative orders where H has a positive integral
representation (no cancellation at all).

Large magnitudes are handled in log-split form ``H = mantissa * exp(log_scale)``
so that orders up to a few hundred never overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import AccuracyLossError, ConvergenceError, DomainError, PoleError

SQRT_PI = math.sqrt(math.pi)
LN2 = math.log(2.0)

# Supported evaluation box for the Hermite function.
NU_MIN = -1.0
NU_MAX = 300.0
XI_MAX = 25.0

KUMMER_CROSSOVER = 40.0
# Kummer values losing more than this many digits are recomputed by recurrence.
KUMMER_DIGIT_BUDGET = 3.0
# Hard limit when the caller insists on the Kummer representation.
KUMMER_HARD_LIMIT = 10.0

AIRY_DOMAIN = 50.0
AIRY_ZERO_MAX_INDEX = 20

_SERIES_MAX_TERMS = 100_000
_TURNING_POINT_WINDOW = 1e-6


# --------------------------------------------------------------------------
# small helpers


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _check_finite(name: str, x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def sinpi(x: float) -> float:
    """sin(pi x) with exact zeros at integers and exact +-1 at half-integers."""
    r = math.fmod(x, 2.0)
    if r < 0.0:
        r += 2.0
    sign = 1.0
    if r >= 1.0:
        r -= 1.0
        sign = -1.0
    if r > 0.5:
        r = 1.0 - r
    if r == 0.0:
        return 0.0
    if r == 0.5:
        return sign
    return sign * math.sin(math.pi * r)


def cospi(x: float) -> float:
    """cos(pi x) with exact zeros at half-integers."""
    r = abs(math.fmod(x, 2.0))
    if r > 1.0:
        r = 2.0 - r
    return sinpi(0.5 - r)


# --------------------------------------------------------------------------
# gamma


def gamma(x: float) -> float:
    """Gamma function for real ``x``.

    Backed by :func:`math.gamma` (which applies the reflection formula below
    1/2 internally).  Raises :class:`PoleError` at non-positive integers.
    """
    _check_finite("x", x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at x={x!r}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """Reciprocal gamma, entire: returns 0.0 at the poles of gamma."""
    _check_finite("x", x)
    if _is_nonpositive_integer(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def half_order_gamma_ratio(nu: float) -> float:
    """Gamma(nu/2 + 1) / Gamma((nu + 1)/2) for nu > -1."""
    if nu <= -1.0:
        raise DomainError(f"ratio needs nu > -1, got {nu!r}")
    a = 0.5 * (nu + 1.0)
    b = 0.5 * nu + 1.0
    if b < 170.0:
        return math.gamma(b) / math.gamma(a)
    return special.poch(a, 0.5)


# --------------------------------------------------------------------------
# confluent hypergeometric M


def _kummer_series(a: float, b: float, z: float) -> tuple[float, float]:
    """Maclaurin series of M(a, b, z) with Neumaier-compensated summation.

    Returns ``(value, sum of |terms|)``; the ratio of the two measures the
    cancellation inside the series.
    """
    total = 1.0
    comp = 0.0
    magnitude = 1.0
    term = 1.0
    k = 0
    while k < _SERIES_MAX_TERMS:
        term *= (a + k) / (b + k) * z / (k + 1)
        k += 1
        if term == 0.0:
            return total + comp, magnitude
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        magnitude += abs(term)
        if not math.isfinite(magnitude):
            raise ConvergenceError(f"Kummer series overflowed at a={a}, b={b}, z={z}")
        # past the peak the terms shrink at least geometrically
        if k > a and k > z:
            s = abs(total + comp)
            if abs(term) <= 1e-17 * s or abs(term) <= 1e-32 * magnitude:
                return total + comp, magnitude
    raise ConvergenceError(f"Kummer series did not converge at a={a}, b={b}, z={z}")


def _asymptotic_sum(p: float, q: float, w: float) -> tuple[float, bool]:
    """Sum_k (p)_k (q)_k w**k / k!, truncated at the smallest term."""
    total = 1.0
    term = 1.0
    prev = math.inf
    for k in range(200):
        term *= (p + k) * (q + k) * w / (k + 1)
        if term == 0.0:
            return total, True
        if abs(term) > prev:
            return total, False
        total += term
        if abs(term) <= 1e-16 * abs(total):
            return total, True
        prev = abs(term)
    return total, False


def _kummer_asymptotic(a: float, b: float, z: float) -> tuple[float, bool]:
    ra = rgamma(a)
    rba = rgamma(b - a)
    ok = True
    value = 0.0
    if ra != 0.0:
        s1, ok1 = _asymptotic_sum(b - a, 1.0 - a, 1.0 / z)
        ok = ok and ok1
        value += ra * math.exp(z + (a - b) * math.log(z)) * s1
    if rba != 0.0:
        s2, ok2 = _asymptotic_sum(a, a - b + 1.0, -1.0 / z)
        ok = ok and ok2
        value += rba * cospi(a) * math.exp(-a * math.log(z)) * s2
    return math.gamma(b) * value, ok


def kummer_m(a: float, b: float, z: float) -> float:
    """Confluent hypergeometric function M(a, b, z) = 1F1(a; b; z) for z >= 0.

    Series below ``KUMMER_CROSSOVER``; above it the large-z expansion is used
    whenever it reaches full precision, otherwise the (always convergent)
    series takes over.
    """
    for name, v in (("a", a), ("b", b), ("z", z)):
        _check_finite(name, v)
    if _is_nonpositive_integer(b):
        raise PoleError(f"M(a, b, z) undefined for b={b!r}")
    if z < 0.0:
        raise DomainError(f"kummer_m supports z >= 0 only, got z={z!r}")
    if z == 0.0:
        return 1.0
    if z > KUMMER_CROSSOVER:
        try:
            value, ok = _kummer_asymptotic(a, b, z)
        except OverflowError:
            ok = False
        if ok:
            return value
    try:
        return _kummer_series(a, b, z)[0]
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"neither the series nor the asymptotic form of M({a}, {b}, {z}) converged"
        ) from exc


# --------------------------------------------------------------------------
# Hermite function of real order


@dataclass(frozen=True)
class HermiteValue:
    """H_nu(xi) in log-split form together with how it was obtained."""

    nu: float
    xi: float
    mantissa: float
    log_scale: float
    method: str
    lost_digits: float

    @property
    def value(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        out = self.mantissa * math.exp(self.log_scale)
        if math.isinf(out):
            raise OverflowError(f"H_{self.nu}({self.xi}) exceeds double range")
        return out

    @property
    def scaled(self) -> float:
        """exp(-xi**2/2) 2**-nu H_nu(xi) / Gamma((nu+1)/2), O(1) near turning points."""
        if self.nu <= -1.0:
            return 0.0
        shift = self.log_scale - 0.5 * self.xi**2 - self.nu * LN2 - math.lgamma(0.5 * (self.nu + 1.0))
        return self.mantissa * math.exp(shift)


def _check_hermite_args(nu: float, xi: float, nu_min: float = NU_MIN) -> None:
    _check_finite("nu", nu)
    _check_finite("xi", xi)
    if xi < 0.0:
        raise DomainError(f"xi must be >= 0, got {xi!r}")
    if nu < nu_min:
        raise DomainError(f"order nu={nu!r} below supported minimum {nu_min}")


def _hermite_kummer(nu: float, xi: float) -> HermiteValue:
    z = xi * xi
    if nu >= -0.5:
        # scaled form; reflection turns 1/Gamma((1-nu)/2) and 1/Gamma(-nu/2)
        # into cos/sin factors so nothing overflows at large order
        c = cospi(0.5 * nu)
        s = sinpi(0.5 * nu)
        m1, mag1 = _kummer_series(-0.5 * nu, 0.5, z) if c != 0.0 else (0.0, 0.0)
        if s != 0.0:
            m2, mag2 = _kummer_series(0.5 * (1.0 - nu), 1.5, z)
            w = 2.0 * xi * half_order_gamma_ratio(nu) * s
        else:
            m2, mag2, w = 0.0, 0.0, 0.0
        inner = c * m1 + w * m2
        bound = abs(c) * mag1 + abs(w) * mag2
        mantissa = inner / SQRT_PI
        log_scale = nu * LN2 + math.lgamma(0.5 * (nu + 1.0))
    else:
        g1 = rgamma(0.5 * (1.0 - nu))
        g2 = rgamma(-0.5 * nu)
        m1, mag1 = _kummer_series(-0.5 * nu, 0.5, z)
        m2, mag2 = _kummer_series(0.5 * (1.0 - nu), 1.5, z)
        inner = g1 * m1 - 2.0 * xi * g2 * m2
        bound = abs(g1) * mag1 + 2.0 * xi * abs(g2) * mag2
        mantissa = 2.0**nu * SQRT_PI * inner
        log_scale = 0.0
    lost = math.inf if inner == 0.0 else max(0.0, math.log10(bound / abs(inner)))
    return HermiteValue(nu, xi, mantissa, log_scale, "kummer", lost)


def _negative_order_seed(mu: float, xi: float) -> float:
    """H_mu(xi) for mu in [-3, -1] from the Laplace-type integral.

    H_mu(xi) = 1/Gamma(-mu) * int_0^inf t**(-mu-1) exp(-t**2 - 2 xi t) dt
    The integrand is positive, so the value carries no cancellation.
    """
    s = -mu
    upper = -xi + math.sqrt(xi * xi + 50.0)
    val, _ = integrate.quad(
        lambda t: math.exp(-t * (t + 2.0 * xi)),
        0.0,
        upper,
        weight="alg",
        wvar=(s - 1.0, 0.0),
        epsabs=0.0,
        epsrel=2e-14,
        limit=200,
    )
    return val / math.gamma(s)


_RESCALE_EXP = 400


def _hermite_recurrence_pair(nu: float, xi: float) -> tuple[HermiteValue, HermiteValue]:
    """H_nu and H_{nu+1} by upward recurrence H_{m+1} = 2 xi H_m - 2 m H_{m-1}.

    Upward is the stable direction for xi > 0: H dominates the second
    solution of the recurrence where the order is below xi**2/2, and the
    two are of equal size above it.
    """
    n = math.ceil(nu)
    nu0 = nu - n  # in (-1, 0]
    prev = _negative_order_seed(nu0 - 2.0, xi)
    cur = _negative_order_seed(nu0 - 1.0, xi)
    log_scale = 0.0
    # after j steps `cur` holds order nu0 - 1 + j; H_nu is reached at j = n + 1
    for j in range(n + 2):
        if j == n + 1:
            m0, l0 = cur, log_scale
        order = nu0 - 1.0 + j
        prev, cur = cur, 2.0 * xi * cur - 2.0 * order * prev
        if abs(cur) > 2.0**_RESCALE_EXP:
            prev = math.ldexp(prev, -_RESCALE_EXP)
            cur = math.ldexp(cur, -_RESCALE_EXP)
            log_scale += _RESCALE_EXP * LN2
    m1, l1 = cur, log_scale
    return (
        HermiteValue(nu, xi, m0, l0, "recurrence", 0.0),
        HermiteValue(nu + 1.0, xi, m1, l1, "recurrence", 0.0),
    )


_METHODS = ("auto", "kummer", "recurrence")
# beyond this xi**2 the Kummer terms always blow the digit budget
_KUMMER_SKIP_Z = 50.0


def _checked_kummer(nu: float, xi: float, method: str) -> HermiteValue | None:
    """Kummer evaluation, or None when ``auto`` should fall back to recurrence."""
    if method == "auto" and xi * xi > _KUMMER_SKIP_Z:
        return None
    try:
        h = _hermite_kummer(nu, xi)
    except ConvergenceError:
        if method == "kummer":
            raise
        return None
    if method == "kummer":
        if h.lost_digits > KUMMER_HARD_LIMIT:
            raise AccuracyLossError(
                f"Kummer representation of H_{nu}({xi}) lost {h.lost_digits:.1f} digits",
                h.lost_digits,
            )
        return h
    return h if h.lost_digits <= KUMMER_DIGIT_BUDGET else None


def _hermite_pair(nu: float, xi: float, method: str = "auto") -> tuple[HermiteValue, HermiteValue]:
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method != "recurrence":
        h0 = _checked_kummer(nu, xi, method)
        h1 = _checked_kummer(nu + 1.0, xi, method) if h0 is not None else None
        if h1 is not None:
            return h0, h1
    return _hermite_recurrence_pair(nu, xi)


def hermite_eval(nu: float, xi: float, method: str = "auto") -> HermiteValue:
    """H_nu(xi) with diagnostics; see :class:`HermiteValue`.

    ``method`` is ``"auto"`` (Kummer if within the digit budget, else
    recurrence), ``"kummer"`` (raise :class:`AccuracyLossError` beyond
    ``KUMMER_HARD_LIMIT`` lost digits) or ``"recurrence"``.
    Orders down to -2 are accepted here so the derivative identity can reach
    below the public minimum.
    """
    _check_hermite_args(nu, xi, nu_min=-2.0)
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method != "recurrence":
        h = _checked_kummer(nu, xi, method)
        if h is not None:
            return h
    return _hermite_recurrence_pair(nu, xi)[0]


def hermite_pair(nu: float, xi: float, method: str = "auto") -> tuple[HermiteValue, HermiteValue]:
    """(H_nu(xi), H_{nu+1}(xi)) sharing one evaluation path."""
    _check_hermite_args(nu, xi, nu_min=-2.0)
    return _hermite_pair(nu, xi, method)


def hermite_h(nu: float, xi: float) -> float:
    """Hermite function H_nu(xi) of real order nu >= -1 at xi >= 0.

    Reduces to the physicists' Hermite polynomial at non-negative integer nu.
    Raises ``OverflowError`` if the value itself exceeds double range; use
    :func:`hermite_eval` for the log-split form.
    """
    _check_hermite_args(nu, xi)
    return hermite_eval(nu, xi).value


def hermite_h_scaled(nu: float, xi: float) -> float:
    """exp(-xi**2/2) 2**-nu H_nu(xi) / Gamma((nu+1)/2)."""
    _check_hermite_args(nu, xi)
    return hermite_eval(nu, xi).scaled


def hermite_h_deriv(nu: float, xi: float) -> float:
    """d/dxi H_nu(xi) = 2 nu H_{nu-1}(xi)."""
    _check_hermite_args(nu, xi)
    if nu == 0.0:
        return 0.0
    return 2.0 * nu * hermite_eval(nu - 1.0, xi).value


def hermite_airy_asymptotic_scaled(nu: float, xi: float) -> float:
    """Large-order Airy form of exp(-xi**2/2) 2**-nu H_nu(xi) / Gamma((nu+1)/2).

    Equals (t/(z**2 - 1))**(1/4) Ai(t) with z = xi/sqrt(2 nu + 1) and
    t = -((3/4)(2 nu + 1)[arccos z - z sqrt(1 - z**2)])**(2/3); valid for z <= 1.
    """
    _check_hermite_args(nu, xi)
    if nu <= -0.5:
        raise DomainError("asymptotic form needs 2 nu + 1 > 0")
    q = 2.0 * nu + 1.0
    z = xi / math.sqrt(q)
    if z > 1.0:
        raise DomainError(f"asymptotic form holds for z <= 1, got z={z!r}")
    delta = 1.0 - z
    if delta < _TURNING_POINT_WINDOW:
        # arccos z - z sqrt(1 - z**2) ~ (2/3)(2 delta)**(3/2) near z = 1
        c = (0.5 * q) ** (2.0 / 3.0)
        t = -c * 2.0 * delta
        prefactor = c**0.25
    else:
        phase = math.acos(z) - z * math.sqrt(1.0 - z * z)
        t = -((0.75 * q * phase) ** (2.0 / 3.0))
        prefactor = (t / (z * z - 1.0)) ** 0.25
    return prefactor * airy_ai(t)


def hermite_airy_asymptotic(nu: float, xi: float) -> float:
    """Large-order Airy form of H_nu(xi) itself (see the scaled variant)."""
    scaled = hermite_airy_asymptotic_scaled(nu, xi)
    log_scale = 0.5 * xi * xi + nu * LN2 + math.lgamma(0.5 * (nu + 1.0))
    return scaled * math.exp(log_scale)


# --------------------------------------------------------------------------
# Airy functions and their zeros


def _check_airy_arg(x) -> None:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Airy argument must be finite")
    if arr.size and np.max(np.abs(arr)) > AIRY_DOMAIN:
        raise DomainError(f"Airy functions supported for |x| <= {AIRY_DOMAIN}")


def _airy(x, which: int):
    _check_airy_arg(x)
    out = special.airy(x)[which]
    return float(out) if np.ndim(out) == 0 else out


def airy_ai(x):
    """Airy function Ai(x) for |x| <= 50; scalars or arrays."""
    return _airy(x, 0)


def airy_ai_prime(x):
    """Derivative Ai'(x) for |x| <= 50; scalars or arrays."""
    return _airy(x, 1)


class AiryKind(str, enum.Enum):
    AI = "Ai"
    AI_PRIME = "AiPrime"


@dataclass(frozen=True)
class AiryZero:
    kind: AiryKind
    n: int
    value: float
    residual: float


def _airy_zero_seed(kind: AiryKind, n: int) -> float:
    if kind is AiryKind.AI:
        t = 3.0 * math.pi * (4 * n - 1) / 8.0
        return -(t ** (2.0 / 3.0)) * (1 + 5 / 48 * t**-2 - 5 / 36 * t**-4)
    t = 3.0 * math.pi * (4 * n - 3) / 8.0
    return -(t ** (2.0 / 3.0)) * (1 - 7 / 48 * t**-2 + 35 / 288 * t**-4)


def airy_zero(kind: AiryKind | str, n: int) -> AiryZero:
    """n-th zero of Ai or Ai' (negative), Newton-refined from the asymptotic seed."""
    kind = AiryKind(kind)
    if not isinstance(n, int) or n < 1 or n > AIRY_ZERO_MAX_INDEX:
        raise DomainError(f"zero index must be an integer in [1, {AIRY_ZERO_MAX_INDEX}], got {n!r}")
    x = _airy_zero_seed(kind, n)
    for _ in range(50):
        ai, aip, _, _ = special.airy(x)
        if kind is AiryKind.AI:
            step = ai / aip
        else:
            step = aip / (x * ai)  # Ai'' = x Ai
        x -= step
        if abs(step) <= 1e-15 * abs(x):
            break
    else:
        raise ConvergenceError(f"Newton iteration for {kind.value} zero {n} did not converge")
    residual = abs(airy_ai(x) if kind is AiryKind.AI else airy_ai_prime(x))
    if residual >= 1e-10:
        raise ConvergenceError(f"{kind.value} zero {n} residual {residual:.2e} too large")
    return AiryZero(kind, n, float(x), residual)
