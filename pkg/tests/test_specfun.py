import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite as nph
from scipy.integrate import solve_ivp

from dirac1d import specfun as sf
from dirac1d.errors import AccuracyLossError, DomainError, PoleError
from dirac1d.specfun import AiryKind

mpmath.mp.dps = 40


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# ---- gamma -----------------------------------------------------------------


def _lgamma_stirling(z, terms=12):
    # ln Gamma(z) asymptotic series, plenty accurate for z > 20
    bern = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
            43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730]
    s = (z - 0.5) * math.log(z) - z + 0.5 * math.log(2 * math.pi)
    for k, b in enumerate(bern[:terms], start=1):
        s += b / (2 * k * (2 * k - 1) * z ** (2 * k - 1))
    return s


def test_gamma_trivial():
    assert sf.gamma(1.0) == pytest.approx(1.0, rel=1e-15)
    assert sf.gamma(0.5) == pytest.approx(1.7724538509055160, rel=1e-15)


def test_gamma_recurrence_oracle():
    # Gamma(1.3) from Stirling at 41.3 stepped down, then up to 7.3
    g = math.exp(_lgamma_stirling(41.3))
    for k in range(40):
        g /= 1.3 + k
    expected = g * 1.3 * 2.3 * 3.3 * 4.3 * 5.3 * 6.3
    assert rel(sf.gamma(7.3), expected) < 1e-13


def test_gamma_range_and_reflection():
    for x in np.linspace(0.5, 30, 60):
        assert rel(sf.gamma(x), float(mpmath.gamma(x))) < 1e-13
    for x in (-0.5, -1.5, -2.7, 0.25):
        assert rel(sf.gamma(x), float(mpmath.gamma(x))) < 1e-13


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        sf.gamma(x)
    assert sf.rgamma(x) == 0.0


def test_sinpi_cospi_exact_zeros():
    assert sf.sinpi(3.0) == 0.0
    assert sf.cospi(2.5) == 0.0
    assert sf.sinpi(0.5) == 1.0


# ---- Kummer ----------------------------------------------------------------


def test_kummer_trivial():
    assert sf.kummer_m(0.3, 1.7, 0.0) == 1.0
    for z in (0.1, 3.0, 20.0, 45.0):
        assert rel(sf.kummer_m(1.25, 1.25, z), math.exp(z)) < 1e-14
        assert rel(sf.kummer_m(-1.0, 0.5, z), 1 - 2 * z) < 1e-14


@pytest.mark.parametrize("a,b,z", [(-2.3, 0.5, 4.0), (0.7, 1.5, 12.0), (-5.3, 0.5, 3.0), (3.1, 1.5, 60.0)])
def test_kummer_against_mpmath(a, b, z):
    ref = float(mpmath.hyp1f1(a, b, z))
    val = sf.kummer_m(a, b, z)
    # the alternating case loses digits to cancellation
    assert rel(val, ref) < 1e-9


def test_kummer_crossover_overlap():
    # the two regimes agree across the band around the crossover
    for z in np.linspace(30.0, 50.0, 9):
        series, _ = sf._kummer_series(0.8, 1.5, z)
        asym, ok = sf._kummer_asymptotic(0.8, 1.5, z)
        assert ok or z < sf.KUMMER_CROSSOVER
        assert rel(asym, series) < 1e-12


def test_kummer_domain():
    with pytest.raises(DomainError):
        sf.kummer_m(1.0, 0.5, -1.0)
    with pytest.raises(DomainError):
        sf.kummer_m(1.0, -2.0, 1.0)


# ---- Hermite ---------------------------------------------------------------


@pytest.mark.parametrize("xi", [0.0, 0.3, 2.0, 7.5])
def test_hermite_trivial(xi):
    assert sf.hermite_h(0.0, xi) == pytest.approx(1.0, rel=1e-14)
    assert sf.hermite_h(1.0, xi) == pytest.approx(2 * xi, rel=1e-14, abs=1e-15)


def test_hermite_ode_oracle():
    # w'' - 2 xi w' + 2 nu w = 0 started from the closed-form values at 0
    nu = 2.5
    w0 = 2**nu * math.sqrt(math.pi) / math.gamma((1 - nu) / 2)
    dw0 = -(2 ** (nu + 1)) * math.sqrt(math.pi) / math.gamma(-nu / 2)
    sol = solve_ivp(
        lambda x, y: [y[1], 2 * x * y[1] - 2 * nu * y[0]],
        (0.0, 1.3), [w0, dw0], method="DOP853", rtol=1e-13, atol=1e-14,
    )
    assert rel(sf.hermite_h(nu, 1.3), sol.y[0, -1]) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(-1.0, 60.0), st.floats(0.0, 12.0))
def test_hermite_against_mpmath(nu, xi):
    ref = mpmath.hermite(nu, xi)
    h = sf.hermite_eval(nu, xi)
    if ref == 0:
        return
    got = mpmath.mpf(h.mantissa) * mpmath.exp(h.log_scale)
    # a zero of H_nu nearby amplifies relative error; compare on the envelope
    env = mpmath.exp(xi * xi / 2) * 2**nu * mpmath.gamma((nu + 1) / 2) if nu > -1 else abs(ref)
    assert abs(got - ref) / max(abs(ref), 1e-8 * env) < 1e-8


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 60.0), st.floats(1e-3, 12.0))
def test_hermite_recurrence_identity(nu, xi):
    hm = sf.hermite_eval(nu - 1.0, xi)
    h0, h1 = sf.hermite_pair(nu, xi)
    # combine in log space relative to the largest term
    terms = [(h1.mantissa, h1.log_scale), (-2 * xi * h0.mantissa, h0.log_scale),
             (2 * nu * hm.mantissa, hm.log_scale)]
    top = max(ls + math.log(abs(mt)) for mt, ls in terms if mt != 0.0)
    vals = [mt * math.exp(ls - top) for mt, ls in terms]
    assert abs(sum(vals)) <= 1e-8 * max(abs(v) for v in vals)


@pytest.mark.parametrize("n", range(11))
def test_integer_collapse(n):
    coef = [0] * n + [1]
    for xi in (0.0, 0.4, 1.7, 3.3, 6.0):
        expected = nph.hermval(xi, coef)
        got = sf.hermite_h(float(n), xi)
        assert abs(got - expected) <= 1e-10 * max(abs(expected), 1.0)


def test_hermite_deriv_trivial():
    for xi in (0.0, 0.7, 3.0):
        assert sf.hermite_h_deriv(1.0, xi) == pytest.approx(2.0, rel=1e-14)
        assert sf.hermite_h_deriv(2.0, xi) == pytest.approx(8 * xi, rel=1e-13, abs=1e-14)
    assert sf.hermite_h_deriv(0.0, 1.0) == 0.0


def _central_diff(nu, xi, h=1e-5):
    return (sf.hermite_h(nu, xi + h) - sf.hermite_h(nu, xi - h)) / (2 * h)


def test_hermite_deriv_finite_difference_example():
    assert rel(sf.hermite_h_deriv(1.7, 0.9), _central_diff(1.7, 0.9)) < 1e-6


@settings(max_examples=80, deadline=None)
@given(st.floats(0.01, 60.0), st.floats(0.5, 12.0))
def test_hermite_deriv_finite_difference_box(nu, xi):
    d = sf.hermite_h_deriv(nu, xi)
    # Richardson-combined central differences keep the oracle's error far below 1e-6
    fd = (4 * _central_diff(nu, xi, 5e-6) - _central_diff(nu, xi, 1e-5)) / 3
    assert abs(d - fd) <= 1e-6 * max(abs(fd), abs(d))


def test_hermite_domain_errors():
    with pytest.raises(DomainError):
        sf.hermite_h(1.0, -0.1)
    with pytest.raises(DomainError):
        sf.hermite_h(-1.5, 1.0)
    with pytest.raises(DomainError):
        sf.hermite_h(float("nan"), 1.0)


def test_accuracy_loss_reported_not_silent():
    # the bare Kummer path at large xi cancels catastrophically
    with pytest.raises(AccuracyLossError) as info:
        sf.hermite_eval(10.3, 8.0, method="kummer")
    assert info.value.lost_digits > sf.KUMMER_HARD_LIMIT
    # the default path falls back and stays accurate
    h = sf.hermite_eval(10.3, 8.0)
    assert h.method == "recurrence"
    ref = mpmath.hermite(10.3, 8.0)
    assert rel(float(h.mantissa * mpmath.exp(h.log_scale)), float(ref)) < 1e-10


def test_paths_agree_where_both_valid():
    for nu, xi in [(3.3, 1.1), (10.7, 2.5), (0.2, 0.4)]:
        a = sf.hermite_eval(nu, xi, method="kummer")
        b = sf.hermite_eval(nu, xi, method="recurrence")
        assert rel(a.mantissa * math.exp(a.log_scale - b.log_scale), b.mantissa) < 1e-11


def test_large_order_log_split():
    h = sf.hermite_eval(299.0, 25.0)
    ref = mpmath.hermite(299, 25)
    assert abs(h.log_scale + math.log(abs(h.mantissa)) - float(mpmath.log(abs(ref)))) < 1e-10


# ---- Airy asymptotic form of H_nu ------------------------------------------


def test_airy_asymptotic_examples():
    assert rel(sf.hermite_airy_asymptotic(40.0, 4.0), sf.hermite_h(40.0, 4.0)) < 1e-2
    a = sf.hermite_airy_asymptotic_scaled(200.0, 10.0)
    b = sf.hermite_h_scaled(200.0, 10.0)
    assert rel(a, b) < 1e-3


def test_airy_asymptotic_turning_point_limit():
    nu = 30.0
    xi = math.sqrt(2 * nu + 1)
    at = sf.hermite_airy_asymptotic_scaled(nu, xi)
    near = sf.hermite_airy_asymptotic_scaled(nu, xi * (1 - 1e-5))
    assert math.isfinite(at)
    assert rel(at, near) < 1e-3
    with pytest.raises(DomainError):
        sf.hermite_airy_asymptotic_scaled(nu, xi * 1.01)


def test_airy_asymptotic_convergence():
    errors = []
    for nu in (20.0, 40.0, 80.0, 160.0):
        xi = 0.8 * math.sqrt(2 * nu + 1)
        errors.append(rel(sf.hermite_airy_asymptotic_scaled(nu, xi), sf.hermite_h_scaled(nu, xi)))
    assert all(b < a for a, b in zip(errors, errors[1:]))


# ---- Airy functions and zeros ---------------------------------------------


def test_airy_values():
    assert sf.airy_ai(0.0) == pytest.approx(3 ** (-2 / 3) / math.gamma(2 / 3), abs=1e-15)
    assert sf.airy_ai_prime(0.0) == pytest.approx(-(3 ** (-1 / 3)) / math.gamma(1 / 3), abs=1e-15)
    assert abs(sf.airy_ai(-2.3381)) < 1e-4
    for x in (-12.0, -5.3, 1.0, 7.0):
        assert abs(sf.airy_ai(x) - float(mpmath.airyai(x))) < 1e-12
        assert abs(sf.airy_ai_prime(x) - float(mpmath.airyai(x, derivative=1))) < 1e-12


def test_airy_domain():
    with pytest.raises(DomainError):
        sf.airy_ai(-50.5)
    with pytest.raises(DomainError):
        sf.airy_ai_prime(np.array([0.0, 51.0]))


@pytest.mark.parametrize("x", [-6.0, -1.2, 0.0, 2.5])
def test_airy_ode_second_order(x):
    res = []
    for h in (1e-3, 1e-4):
        d2 = (sf.airy_ai(x + h) - 2 * sf.airy_ai(x) + sf.airy_ai(x - h)) / h**2
        res.append(abs(d2 - x * sf.airy_ai(x)))
    # second order: a tenfold step cut buys ~100x until rounding takes over
    assert res[1] < 1e-6
    assert res[0] < 5e-6 * max(1.0, abs(x))


@pytest.mark.parametrize(
    "kind,n,value",
    [(AiryKind.AI, 1, -2.3381), (AiryKind.AI, 4, -6.7867), (AiryKind.AI_PRIME, 1, -1.0188)],
)
def test_airy_zero_examples(kind, n, value):
    assert abs(sf.airy_zero(kind, n).value - value) < 5e-5


@pytest.mark.parametrize("kind", list(AiryKind))
def test_airy_zero_table(kind):
    zeros = [sf.airy_zero(kind, n) for n in range(1, 21)]
    assert all(b.value < a.value for a, b in zip(zeros, zeros[1:]))
    assert all(z.residual < 1e-10 for z in zeros)
    ref = mpmath.airyaizero if kind is AiryKind.AI else (lambda k: mpmath.airyaizero(k, derivative=1))
    for z in zeros:
        assert abs(z.value - float(ref(z.n))) < 1e-11


def test_airy_zero_index_range():
    with pytest.raises(DomainError):
        sf.airy_zero(AiryKind.AI, 0)
    with pytest.raises(DomainError):
        sf.airy_zero("Ai", 21)
    assert sf.airy_zero("AiPrime", 2).kind is AiryKind.AI_PRIME
