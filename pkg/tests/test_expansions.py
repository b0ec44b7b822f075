import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spikedosc import harrell, specfun
from spikedosc.errors import DivergenceError, ParameterError, RegimeError
from spikedosc.expansions import (
    EnergyExpansion,
    ExpansionTerm,
    evaluate_expansion,
    excited_bracket,
    excited_expansion,
    ground_expansion,
    laplace_1f1_product,
    rs_coefficients,
    rs_series,
)
from spikedosc.model import OscillatorParams, Regime, derive_params, gk_norm
from spikedosc.quadrature import integrate_semi_infinite

SQRT_PI = math.sqrt(math.pi)

# Leading excited-state coefficient by mpmath quadrature of the defining
# overlap integral (30 digits), keyed by (A, alpha, i).
EXCITED_ORACLE = {
    (0.0, 6.0, 1): 2.2882792905054394,
    (0.0, 6.0, 2): 2.8603491131317993,
    (0.75, 6.0, 1): 4.0,
    (0.75, 10.0, 2): 5.7358655698335,
    (0.0, 4.0, 1): 3.385137501286538,
    (2.0, 20.0, 3): 13.751675063898208,
}

# Second-order RS coefficient as a direct state sum -sum_n V_0n^2 / (4n),
# mpmath: 2000 explicit terms plus an Euler-Maclaurin tail, keyed by (gamma, alpha).
RS2_STATE_SUM = {
    (1.5, 1.0): (-0.0778909726728845, 1e-12),
    (2.0, 2.5): (-0.949572861774329, 1e-11),
    (1.5, 2.2): (-5.6101133231924, 1e-9),
}

# Same coefficient from the Euler integral representation of the 4F3,
# reduced to one mpmath quadrature against an incomplete beta function
# (30 digits), keyed by (gamma, alpha). This route never sums the series.
RS2_EULER_INTEGRAL = {
    (1.5, 1.0): -0.07789097267288453,
    (1.5, 2.2): -5.6101133232235924,
    (1.5, 2.3): -11.286827955078628,
    (1.5, 2.35): -17.625243814426634,
    (1.5, 2.4): -31.244841887705695,
    (1.5, 2.45): -74.63704017781987,
    (2.0, 2.5): -0.94957286177432888,
}


def P(A, alpha, lam=0.0):
    return OscillatorParams(A, alpha, lam)


# ---------------------------------------------------------------- containers

def test_term_value_and_sorting():
    t = ExpansionTerm(-4 / SQRT_PI, 1.0, 1)
    assert t.value(0.1) == pytest.approx(0.5196, abs=1e-4)
    assert t.value(0.1) > 0
    e = EnergyExpansion((ExpansionTerm(1.0, 2.0), ExpansionTerm(2.0, 1.0), ExpansionTerm(3.0, 1.0, 1),
                         ExpansionTerm(3.0, 0.0)), 3.0, 0, Regime.RS_FULL)
    assert [(t.lambda_power, t.log_power) for t in e.terms] == [(0.0, 0), (1.0, 1), (1.0, 0), (2.0, 0)]
    assert e.coefficient(1.0, 1) == 3.0
    assert e.coefficient(5.0) == 0.0


def test_evaluate_examples():
    const = EnergyExpansion((ExpansionTerm(3.0, 0.0),), 1.0, 0, Regime.RS_FULL)
    assert evaluate_expansion(const, 0.5) == 3.0
    e = EnergyExpansion((ExpansionTerm(3.0, 0.0), ExpansionTerm(4 / SQRT_PI, 0.5)), 1.0, 0, Regime.S_IN_0_HALF)
    assert evaluate_expansion(e, 0.01) == pytest.approx(3.2256758334, abs=1e-10)
    for bad in (0.0, -1e-3):
        with pytest.raises(ParameterError):
            evaluate_expansion(e, bad)


def test_string_forms():
    e = ground_expansion(P(0, 4))
    assert str(e) == "3 + 2.2567583·λ^0.5"
    assert e.error_order() == "O(λ)"
    assert ground_expansion(P(0, 3)).error_order() == "O(λ^2·log^2 λ)"


# ---------------------------------------------------------------- RS series

def test_rs_order_zero():
    e = rs_series(P(0.75, 2.5), 0)
    assert [(t.coeff, t.lambda_power) for t in e.terms] == [(4.0, 0.0)]
    assert e.regime is Regime.RS_FULL and e.error_lambda_power == 1.0


def test_rs_first_order_below_two():
    # alpha = 1 lies outside OscillatorParams, so go through the coefficients
    assert rs_coefficients(1.5, 1.0, 1)[1] == pytest.approx(1 / specfun.gamma(1.5), rel=1e-14)
    assert rs_coefficients(1.5, 1.0, 1)[1] == pytest.approx(1.1283791671, abs=1e-10)


def test_rs_validity_errors():
    with pytest.raises(ParameterError, match="alpha < 2\\*gamma"):
        rs_series(P(0, 3.5), 1)
    with pytest.raises(ParameterError, match="alpha < gamma\\+1"):
        rs_series(P(0, 2.75), 2)
    with pytest.raises(ParameterError):
        rs_series(P(0, 2.4), 3)


@given(st.floats(1.5, 4.0), st.floats(-1.0, 6.0))
def test_rs_second_order_gate_matches_4f3_gate(g, alpha):
    # the 4F3 converges iff sum(b) - sum(a) = gamma + 1 - alpha > 0
    if alpha >= 2 * g or abs(alpha - (g + 1)) < 1e-9:
        return
    try:
        rs_coefficients(g, alpha, 2)
        accepted = True
    except ParameterError:
        accepted = False
    assert accepted == (alpha < g + 1)


@pytest.mark.parametrize("key", sorted(RS2_STATE_SUM))
def test_rs_second_order_state_sum(key):
    expected, tol = RS2_STATE_SUM[key]
    g, alpha = key
    assert rs_coefficients(g, alpha, 2)[2] == pytest.approx(expected, rel=tol)


@pytest.mark.parametrize("key", sorted(RS2_EULER_INTEGRAL))
def test_rs_second_order_euler_integral(key):
    g, alpha = key
    assert rs_coefficients(g, alpha, 2)[2] == pytest.approx(RS2_EULER_INTEGRAL[key], rel=1e-10)


def test_rs_second_order_printed_form_drops_first_order_square():
    g, alpha = 1.5, 2.4
    full = rs_coefficients(g, alpha, 2)
    printed = rs_coefficients(g, alpha, 2, as_printed=True)
    assert full[2] == pytest.approx(printed[2] * full[1] ** 2, rel=1e-14)


def test_rs_matrix_element_ratio():
    # <psi_0|x^-alpha|psi_n> / (N_0 N_n) = (-1)^n Gamma(gamma - alpha/2)/2 * (alpha/2)_n/(gamma)_n
    g, alpha = 2.0, 2.5
    for n in (1, 2, 4):
        def f(x):
            return x ** (2 * g - 1 - alpha) * np.exp(-x * x) * specfun.hyp1f1_poly(n, g, x * x)
        quad = integrate_semi_infinite(f, tol=1e-300, rtol=1e-13).value
        closed = specfun.gamma(g - alpha / 2) / 2 * specfun.pochhammer(alpha / 2, n) / specfun.pochhammer(g, n)
        assert quad == pytest.approx(closed, rel=1e-11)


# ---------------------------------------------------------------- ground state

def test_ground_alpha4():
    e = ground_expansion(P(0, 4))
    assert e.regime is Regime.S_IN_0_HALF
    assert e.coefficient(0.5) == pytest.approx(2.2567583342, abs=1e-10)
    assert e.error_lambda_power == 1.0


def test_ground_generalized_alpha6():
    e = ground_expansion(P(0.75, 6))
    assert e.coefficient(0.0) == pytest.approx(4.0, abs=1e-14)
    assert e.coefficient(0.5) == pytest.approx(2.0, abs=1e-13)
    assert e.error_lambda_power == pytest.approx(1.0)


def test_ground_alpha_five_halves():
    e = ground_expansion(P(0, 2.5))
    assert e.regime is Regime.S_EQ_2
    assert e.coefficient(1.0) == pytest.approx(2 * specfun.gamma(0.25) / SQRT_PI, rel=1e-14)
    assert e.coefficient(1.0) == pytest.approx(4.0910626885, abs=1e-9)
    assert e.coefficient(2.0, 1) == pytest.approx(32 / SQRT_PI, rel=1e-14)
    assert e.coefficient(2.0, 1) == pytest.approx(18.0540666735, abs=1e-9)
    assert (e.error_lambda_power, e.error_log_power) == (2.0, 0)


def test_ground_alpha3():
    e = ground_expansion(P(0, 3))
    assert e.regime is Regime.S_EQ_1
    assert e.coefficient(1.0, 1) == pytest.approx(-4 / SQRT_PI, rel=1e-14)
    assert e.coefficient(1.0) == pytest.approx(-10 * specfun.EULER / SQRT_PI, rel=1e-13)
    assert e.coefficient(1.0) == pytest.approx(-3.2565906560, abs=1e-9)
    assert (e.error_lambda_power, e.error_log_power) == (2.0, 2)


@pytest.mark.parametrize("A,alpha,markers", [
    (0, 4, [(0, 0), "s"]),
    (0, 3.5, [(0, 0), "s", (1, 0)]),
    (0, 3, [(0, 0), (1, 1), (1, 0)]),
    (0, 2.75, [(0, 0), "s", (1, 0)]),
    (0, 2.5, [(0, 0), (1, 0), (2, 1)]),
    (0, 2.4, [(0, 0), (1, 0), (2, 0), "s"]),
    (0, 2.3, [(0, 0), (1, 0), (2, 0), (3, 0), "s"]),
    (2.0, 6.0, [(0, 0), "s", (1, 0)]),
])
def test_ground_term_structure(A, alpha, markers):
    e = ground_expansion(P(A, alpha))
    s = derive_params(P(A, alpha)).s
    want = sorted(((s, 0) if m == "s" else (float(m[0]), m[1]) for m in markers), key=lambda t: (t[0], -t[1]))
    assert [(t.lambda_power, t.log_power) for t in e.terms] == pytest.approx(want)
    assert e.terms[0].coeff == pytest.approx(2 * derive_params(P(A, alpha)).gamma)


@pytest.mark.parametrize("alpha", [2 + 1 / 3, 2.2, 2.1])
def test_ground_unsupported(alpha):
    with pytest.raises(RegimeError):
        ground_expansion(P(0, alpha))


@pytest.mark.parametrize("g", [1.5, 2.0, 2.5])
def test_boundary_coefficient_at_half(g):
    A = (g - 1) ** 2 - 0.25
    alpha = 2 + 4 * (g - 1)  # s = 1/2
    e = ground_expansion(P(A, alpha))
    assert e.coefficient(0.5) == pytest.approx(2 / specfun.gamma(g), rel=1e-12)


@pytest.mark.parametrize("A,alpha", [(0, 2.45), (0, 2.4), (0, 2.35), (0, 2.3), (0.2, 2.5), (0.5, 2.6)])
def test_linear_term_matches_rs_when_s_above_two(A, alpha):
    p = P(A, alpha)
    e = ground_expansion(p)
    assert e.regime in (Regime.S_IN_2_3, Regime.S_IN_3_4)
    assert e.coefficient(1.0) == pytest.approx(rs_series(p, 1).coefficient(1.0), abs=1e-10)


@pytest.mark.parametrize("label,alpha,expected", harrell.cases())
def test_harrell_reductions(label, alpha, expected):
    e = ground_expansion(P(0, alpha))
    for (power, log_power), c in expected.items():
        assert e.coefficient(power, log_power) == pytest.approx(c, rel=1e-12), (label, power)
    assert len(e.terms) - 1 == len(expected)


def test_regime_formula_quadratic_is_not_rs():
    # the regime formula's lam^2 coefficient is kept as printed; it differs from RS
    e = ground_expansion(P(0, 2.4))
    assert e.coefficient(2.0) == pytest.approx(-59.638022, rel=1e-7)
    assert rs_coefficients(1.5, 2.4, 2)[2] == pytest.approx(-31.244842, rel=1e-6)


# ---------------------------------------------------------------- excited states

def _overlap_closed_forms(g, i):
    f1 = specfun.hyp_pfq_unit([-i, 1 - g, 1], [g, 1 - g - i])
    f2 = specfun.hyp_pfq_unit([-i, 2 - g, 1], [g, 2 - g - i])
    up = specfun.pochhammer(g, i) / (2 * specfun.pochhammer(g + 1, i)) * f1
    same = specfun.pochhammer(g - 1, i) / (2 * specfun.pochhammer(g, i)) * f2
    return up, same


@pytest.mark.parametrize("g", [1.5, 2.2])
@pytest.mark.parametrize("i", [1, 2, 3])
def test_overlap_closed_forms(g, i):
    def f(x):
        z = x * x
        a = specfun.hyp1f1_poly(i, g, z)
        b = specfun.hyp1f1_poly(i, g + 1, z)
        return np.stack([x * np.exp(-z) * a * b, x * np.exp(-z) * a * a], axis=1)

    quad = integrate_semi_infinite(f, tol=1e-14).value
    up, same = _overlap_closed_forms(g, i)
    assert up == pytest.approx(quad[0], abs=1e-9)
    assert same == pytest.approx(quad[1], abs=1e-9)


def test_overlap_frozen_values():
    up, same = _overlap_closed_forms(1.5, 1)
    assert up == pytest.approx(0.233333333333333, abs=1e-13)
    assert same == pytest.approx(0.277777777777778, abs=1e-13)


def test_bracket_is_half_at_ground_state():
    for g in (1.5, 2.0, 3.3):
        assert excited_bracket(g, 0) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("A,alpha", [(0, 4), (0, 6), (0.75, 6), (2, 12), (0.3, 9)])
def test_excited_reduces_to_ground(A, alpha):
    p = P(A, alpha)
    s = derive_params(p).s
    ex = excited_expansion(p, 0)
    gr = ground_expansion(p)
    assert ex.coefficient(s) == pytest.approx(gr.coefficient(s), rel=1e-12)
    assert ex.coefficient(0.0) == gr.coefficient(0.0)


@pytest.mark.parametrize("key", sorted(EXCITED_ORACLE))
def test_excited_coefficient_oracle(key):
    A, alpha, i = key
    p = P(A, alpha)
    e = excited_expansion(p, i)
    s = derive_params(p).s
    assert e.coefficient(s) == pytest.approx(EXCITED_ORACLE[key], rel=1e-10)
    assert e.terms[0].coeff == pytest.approx(2 * (2 * i + derive_params(p).gamma))
    assert e.error_lambda_power == pytest.approx(2 * s)


def test_excited_coefficient_by_own_quadrature():
    p = P(0, 6)
    d = derive_params(p)
    g, nu, s, i = d.gamma, d.nu, d.s, 1

    def f(x):
        z = x * x
        a = specfun.hyp1f1_poly(i, g, z)
        b = specfun.hyp1f1_poly(i, g + 1, z)
        return x * np.exp(-z) * (2 * (g + i) / g * a * b - a * a)

    integral = integrate_semi_infinite(f, tol=1e-14).value
    coeff = 2 * gk_norm(i, g) ** 2 * nu ** (2 * s - 1) * specfun.gamma(1 - s) / specfun.gamma(s) * integral
    assert excited_expansion(p, i).coefficient(s) == pytest.approx(coeff, rel=1e-11)


@pytest.mark.parametrize("alpha", [3.0, 3.5, 2.5])
def test_excited_regime_error(alpha):
    with pytest.raises(RegimeError, match="0 < s <= 1/2"):
        excited_expansion(P(0, alpha), 1)


def test_excited_bad_index():
    with pytest.raises(ParameterError):
        excited_expansion(P(0, 4), -1)


# ---------------------------------------------------------------- Laplace product

def test_laplace_examples():
    assert laplace_1f1_product(2, 3, 0, 1, 0.5, 0, 1, 0.5) == pytest.approx(1 / 9, abs=1e-15)
    assert laplace_1f1_product(1, 1, -1, 1, 1, 0, 1, 0.2) == pytest.approx(0.0, abs=1e-15)
    assert laplace_1f1_product(1, 1, -2, 1.5, 1, -2, 2.5, 1) == pytest.approx(0.299047619047619, abs=1e-13)


def test_laplace_mpmath_value():
    # mpmath quadrature of the defining integral, 30 digits
    v = laplace_1f1_product(1.7, 2.0, 0.3, 1.2, 0.6, -0.4, 2.1, 1.2)
    assert v == pytest.approx(0.2359522218412192, rel=1e-11)


def test_laplace_swaps_factors_when_needed():
    # k/s = -0.2 outside with k2/s = 0.9 inside grows like 0.2/0.1; the
    # swapped order grows like 0.9 and converges
    a = laplace_1f1_product(1.5, 2.0, 0.4, 1.3, -0.4, 0.3, 1.7, 1.8)
    b = laplace_1f1_product(1.5, 2.0, 0.3, 1.7, 1.8, 0.4, 1.3, -0.4)
    assert a == pytest.approx(b, rel=1e-13)
    # mpmath quadrature of the defining integral
    assert a == pytest.approx(0.469658751508156356, rel=1e-12)


def test_laplace_divergence():
    with pytest.raises(DivergenceError):
        laplace_1f1_product(1, 1, 0.5, 1, 1.5, 0.5, 1, 1.2)


def test_laplace_bad_arguments():
    with pytest.raises(ParameterError):
        laplace_1f1_product(0, 1, 0, 1, 0, 0, 1, 0)
    with pytest.raises(ParameterError):
        laplace_1f1_product(1, 1, 0, -1, 0, 0, 1, 0)
