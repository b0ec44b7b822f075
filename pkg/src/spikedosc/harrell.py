"""Closed-form ground-state coefficients of the plain spiked oscillator (A = 0).

These are the classical expansions for H = -d^2/dx^2 + x^2 + lam/x^alpha,
written directly in nu = 1/(alpha-2) with Gamma(3/2) = sqrt(pi)/2 folded in.
They are an independent route to the numbers the general expansions must
reproduce at gamma = 3/2.

Each function returns a dict mapping (lambda_power, log_power) to the
coefficient, constant term excluded.
"""

import math

from .specfun import EULER, gamma

_SQRT_PI = math.sqrt(math.pi)


def _leading(nu):
    return 4.0 * nu ** (2.0 * nu) * gamma(1.0 - nu) / (_SQRT_PI * gamma(1.0 + nu))


def alpha_at_least_4(alpha):
    nu = 1.0 / (alpha - 2.0)
    return {(nu, 0): _leading(nu)}


def alpha_between_3_and_4(alpha):
    nu = 1.0 / (alpha - 2.0)
    return {
        (nu, 0): _leading(nu),
        (1.0, 0): -4.0 * nu * gamma((3.0 - 1.0 / nu) / 2.0) / ((1.0 - nu) * _SQRT_PI),
    }


def alpha_equals_3():
    return {(1.0, 1): -4.0 / _SQRT_PI, (1.0, 0): -10.0 * EULER / _SQRT_PI}


def alpha_between_5_2_and_3(alpha):
    nu = 1.0 / (alpha - 2.0)
    return {
        (nu, 0): _leading(nu),
        (1.0, 0): 2.0 * gamma((3.0 - alpha) / 2.0) / _SQRT_PI,
    }


def alpha_equals_5_2(corrected=True):
    """The alpha = 5/2 expansion; ``corrected=False`` gives the older 16/sqrt(pi) log term."""
    log_coeff = (32.0 if corrected else 16.0) / _SQRT_PI
    return {(1.0, 0): 2.0 * gamma(0.25) / _SQRT_PI, (2.0, 1): log_coeff}


def alpha_between_7_3_and_5_2(alpha):
    nu = 1.0 / (alpha - 2.0)
    return {
        (nu, 0): _leading(nu),
        (1.0, 0): 4.0 * nu * gamma(1.5 - 0.5 / nu) / ((nu - 1.0) * _SQRT_PI),
        (2.0, 0): -4.0 * (3.0 - 2.0 * nu) * nu**3 * gamma(1.5 - 1.0 / nu)
        / ((2.0 - nu) * (1.0 - nu) ** 2 * _SQRT_PI),
    }


def cases():
    """(label, alpha, coefficients) triples covering every closed form above."""
    out = []
    for a in (4.0, 5.0, 6.0, 10.0):
        out.append(("alpha>=4", a, alpha_at_least_4(a)))
    for a in (3.25, 3.5, 3.75):
        out.append(("3<alpha<4", a, alpha_between_3_and_4(a)))
    out.append(("alpha=3", 3.0, alpha_equals_3()))
    for a in (2.6, 2.75, 2.9):
        out.append(("5/2<alpha<3", a, alpha_between_5_2_and_3(a)))
    out.append(("alpha=5/2", 2.5, alpha_equals_5_2()))
    for a in (2.35, 2.4, 2.45):
        out.append(("7/3<alpha<5/2", a, alpha_between_7_3_and_5_2(a)))
    return out
