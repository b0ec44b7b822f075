"""Small-coupling energy expansions.

An expansion is a finite sum of terms ``c * lam**p * log(lam)**q`` plus an
order marker for the neglected remainder. Coefficients are evaluated once,
at construction, from Gamma functions and terminating hypergeometric
sums, so evaluating an expansion at many couplings is cheap.

Notation: gamma = 1 + sqrt(1+4A)/2, nu = 1/(alpha-2), s = 2 nu (gamma-1).
"""

import math
from dataclasses import dataclass

from . import specfun
from .errors import DivergenceError, ParameterError, RegimeError
from .model import DEFAULT_REGIME_TOL, Regime, classify_regime, derive_params

__all__ = [
    "ExpansionTerm",
    "EnergyExpansion",
    "rs_coefficients",
    "rs_series",
    "ground_expansion",
    "excited_expansion",
    "excited_bracket",
    "evaluate_expansion",
    "laplace_1f1_product",
]


@dataclass(frozen=True)
class ExpansionTerm:
    coeff: float
    lambda_power: float
    log_power: int = 0

    def value(self, lam):
        v = self.coeff * lam**self.lambda_power
        if self.log_power:
            v *= math.log(lam) ** self.log_power
        return v

    def monomial(self):
        parts = []
        if self.lambda_power == 1:
            parts.append("λ")
        elif self.lambda_power != 0:
            parts.append(f"λ^{self.lambda_power:.8g}")
        if self.log_power == 1:
            parts.append("log λ")
        elif self.log_power > 1:
            parts.append(f"log^{self.log_power} λ")
        return "·".join(parts)


def _sort_key(t):
    return (t.lambda_power, -t.log_power)


@dataclass(frozen=True)
class EnergyExpansion:
    """Terms in ascending power of lam plus the order of the remainder."""

    terms: tuple
    error_lambda_power: float
    error_log_power: int
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=_sort_key)))

    def evaluate(self, lam):
        return evaluate_expansion(self, lam)

    def coefficient(self, lambda_power, log_power=0, tol=1e-12):
        """Coefficient of the term lam^p log^q lam, or 0.0 if absent."""
        for t in self.terms:
            if abs(t.lambda_power - lambda_power) <= tol and t.log_power == log_power:
                return t.coeff
        return 0.0

    def error_order(self):
        mono = ExpansionTerm(1.0, self.error_lambda_power, self.error_log_power).monomial()
        return f"O({mono or '1'})"

    def __str__(self):
        out = ""
        for t in self.terms:
            mag = f"{abs(t.coeff):.8g}"
            body = mag if not t.monomial() else f"{mag}·{t.monomial()}"
            if not out:
                out = body if t.coeff >= 0 else f"-{body}"
            else:
                out += (" + " if t.coeff >= 0 else " - ") + body
        return out


def evaluate_expansion(e, lam):
    """Sum of the expansion's terms at coupling `lam` > 0."""
    lam = float(lam)
    if not lam > 0:
        raise ParameterError(f"expansions are evaluated at lambda > 0, got {lam}")
    return math.fsum(t.value(lam) for t in e.terms)


def _g(x):
    return specfun.gamma(x)


def rs_coefficients(gamma, alpha, order, as_printed=False):
    """Coefficients [E0, E1, E2][:order+1] of the Rayleigh-Schroedinger series.

    Works for any real alpha, including alpha <= 2 where the singular
    perturbation is mild. The first-order term exists only for
    alpha < 2 gamma and the second only for alpha < gamma + 1.

    The second-order sum over intermediate states n >= 1 of
    -|<psi_0|x^-alpha|psi_n>|^2 / (4n) collapses, with
    <psi_0|x^-alpha|psi_n> proportional to (alpha/2)_n / (gamma)_n, to

        -E1^2 alpha^2 / (16 gamma) 4F3(1, 1, 1+alpha/2, 1+alpha/2; 2, 2, gamma+1; 1),

    with E1 = Gamma(gamma - alpha/2) / Gamma(gamma). ``as_printed=True``
    drops the E1^2 factor, reproducing the commonly quoted form.
    """
    if order not in (0, 1, 2):
        raise ParameterError(f"order must be 0, 1 or 2, got {order}")
    g, a = float(gamma), float(alpha)
    out = [2.0 * g]
    if order >= 1:
        if not a < 2.0 * g:
            raise ParameterError(
                f"first-order term needs alpha < 2*gamma, got alpha={a:g} >= {2 * g:g}"
            )
        out.append(_g(g - 0.5 * a) / _g(g))
    if order == 2:
        if not a < g + 1.0:
            raise ParameterError(
                f"second-order term needs alpha < gamma+1, got alpha={a:g} >= {g + 1:g}"
            )
        f43 = specfun.hyp_pfq_unit([1.0, 1.0, 1.0 + 0.5 * a, 1.0 + 0.5 * a], [2.0, 2.0, g + 1.0])
        c2 = -(a * a) / (16.0 * g) * f43
        if not as_printed:
            c2 *= out[1] ** 2
        out.append(c2)
    return out


def rs_series(p, order, as_printed=False):
    """Rayleigh-Schroedinger ground-state series truncated at `order` (0, 1 or 2)."""
    coeffs = rs_coefficients(derive_params(p).gamma, p.alpha, order, as_printed)
    terms = tuple(ExpansionTerm(c, float(j)) for j, c in enumerate(coeffs))
    return EnergyExpansion(terms, float(order + 1), 0, Regime.RS_FULL)


def _coeff_power_s(g, nu, s):
    # lam^s coefficient shared by every non-boundary regime
    return 4.0 * (g - 1.0) * nu ** (2.0 * s) * _g(1.0 - s) / (_g(g) * _g(1.0 + s))


def _coeff_power_s_mid(g, nu, s):
    # same quantity written with Gamma(s) in place of s Gamma(s)
    return 2.0 * nu ** (2.0 * s) * _g(1.0 - s) / (nu * _g(g) * _g(s))


def _coeff_linear(g, nu, s):
    return 2.0 * nu * _g(g - 1.0 / (2.0 * nu)) / ((s - 1.0) * _g(g))


def _coeff_quadratic(g, nu, s):
    return -2.0 * (3.0 - 2.0 * s) * nu**3 * _g(g - 1.0 / nu) / (
        (2.0 - s) * (1.0 - s) ** 2 * _g(g)
    )


def _coeff_cubic(g, nu, s):
    return -2.0 * nu**5 * _g(g - 1.5 / nu) / (_g(g) * (1.0 - s) ** 2 * (2.0 - s))


def ground_expansion(p, tol=DEFAULT_REGIME_TOL):
    """Non-power ground-state expansion for the regime of (A, alpha).

    ==============  ===============================  ===================
    regime          terms beyond 2 gamma             remainder
    ==============  ===============================  ===================
    S_IN_0_HALF     lam^s                            lam^(2s)
    S_IN_HALF_1     lam^s, lam                       lam^(2s)
    S_EQ_1          lam log lam, lam                 lam^2 log^2 lam
    S_IN_1_2        lam^s, lam                       lam^2
    S_EQ_2          lam, lam^2 log lam               lam^2
    S_IN_2_3        lam^s, lam, lam^2                lam^3
    S_IN_3_4        lam^s, lam, lam^2, lam^3         lam^4
    ==============  ===============================  ===================
    """
    d = derive_params(p)
    regime = classify_regime(d, tol)
    g, nu, s = d.gamma, d.nu, d.s
    const = ExpansionTerm(2.0 * g, 0.0)
    gg = _g(g)

    if regime is Regime.S_IN_0_HALF:
        terms = [const, ExpansionTerm(_coeff_power_s(g, nu, s), s)]
        err = (2.0 * s, 0)
    elif regime is Regime.S_IN_HALF_1:
        terms = [
            const,
            ExpansionTerm(_coeff_power_s(g, nu, s), s),
            ExpansionTerm(_coeff_linear(g, nu, s), 1.0),
        ]
        err = (2.0 * s, 0)
    elif regime is Regime.S_EQ_1:
        scale = 1.0 / ((g - 1.0) * gg)
        linear = (-specfun.EULER * (1.0 + g) + 2.0 * math.log(2.0 * (g - 1.0))) * scale
        terms = [const, ExpansionTerm(-scale, 1.0, 1), ExpansionTerm(linear, 1.0)]
        err = (2.0, 2)
    elif regime is Regime.S_IN_1_2:
        terms = [
            const,
            ExpansionTerm(_coeff_power_s_mid(g, nu, s), s),
            ExpansionTerm(_coeff_linear(g, nu, s), 1.0),
        ]
        err = (2.0, 0)
    elif regime is Regime.S_EQ_2:
        terms = [
            const,
            ExpansionTerm(_g(1.0 / (2.0 * nu)) / gg, 1.0),
            ExpansionTerm(2.0 * nu**3 / gg, 2.0, 1),
        ]
        err = (2.0, 0)
    elif regime in (Regime.S_IN_2_3, Regime.S_IN_3_4):
        terms = [
            const,
            ExpansionTerm(_coeff_power_s(g, nu, s), s),
            ExpansionTerm(_coeff_linear(g, nu, s), 1.0),
            ExpansionTerm(_coeff_quadratic(g, nu, s), 2.0),
        ]
        err = (3.0, 0)
        if regime is Regime.S_IN_3_4:
            terms.append(ExpansionTerm(_coeff_cubic(g, nu, s), 3.0))
            err = (4.0, 0)
    else:
        raise RegimeError(
            f"no expansion is available for s = 2*nu*(gamma-1) = {s:.10g} "
            "(s = 3 and s >= 4 have no closed form)"
        )
    return EnergyExpansion(tuple(terms), err[0], err[1], regime)


def excited_bracket(g, i):
    """The combination F1 - (g-1)_i / (2 (g)_i) F2 of terminating 3F2(1) values.

    It equals 1/2 at i = 0, which makes the excited formula collapse onto
    the ground-state one.
    """
    f1 = specfun.hyp_pfq_unit([-i, 1.0 - g, 1.0], [g, 1.0 - g - i])
    f2 = specfun.hyp_pfq_unit([-i, 2.0 - g, 1.0], [g, 2.0 - g - i])
    return f1 - specfun.pochhammer(g - 1.0, i) / (2.0 * specfun.pochhammer(g, i)) * f2


def excited_expansion(p, i, tol=DEFAULT_REGIME_TOL):
    """Energy of the i-th state to order lam^s, valid for 0 < s <= 1/2 only."""
    if i < 0 or int(i) != i:
        raise ParameterError(f"state index must be a nonnegative integer, got {i}")
    i = int(i)
    d = derive_params(p)
    regime = classify_regime(d, tol)
    if regime is not Regime.S_IN_0_HALF:
        raise RegimeError(
            f"excited-state expansion exists only for 0 < s <= 1/2, "
            f"got s = {d.s:.10g} ({regime})"
        )
    g, nu, s = d.gamma, d.nu, d.s
    prefactor = (
        4.0 * specfun.pochhammer(g, i) / (math.factorial(i) * _g(g))
        * _g(1.0 - s) / (nu * _g(s))
        * nu ** (2.0 * s)
    )
    coeff = prefactor * excited_bracket(g, i)
    terms = (ExpansionTerm(2.0 * (2.0 * i + g), 0.0), ExpansionTerm(coeff, s))
    return EnergyExpansion(terms, 2.0 * s, 0, regime)


def _outer_ratio(k_s, a2, z2):
    # growth rate of the m-th outer term
    if specfun.is_nonpositive_integer(a2):
        return abs(k_s)
    return abs(k_s) * max(1.0, 1.0 / (1.0 - z2))


def _hyp2f1(a, b, c, z):
    if z == 1.0 and not specfun.is_nonpositive_integer(a):
        return specfun.hyp_pfq_unit([a, b], [c])
    if z < 0.0 and not specfun.is_nonpositive_integer(a):
        # Pfaff: the direct series alternates and cancels badly for large b
        return (1.0 - z) ** (-b) * specfun.hyp_pfq([c - a, b], [c], z / (z - 1.0))
    return specfun.hyp_pfq([a, b], [c], z)


def laplace_1f1_product(d, s, a, b, k, a2, b2, k2):
    """Laplace transform of a product of two confluent functions.

    Returns the integral over t in (0, inf) of
    ``t^(d-1) exp(-s t) 1F1(a; b; k t) 1F1(a2; b2; k2 t)``
    as ``s^-d Gamma(d) sum_m (a)_m (d)_m / ((b)_m m!) (k/s)^m
    2F1(a2, d+m; b2; k2/s)``.

    The integral is symmetric in the two factors, so when the sum over m
    does not converge in the given order the factors are swapped.
    """
    d, s = float(d), float(s)
    if not d > 0 or not s > 0:
        raise ParameterError(f"need d > 0 and s > 0, got d={d}, s={s}")
    for name, v in (("b", b), ("b2", b2)):
        if specfun.is_nonpositive_integer(float(v)):
            raise ParameterError(f"{name} = {v} is a nonpositive integer")

    def terminating(x):
        return specfun.is_nonpositive_integer(float(x))

    def usable(a_, k_, a2_, k2_):
        if not terminating(a2_) and abs(k2_ / s) >= 1.0:
            return False
        return terminating(a_) or _outer_ratio(k_ / s, a2_, k2_ / s) < 1.0

    order = (a, b, k, a2, b2, k2)
    if not usable(a, k, a2, k2):
        if usable(a2, k2, a, k):
            order = (a2, b2, k2, a, b, k)
        else:
            raise DivergenceError(
                "outer series diverges in both orderings: need |k/s| < 1 and "
                "|k/s| / (1 - k2/s) < 1 for one of the factors"
            )
    a, b, k, a2, b2, k2 = (float(v) for v in order)
    x, z2 = k / s, k2 / s

    term = 1.0
    total = _hyp2f1(a2, d, b2, z2)
    stop = int(-a) if terminating(a) else None
    streak = 0
    m = 0
    while True:
        if stop is not None and m >= stop:
            break
        term *= (a + m) * (d + m) / ((b + m) * (m + 1)) * x
        m += 1
        inc = term * _hyp2f1(a2, d + m, b2, z2)
        total += inc
        if stop is None:
            if abs(inc) <= 1e-15 * abs(total):
                streak += 1
                if streak == 3:
                    break
            else:
                streak = 0
            if m > 20_000:
                raise DivergenceError("outer series did not settle in 20000 terms")
    return s ** (-d) * _g(d) * total
