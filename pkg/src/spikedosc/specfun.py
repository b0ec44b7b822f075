"""Real-valued special functions used by the expansions and the trial state.

Everything here is written from scratch on top of :mod:`math`: Gamma and
its reciprocal, Pochhammer symbols, modified Bessel functions of the first
and second kind of arbitrary real order, and hypergeometric series
(confluent, general, and the ``p = q + 1`` case at unit argument).

All functions are pure and operate on Python floats.
"""

import math

import numpy as np

from .errors import ConvergenceError, DivergenceError, ParameterError, PoleError

#: Euler's constant.
EULER = 0.5772156649015329

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Taylor coefficients of 1/Gamma(1 + x) about x = 0.
_RGAMMA1_TAYLOR = (
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
    1.4123806553180319e-18,
    -2.29874568443537e-19,
)

_SERIES_RTOL = 1e-15
_SERIES_STREAK = 3
_MAX_TERMS = 100_000

# Bessel K dispatch thresholds.
_K_SMALL_Z = 2.0
_K_ASYMPTOTIC_Z = 30.0
_K_NEAR_INTEGER = 1e-3


def is_nonpositive_integer(x):
    """True for 0, -1, -2, ..."""
    return x <= 0 and x == math.floor(x)


_is_nonpos_int = is_nonpositive_integer


def _sinpi(x):
    """sin(pi*x) with exact zeros at the integers."""
    r = math.fmod(x, 2.0)
    if r < 0:
        r += 2.0
    sign = 1.0
    if r >= 1.0:
        r -= 1.0
        sign = -1.0
    if r > 0.5:
        r = 1.0 - r
    if r == 0.0:
        return 0.0
    return sign * math.sin(math.pi * r)


def _lanczos(x):
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    # split the power so large arguments do not overflow early
    h = t ** ((x + 0.5) / 2.0)
    return _SQRT_2PI * h * (h * math.exp(-t)) * acc


def gamma(x):
    """Gamma function of a real argument.

    Raises
    ------
    PoleError
        If `x` is zero or a negative integer.
    OverflowError
        If the result is not representable.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ParameterError(f"gamma requires a finite argument, got {x}")
    if _is_nonpos_int(x):
        raise PoleError(f"gamma has a pole at {x:g}")
    if x == math.floor(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    if x > 171.6244:
        raise OverflowError(f"gamma({x:g}) overflows")
    if x < 0.5:
        return math.pi / (_sinpi(x) * gamma(1.0 - x))
    return _lanczos(x)


def rgamma(x):
    """Reciprocal Gamma function, zero at the poles of Gamma."""
    x = float(x)
    if _is_nonpos_int(x):
        return 0.0
    try:
        return 1.0 / gamma(x)
    except OverflowError:
        return 0.0


def _digamma_int(m):
    """Digamma at a positive integer: -c + H_{m-1}."""
    acc = -EULER
    for j in range(1, m):
        acc += 1.0 / j
    return acc


def pochhammer(a, n):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.

    A nonpositive integer `a` = -m gives exactly zero for n > m because one
    of the factors is zero.
    """
    if n < 0 or int(n) != n:
        raise ParameterError(f"pochhammer needs a nonnegative integer n, got {n}")
    out = 1.0
    for k in range(int(n)):
        out *= a + k
    return out


def _rgamma1_parts(mu):
    """Temme's Gamma_1, Gamma_2 and 1/Gamma(1 +- mu) for |mu| <= 1/2."""
    m2 = mu * mu
    even = 0.0
    odd = 0.0
    for k in range(len(_RGAMMA1_TAYLOR) - 1, -1, -1):
        if k % 2 == 0:
            even = even * m2 + _RGAMMA1_TAYLOR[k]
        else:
            odd = odd * m2 + _RGAMMA1_TAYLOR[k]
    gam1 = -odd
    gam2 = even
    gampl = even + mu * odd
    gammi = even - mu * odd
    return gam1, gam2, gampl, gammi


def _sum_series(first, next_term, what):
    # Stops after three consecutive terms below 1e-15 of the running sum.
    total = first
    term = first
    streak = 0
    for k in range(1, _MAX_TERMS):
        term = next_term(k, term)
        total += term
        if abs(term) <= _SERIES_RTOL * abs(total):
            streak += 1
            if streak == _SERIES_STREAK:
                return total
        else:
            streak = 0
    raise ConvergenceError(f"{what}: series did not converge in {_MAX_TERMS} terms")


def bessel_i(order, z):
    """Modified Bessel function of the first kind from its ascending series.

    Parameters
    ----------
    order : float
        Real order.
    z : float
        Nonnegative argument.

    Raises
    ------
    OverflowError
        When ``exp(z)`` is not representable.
    """
    nu = float(order)
    z = float(z)
    if z < 0:
        raise ParameterError(f"bessel_i needs z >= 0, got {z}")
    if nu < 0 and nu == math.floor(nu):
        nu = -nu
    if z == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0:
            return 0.0
        raise OverflowError(f"bessel_i({order}, 0) is infinite")
    if z > 709.0:
        raise OverflowError(f"bessel_i({order}, {z}) overflows")
    half = 0.5 * z
    q = half * half
    first = rgamma(nu + 1.0) * half**nu
    if first == 0.0:
        # only reachable through underflow of half**nu
        return 0.0
    value = _sum_series(first, lambda k, t: t * q / (k * (nu + k)), "bessel_i")
    if not math.isfinite(value):
        raise OverflowError(f"bessel_i({order}, {z}) overflows")
    return value


def _k_fractional(nu, z):
    # I_{-nu} and I_nu difference; fine for orders away from the integers.
    return math.pi / (2.0 * _sinpi(nu)) * (bessel_i(-nu, z) - bessel_i(nu, z))


def _k_integer(n, z):
    half = 0.5 * z
    q = half * half
    log_half = math.log(half)
    if n == 0:
        h = 0.0
        total = 0.0
        term = 1.0
        streak = 0
        for r in range(1, _MAX_TERMS):
            term *= q / (r * r)
            h += 1.0 / r
            inc = term * h
            total += inc
            if abs(inc) <= _SERIES_RTOL * abs(total):
                streak += 1
                if streak == _SERIES_STREAK:
                    break
            else:
                streak = 0
        return -(EULER + log_half) * bessel_i(0, z) + total

    finite = 0.0
    for k in range(n):
        finite += math.factorial(n - k - 1) / math.factorial(k) * (-q) ** k
    finite *= 0.5 * half ** (-n)

    log_part = (-1) ** (n + 1) * log_half * bessel_i(n, z)

    term = 1.0 / math.factorial(n)
    psi_a = _digamma_int(1)
    psi_b = _digamma_int(n + 1)
    tail = (psi_a + psi_b) * term
    streak = 0
    for k in range(1, _MAX_TERMS):
        term *= q / (k * (n + k))
        psi_a += 1.0 / k
        psi_b += 1.0 / (n + k)
        inc = (psi_a + psi_b) * term
        tail += inc
        if abs(inc) <= _SERIES_RTOL * abs(tail):
            streak += 1
            if streak == _SERIES_STREAK:
                break
        else:
            streak = 0
    tail *= (-1) ** n * 0.5 * half**n
    return finite + log_part + tail


def _k_temme(mu, z):
    """(K_mu, K_{mu+1}) for |mu| <= 1/2 and z <= 2 by Temme's series."""
    half = 0.5 * z
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < 1e-15 else pimu / math.sin(pimu)
    d = -math.log(half)
    e = mu * d
    fact2 = 1.0 if abs(e) < 1e-15 else math.sinh(e) / e
    gam1, gam2, gampl, gammi = _rgamma1_parts(mu)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e / gampl
    qq = 0.5 / (e * gammi)
    c = 1.0
    dd = half * half
    total1 = p
    mu2 = mu * mu
    for i in range(1, _MAX_TERMS):
        ff = (i * ff + p + qq) / (i * i - mu2)
        c *= dd / i
        p /= i - mu
        qq /= i + mu
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if abs(delta) < 1e-16 * abs(total):
            break
    return total, total1 / half


def _k_steed(mu, z):
    """(K_mu, K_{mu+1}) for |mu| <= 1/2 and z > 2 by Steed's continued fraction."""
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAX_TERMS):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-16:
            break
    h = a1 * h
    kmu = math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) / s
    kmu1 = kmu * (mu + z + 0.5 - h) / z
    return kmu, kmu1


def _k_upward(mu, n, z, kmu, kmu1):
    # K_{v+1} = K_{v-1} + (2v/z) K_v is stable in the upward direction
    for i in range(1, n + 1):
        kmu, kmu1 = kmu1, (mu + i) * (2.0 / z) * kmu1 + kmu
    return kmu


def _k_asymptotic(nu, z):
    mu4 = 4.0 * nu * nu
    total = 1.0
    term = 1.0
    for k in range(1, 80):
        new = term * (mu4 - (2 * k - 1) ** 2) / (8.0 * k * z)
        if abs(new) > abs(term):
            break
        term = new
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * total


def bessel_k(order, z):
    """Modified Bessel function of the second kind for real order, z > 0.

    Small arguments (z <= 2) use the I-difference formula for fractional
    order, the logarithmic series for integer order and Temme's series for
    orders within 1e-3 of an integer. Moderate arguments use Steed's
    continued fraction with upward recurrence in the order, and z > 30 the
    large-argument asymptotic series.
    """
    z = float(z)
    nu = abs(float(order))
    if not z > 0:
        raise ParameterError(f"bessel_k needs z > 0, got {z}")
    if z > _K_ASYMPTOTIC_Z:
        return _k_asymptotic(nu, z)
    nl = int(nu + 0.5)
    mu = nu - nl
    if z > _K_SMALL_Z:
        kmu, kmu1 = _k_steed(mu, z)
        return _k_upward(mu, nl, z, kmu, kmu1)
    with np.errstate(over="raise"):
        if mu == 0.0:
            value = _k_integer(nl, z)
        elif abs(mu) < _K_NEAR_INTEGER:
            kmu, kmu1 = _k_temme(mu, z)
            value = _k_upward(mu, nl, z, kmu, kmu1)
        else:
            value = _k_fractional(nu, z)
    if not math.isfinite(value):
        raise OverflowError(f"bessel_k({order}, {z}) overflows")
    return value


def _terminating_index(alphas):
    m = None
    for a in alphas:
        if _is_nonpos_int(a):
            m = int(-a) if m is None else min(m, int(-a))
    return m


def _check_betas(betas, stop):
    for b in betas:
        if _is_nonpos_int(b) and (stop is None or -b < stop):
            raise ParameterError(f"lower parameter {b:g} is a nonpositive integer")


def _finite_sum(alphas, betas, z, stop):
    term = 1.0
    total = 1.0
    for k in range(stop):
        num = 1.0
        for a in alphas:
            num *= a + k
        den = float(k + 1)
        for b in betas:
            den *= b + k
        term *= num / den * z
        total += term
    return total


def hyp_pfq(alphas, betas, z):
    """Generalized hypergeometric series pFq(alphas; betas; z).

    Terminating series are summed exactly. Otherwise the series must
    converge: any z when p <= q, |z| < 1 when p = q + 1.
    """
    alphas = [float(a) for a in alphas]
    betas = [float(b) for b in betas]
    z = float(z)
    stop = _terminating_index(alphas)
    _check_betas(betas, stop)
    if stop is not None:
        return _finite_sum(alphas, betas, z, stop)
    if z == 0.0:
        return 1.0
    p, q = len(alphas), len(betas)
    if p > q + 1:
        raise DivergenceError(f"{p}F{q} diverges for z != 0")
    if p == q + 1:
        if z == 1.0:
            return hyp_pfq_unit(alphas, betas)
        if abs(z) >= 1.0:
            raise DivergenceError(f"{p}F{q} needs |z| < 1, got z = {z}")

    def step(k, t):
        num = 1.0
        for a in alphas:
            num *= a + k - 1
        den = float(k)
        for b in betas:
            den *= b + k - 1
        return t * num / den * z

    return _sum_series(1.0, step, f"{p}F{q}")


def hyp1f1(a, b, z):
    """Confluent hypergeometric function 1F1(a; b; z).

    Negative arguments of a nonterminating series go through Kummer's
    transformation so the summed series has positive terms.
    """
    a = float(a)
    b = float(b)
    z = float(z)
    stop = _terminating_index([a])
    _check_betas([b], stop)
    if stop is not None:
        return _finite_sum([a], [b], z, stop)
    if z < 0.0:
        return math.exp(z) * hyp1f1(b - a, b, -z)
    return hyp_pfq([a], [b], z)


def hyp1f1_poly(m, b, z):
    """Terminating 1F1(-m; b; z) evaluated on an array of arguments."""
    z = np.asarray(z, dtype=float)
    if _is_nonpos_int(b) and -b < m:
        raise ParameterError(f"lower parameter {b:g} is a nonpositive integer")
    coeffs = [1.0]
    for k in range(m):
        coeffs.append(coeffs[-1] * (-m + k) / ((b + k) * (k + 1)))
    out = np.full_like(z, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        out = out * z + c
    return out


def hyp_pfq_unit(alphas, betas, rtol=1e-10):
    """pFq with p = q + 1 evaluated at z = 1.

    A terminating series is summed exactly. A nonterminating one needs
    ``sum(betas) - sum(alphas) > 0``; its partial sums at K, 2K, 4K, ...
    terms are extrapolated, eliminating the tail powers K^-(sigma+m).

    Raises
    ------
    DivergenceError
        When the series is nonterminating and the parameter excess is <= 0.
    ConvergenceError
        When extrapolation fails to reach `rtol`.
    """
    alphas = [float(a) for a in alphas]
    betas = [float(b) for b in betas]
    if len(alphas) != len(betas) + 1:
        raise ParameterError(f"need p = q + 1, got p={len(alphas)}, q={len(betas)}")
    stop = _terminating_index(alphas)
    _check_betas(betas, stop)
    if stop is not None:
        return _finite_sum(alphas, betas, 1.0, stop)
    sigma = sum(betas) - sum(alphas)
    if sigma <= 0:
        raise DivergenceError(
            f"{len(alphas)}F{len(betas)}(1) diverges: parameter excess {sigma:g} <= 0"
        )

    k0, levels = 256, 8
    kmax = k0 * 2 ** (levels - 1)
    k = np.arange(kmax - 1, dtype=float)
    ratio = np.ones_like(k)
    for a in alphas:
        ratio *= a + k
    for b in betas:
        ratio /= b + k
    ratio /= k + 1.0
    terms = np.concatenate(([1.0], np.cumprod(ratio)))
    partial = np.cumsum(terms)

    table = [[float(partial[k0 * 2**j - 1])] for j in range(levels)]
    best = table[-1][0]
    for m in range(1, levels):
        r = 2.0 ** (sigma + m - 1)
        for j in range(m, levels):
            prev, cur = table[j - 1][m - 1], table[j][m - 1]
            table[j].append((r * cur - prev) / (r - 1.0))
        best = table[-1][m]
        err = abs(best - table[-1][m - 1])
        if err <= rtol * abs(best):
            return float(best)
    raise ConvergenceError(f"pFq(1) extrapolation stalled at {best!r}")
