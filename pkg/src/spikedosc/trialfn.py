"""Bessel-modified trial states and their moments.

The trial state for level i is ``phi = W(x) psi_i(x) / N`` where

    W(x)  = (2 nu^s / Gamma(s)) lam^(s/2) x^(1-gamma) K_s(xi),
    xi    = 2 nu sqrt(lam) x^(-1/(2 nu)),

solves ``W'' + (2 gamma - 1)/x W' = lam x^-alpha W`` with W -> 0 at the
origin and W -> 1 at infinity. Because of that equation,

    (H - E_i) (W psi_i) = 2 W' B psi_i,   B = (gamma - 1/2)/x - d/dx,

so the energy expectation and residual norm need only first derivatives,
and those are available in closed form.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ParameterError
from .model import derive_params, gk_energy, gk_norm
from .quadrature import integrate_semi_infinite

# exp(-700) is far below anything the moments can resolve
_XI_CUTOFF = 700.0


@dataclass(frozen=True)
class TrialMoments:
    """Quadrature moments of the normalized trial state.

    ``residual_sq`` is ||(H - E_i) phi||^2 measured from the unperturbed
    level E_i; ``variance`` is the spread ||(H - eta) phi||^2 about the
    trial expectation, which is what the two-sided bounds consume.
    """

    norm_sq: float
    eta: float
    residual_sq: float
    quad_error: float
    unperturbed_energy: float

    @property
    def variance(self):
        shift = self.eta - self.unperturbed_energy
        return max(self.residual_sq - shift * shift, 0.0)


def _check(p):
    if not p.lam > 0:
        raise ParameterError(f"the trial function needs lambda > 0, got {p.lam}")


def _bessel_k_array(order, xi):
    out = np.zeros_like(xi)
    for j, v in enumerate(xi.flat):
        if v < _XI_CUTOFF:
            out.flat[j] = specfun.bessel_k(order, v)
    return out


def _shape(x):
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ParameterError("x must be positive")
    return xa


def _consts(p):
    d = derive_params(p)
    pref = 2.0 * d.nu**d.s / specfun.gamma(d.s)
    return d, pref


def _xi(d, lam, x):
    return 2.0 * d.nu * math.sqrt(lam) * x ** (-1.0 / (2.0 * d.nu))


def _with_cutoff(xi, body):
    # body is only evaluated where the Bessel factor is representable
    out = np.zeros_like(xi)
    live = xi < _XI_CUTOFF
    if np.any(live):
        out[live] = body(live)
    return out


def w_alpha(x, p):
    """Cutoff factor W(x); vanishes at the origin and tends to 1 at infinity."""
    _check(p)
    xa = _shape(x)
    d, pref = _consts(p)
    xi = np.atleast_1d(_xi(d, p.lam, xa))
    xs = np.atleast_1d(xa)

    def body(m):
        return pref * p.lam ** (0.5 * d.s) * xs[m] ** (1.0 - d.gamma) * _bessel_k_array(d.s, xi[m])

    out = _with_cutoff(xi, body)
    return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)


def dw_alpha(x, p):
    """Derivative W'(x), positive on the whole half-line."""
    _check(p)
    xa = _shape(x)
    d, pref = _consts(p)
    xi = np.atleast_1d(_xi(d, p.lam, xa))
    xs = np.atleast_1d(xa)

    def body(m):
        return (
            pref
            * p.lam ** (0.5 * d.s + 0.5)
            * xs[m] ** (-1.0 / (2.0 * d.nu) - d.gamma)
            * _bessel_k_array(1.0 - d.s, xi[m])
        )

    out = _with_cutoff(xi, body)
    return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)


def transition_point(p):
    """Where the Bessel argument equals one: x* = (2 nu sqrt(lam))^(2 nu)."""
    d = derive_params(p)
    return (2.0 * d.nu * math.sqrt(p.lam)) ** (2.0 * d.nu)


def _psi_and_b_psi(i, g, x):
    """psi_i(x) and B psi_i(x) up to the common sign (-1)^i."""
    z = x * x
    base = gk_norm(i, g) * np.exp(-0.5 * z)
    f = specfun.hyp1f1_poly(i, g, z)
    f_up = specfun.hyp1f1_poly(i, g + 1.0, z)
    psi = base * x ** (g - 0.5) * f
    b_psi = base * x ** (g + 0.5) * (2.0 * (g + i) / g * f_up - f)
    return psi, b_psi


def trial_state_moments(p, i=0, tol=1e-10, budget=600_000):
    """Normalization, energy expectation and residual of the i-th trial state.

    The three integrals share one adaptive quadrature split at the Bessel
    transition point; `tol` is the relative accuracy target per integral.
    """
    _check(p)
    if i < 0 or int(i) != i:
        raise ParameterError(f"state index must be a nonnegative integer, got {i}")
    i = int(i)
    d, pref = _consts(p)
    g = d.gamma
    lam = p.lam
    e_i = gk_energy(i, g)
    w_scale = pref * lam ** (0.5 * d.s)
    dw_scale = w_scale * math.sqrt(lam)

    def integrand(x):
        xi = _xi(d, lam, x)
        out = np.zeros((x.size, 3))
        live = xi < _XI_CUTOFF
        if not np.any(live):
            return out
        xl, xil = x[live], xi[live]
        w = w_scale * xl ** (1.0 - g) * _bessel_k_array(d.s, xil)
        dw = dw_scale * xl ** (-1.0 / (2.0 * d.nu) - g) * _bessel_k_array(1.0 - d.s, xil)
        psi, b_psi = _psi_and_b_psi(i, g, xl)
        wpsi = w * psi
        dwb = dw * b_psi
        out[live, 0] = wpsi * wpsi
        out[live, 1] = wpsi * dwb
        out[live, 2] = dwb * dwb
        return out

    res = integrate_semi_infinite(
        integrand,
        split=transition_point(p),
        tol=1e-300,
        rtol=tol,
        budget=budget,
    )
    n2, cross, sq = res.value
    en2, ecross, esq = res.error_estimate
    eta = e_i + 2.0 * cross / n2
    residual_sq = 4.0 * sq / n2
    # first-order propagation through the ratios
    err_eta = 2.0 * (ecross + abs(cross) * en2 / n2) / n2
    err_res = 4.0 * (esq + sq * en2 / n2) / n2
    return TrialMoments(
        norm_sq=float(n2),
        eta=float(eta),
        residual_sq=float(residual_sq),
        quad_error=float(max(err_eta, err_res, en2)),
        unperturbed_energy=e_i,
    )
