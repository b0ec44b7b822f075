"""Finite-difference reference eigenvalues and Kato-Temple intervals.

The Dirichlet problem on [x_min, x_max] is discretized on a stretched grid
x = log(1 + e^u), uniform in u. That map is nearly x = e^u close to the
origin and x = u far away, so one grid resolves the barrier region at
x ~ lam^nu as well as the oscillator scale x ~ 1. A Liouville
transformation brings the mapped equation back to symmetric
Sturm-Liouville form

    -phi'' + (Q + g'^2 V) phi = E g'^2 phi,

where g'(u) is the logistic function and Q its Schwarzian-type remainder.
The three-point discretization gives a symmetric tridiagonal pencil whose
eigenvalues are located by bisection on the Sturm count, and a Romberg
table over grids that double in density removes the h^2, h^4, ... errors.
"""

import math
from dataclasses import dataclass, field, replace

import numba
import numpy as np

from .errors import ConvergenceError, ParameterError
from .model import derive_params, gk_energy
from .trialfn import trial_state_moments

# barrier exponent at x_min: the wavefunction is suppressed like exp(-40)
_BARRIER_EXPONENT = 40.0
# lam = 0: a wall at x_min lifts the levels by about x_min^(2 gamma - 2)
_FREE_SHIFT = 1e-15
# relative resolution of bisection on the Sturm count
_ROUNDOFF_FLOOR = 1e-14
_GRID_STEP = 0.02
_MIN_POINTS = 1000


@numba.njit(cache=True)
def _count_below(P, R, E):
    # Number of eigenvalues of T + diag(P) - E diag(R) below zero, where T is
    # the second-difference matrix, counted as sign changes of the
    # recurrence in difference form to avoid cancellation.
    n = P.shape[0]
    phi = 1.0
    D = 1.0
    cnt = 0
    for j in range(n):
        F = P[j] - E * R[j]
        D = D + F * phi
        new = phi + D
        if (new < 0.0) != (phi < 0.0):
            cnt += 1
        phi = new
        a = abs(phi)
        if a > 1e150:
            phi *= 1e-150
            D *= 1e-150
        elif a < 1e-150 and abs(D) < 1e-150:
            phi *= 1e150
            D *= 1e150
    return cnt


@numba.njit(cache=True)
def _bisect(P, R, i, lo, hi):
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _count_below(P, R, mid) > i:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SolverConfig:
    """Grid settings; fields left as None are chosen from the parameters.

    `tol` bounds the disagreement between the last two Romberg diagonals;
    larger disagreement raises ConvergenceError.
    """

    x_min: float = None
    x_max: float = None
    n_points: int = None
    refinement_levels: int = 4
    tol: float = 1e-8

    def validate(self):
        if self.x_min is not None and self.x_max is not None:
            if not 0 < self.x_min < self.x_max:
                raise ParameterError(
                    f"need 0 < x_min < x_max, got x_min={self.x_min}, x_max={self.x_max}"
                )
        elif self.x_min is not None and not self.x_min > 0:
            raise ParameterError(f"x_min must be positive, got {self.x_min}")
        if self.n_points is not None and self.n_points < 100:
            raise ParameterError(f"n_points must be >= 100, got {self.n_points}")
        if self.refinement_levels < 1:
            raise ParameterError("refinement_levels must be >= 1")
        if not self.tol > 0:
            raise ParameterError("tol must be positive")
        return self


@dataclass(frozen=True)
class EnergyEstimate:
    value: float
    error_estimate: float
    config_used: SolverConfig
    levels: tuple = field(default=(), repr=False)
    extrapolated: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class KTInterval:
    lower: float
    upper: float
    valid: bool

    def contains(self, e):
        return self.valid and self.lower <= e <= self.upper


def default_x_min(p):
    """Inner cutoff where the wavefunction is negligible.

    For lam > 0 the WKB exponent of the barrier, integral of sqrt(lam/x^alpha)
    from x to infinity, equals 2 nu sqrt(lam) x^(-1/(2 nu)); x_min is where
    it reaches 40. For lam = 0 a Dirichlet wall at x_min raises the levels
    by O(x_min^(2 gamma - 2)), and x_min makes that 1e-15.
    """
    d = derive_params(p)
    if p.lam > 0:
        return (2.0 * d.nu * math.sqrt(p.lam) / _BARRIER_EXPONENT) ** (2.0 * d.nu)
    return _FREE_SHIFT ** (1.0 / (2.0 * d.gamma - 2.0))


def default_x_max(p, i):
    return max(9.0, math.sqrt(gk_energy(i, derive_params(p).gamma)) + 7.0)


def _u_of_x(x):
    return math.log(math.expm1(x))


def resolve_config(p, i, cfg=None):
    """Fill in the automatic fields of `cfg` for state `i` of `p`."""
    cfg = (cfg or SolverConfig()).validate()
    x_min = cfg.x_min if cfg.x_min is not None else default_x_min(p)
    x_max = cfg.x_max if cfg.x_max is not None else default_x_max(p, i)
    n = cfg.n_points
    if n is None:
        n = max(_MIN_POINTS, int(math.ceil((_u_of_x(x_max) - _u_of_x(x_min)) / _GRID_STEP)))
    return replace(cfg, x_min=x_min, x_max=x_max, n_points=n).validate()


def _pencil(p, x_min, x_max, n):
    u0, u1 = _u_of_x(x_min), _u_of_x(x_max)
    du = (u1 - u0) / (n + 1)
    u = u0 + du * np.arange(1, n + 1)
    sig = 1.0 / (1.0 + np.exp(-u))
    x = np.logaddexp(0.0, u)
    q = (1.0 - sig) * (0.25 + 0.25 * sig)
    v = x * x + p.A / (x * x)
    if p.lam > 0:
        v = v + p.lam * x ** (-p.alpha)
    w = sig * sig
    return du * du * (q + w * v), du * du * w


def _eigenvalue(P, R, i, guess):
    hi = guess
    while _count_below(P, R, hi) <= i:
        hi *= 2.0
    return _bisect(P, R, i, 0.0, hi)


def solve_reference(p, i=0, cfg=None):
    """i-th Dirichlet eigenvalue of H, Romberg-extrapolated over grid levels.

    Level k uses (n_points + 1) * 2^k - 1 interior points, so every grid
    contains the previous one.
    """
    if i < 0 or int(i) != i:
        raise ParameterError(f"state index must be a nonnegative integer, got {i}")
    i = int(i)
    cfg = resolve_config(p, i, cfg)
    guess = gk_energy(i, derive_params(p).gamma) + 10.0
    raw = []
    for k in range(cfg.refinement_levels):
        n = (cfg.n_points + 1) * 2**k - 1
        P, R = _pencil(p, cfg.x_min, cfg.x_max, n)
        raw.append(_eigenvalue(P, R, i, guess))

    table = [raw]
    for m in range(1, len(raw)):
        prev = table[-1]
        f = 4.0**m
        table.append([prev[j] + (prev[j] - prev[j - 1]) / (f - 1.0) for j in range(1, len(prev))])
    diagonal = tuple(col[-1] for col in table)
    value = diagonal[-1]
    if len(diagonal) > 1:
        err = max(abs(diagonal[-1] - diagonal[-2]), _ROUNDOFF_FLOOR * abs(value))
    else:
        err = math.inf
    if len(diagonal) > 1 and err > cfg.tol:
        raise ConvergenceError(
            f"grid levels disagree by {err:.3e} (> tol {cfg.tol:.1e}) for state {i}"
        )
    return EnergyEstimate(value, err, cfg, tuple(raw), diagonal)


def kato_temple(eta, residual_sq, next_lower=None, prev_upper=None):
    """Two-sided bound on the eigenvalue nearest the trial expectation.

    `residual_sq` is the variance ||(H - eta) phi||^2 of the normalized
    trial state. With a lower estimate of the next level the lower bound is
    eta - residual_sq / (next_lower - eta); with an upper estimate of the
    previous level the upper bound is eta + residual_sq / (eta - prev_upper),
    and without one (ground state) it is the Rayleigh-Ritz value eta.
    Failed gap conditions return valid=False with NaN bounds.
    """
    nan = float("nan")
    if residual_sq < 0 or not math.isfinite(eta):
        return KTInterval(nan, nan, False)
    if next_lower is not None and not eta < next_lower:
        return KTInterval(nan, nan, False)
    if prev_upper is not None:
        if not eta > prev_upper:
            return KTInterval(nan, nan, False)
        if next_lower is not None and not residual_sq < (next_lower - eta) * (eta - prev_upper):
            return KTInterval(nan, nan, False)
    lower = -math.inf if next_lower is None else eta - residual_sq / (next_lower - eta)
    upper = eta if prev_upper is None else eta + residual_sq / (eta - prev_upper)
    return KTInterval(lower, upper, True)


@dataclass(frozen=True)
class StateBounds:
    interval: KTInterval
    moments: object
    next_lower: float
    prev_upper: float


def default_next_lower(p, i, margin=0.5):
    """Lower estimate for level i+1: the unperturbed level minus `margin`.

    The perturbation is nonnegative, so the unperturbed level itself is
    already a certified lower bound; the margin adds slack.
    """
    return gk_energy(i + 1, derive_params(p).gamma) - margin


def trial_bounds(p, i=0, tol=1e-10, margin=0.5):
    """Kato-Temple interval for level i built from the trial-state moments.

    For i > 0 the previous level's upper bound comes from the same
    construction applied recursively.
    """
    prev_upper = None
    if i > 0:
        prev = trial_bounds(p, i - 1, tol, margin)
        if not prev.interval.valid:
            nan = float("nan")
            return StateBounds(KTInterval(nan, nan, False), prev.moments, nan, nan)
        prev_upper = prev.interval.upper
    m = trial_state_moments(p, i, tol)
    nl = default_next_lower(p, i, margin)
    return StateBounds(kato_temple(m.eta, m.variance, nl, prev_upper), m, nl, prev_upper)
