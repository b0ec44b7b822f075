"""Hamiltonian parameters, derived exponents, regime classification and the
exactly solvable Gol'dman-Krivchenkov basis.

The Hamiltonian is ``H = -d^2/dx^2 + x^2 + A/x^2 + lam/x^alpha`` on the
half-line with a Dirichlet condition at the origin.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ParameterError

DEFAULT_REGIME_TOL = 1e-9


@dataclass(frozen=True)
class OscillatorParams:
    """The triple (A, alpha, lam) defining the Hamiltonian."""

    A: float
    alpha: float
    lam: float = 0.0

    def __post_init__(self):
        for name in ("A", "alpha", "lam"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParameterError(f"{name} must be a finite real, got {v!r}")
        if self.A < 0:
            raise ParameterError(f"A must be >= 0, got {self.A}")
        if not self.alpha > 2:
            raise ParameterError(f"alpha must be > 2, got {self.alpha}")
        if self.lam < 0:
            raise ParameterError(f"lambda must be >= 0, got {self.lam}")

    def with_lambda(self, lam):
        return OscillatorParams(self.A, self.alpha, lam)


@dataclass(frozen=True)
class DerivedParams:
    """gamma = 1 + sqrt(1+4A)/2, nu = 1/(alpha-2) and s = 2 nu (gamma-1)."""

    gamma: float
    nu: float
    s: float
    alpha: float


class Regime(enum.Enum):
    RS_FULL = "RS_FULL"
    S_IN_0_HALF = "S_IN_0_HALF"
    S_IN_HALF_1 = "S_IN_HALF_1"
    S_EQ_1 = "S_EQ_1"
    S_IN_1_2 = "S_IN_1_2"
    S_EQ_2 = "S_EQ_2"
    S_IN_2_3 = "S_IN_2_3"
    S_IN_3_4 = "S_IN_3_4"
    UNSUPPORTED = "UNSUPPORTED"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GKState:
    """An unperturbed eigenstate: index n with energy 4n + 2 gamma."""

    index: int
    energy: float


def derive_params(p):
    gamma = 1.0 + 0.5 * math.sqrt(1.0 + 4.0 * p.A)
    nu = 1.0 / (p.alpha - 2.0)
    return DerivedParams(gamma=gamma, nu=nu, s=2.0 * nu * (gamma - 1.0), alpha=p.alpha)


def classify_regime(d, tol=DEFAULT_REGIME_TOL):
    """Pick the expansion regime from the index s.

    The boundaries s = 1 and s = 2 get their own tags when s lies within
    `tol` of them; s = 1/2 belongs to the lowest interval. s = 3 and
    s >= 4 have no formula and come back as UNSUPPORTED.
    """
    if not 0 < tol <= 1e-6:
        raise ParameterError(f"classification tolerance must lie in (0, 1e-6], got {tol}")
    s = d.s
    if s <= 0.5 + tol:
        return Regime.S_IN_0_HALF
    if abs(s - 1.0) < tol:
        return Regime.S_EQ_1
    if s < 1.0:
        return Regime.S_IN_HALF_1
    if abs(s - 2.0) < tol:
        return Regime.S_EQ_2
    if s < 2.0:
        return Regime.S_IN_1_2
    if abs(s - 3.0) < tol:
        return Regime.UNSUPPORTED
    if s < 3.0:
        return Regime.S_IN_2_3
    if s < 4.0 - tol:
        return Regime.S_IN_3_4
    return Regime.UNSUPPORTED


def gk_energy(n, gamma):
    if n < 0 or int(n) != n:
        raise ParameterError(f"state index must be a nonnegative integer, got {n}")
    return 4.0 * n + 2.0 * gamma


def gk_state(n, gamma):
    return GKState(index=int(n), energy=gk_energy(n, gamma))


def gk_norm(n, gamma):
    """Normalization sqrt(2 (gamma)_n / (n! Gamma(gamma)))."""
    return math.sqrt(2.0 * specfun.pochhammer(gamma, n) / (math.factorial(n) * specfun.gamma(gamma)))


def gk_wavefunction(n, gamma, x):
    """Normalized unperturbed eigenfunction psi_n at x (scalar or array).

    psi_n(x) = (-1)^n N_n x^(gamma-1/2) exp(-x^2/2) 1F1(-n; gamma; x^2).
    """
    if n < 0 or int(n) != n:
        raise ParameterError(f"state index must be a nonnegative integer, got {n}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ParameterError("gk_wavefunction needs x > 0")
    n = int(n)
    x2 = xa * xa
    out = (-1) ** n * gk_norm(n, gamma) * xa ** (gamma - 0.5) * np.exp(-0.5 * x2)
    out = out * specfun.hyp1f1_poly(n, gamma, x2)
    return float(out) if out.ndim == 0 else out
