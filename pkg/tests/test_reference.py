import math

import numpy as np
import pytest

from spikedosc.errors import ConvergenceError, ParameterError
from spikedosc.model import OscillatorParams, derive_params
from spikedosc.reference import (
    KTInterval,
    SolverConfig,
    default_next_lower,
    default_x_min,
    kato_temple,
    resolve_config,
    solve_reference,
    trial_bounds,
)

SQRT_PI = math.sqrt(math.pi)


@pytest.mark.parametrize("A,i,expected", [(0.0, 0, 3.0), (2.0, 1, 9.0), (0.75, 2, 12.0), (0.0, 3, 15.0)])
def test_unperturbed_levels(A, i, expected):
    est = solve_reference(OscillatorParams(A, 4.0), i)
    assert est.value == pytest.approx(expected, abs=1e-6)
    assert 0 <= est.error_estimate < 1e-6


def test_known_perturbed_value():
    est = solve_reference(OscillatorParams(0.0, 4.0, 1e-4))
    assert abs(est.value - (3 + 4 / SQRT_PI * 0.01)) < 5e-4


@pytest.mark.parametrize("A,i", [(0.0, 0), (2.0, 1)])
def test_grid_convergence_rate(A, i):
    # raw level errors fall by about 4 per doubling; Romberg does better
    est = solve_reference(OscillatorParams(A, 4.0), i)
    exact = 4 * i + 2 * derive_params(OscillatorParams(A, 4.0)).gamma
    errs = [abs(v - exact) for v in est.levels]
    for e0, e1 in zip(errs, errs[1:]):
        assert e1 * 3 <= e0
    assert abs(est.extrapolated[-1] - exact) < errs[-1]


@pytest.mark.parametrize("A,alpha,lam", [(0, 4, 1e-4), (0.75, 6, 1e-3), (0, 3, 1e-3), (0, 2.5, 1e-2)])
def test_inner_cutoff_insensitivity(A, alpha, lam):
    p = OscillatorParams(A, alpha, lam)
    x0 = default_x_min(p)
    e1 = solve_reference(p, cfg=SolverConfig(x_min=x0)).value
    e2 = solve_reference(p, cfg=SolverConfig(x_min=x0 / 2)).value
    assert abs(e1 - e2) < 1e-8


def test_outer_cutoff_insensitivity():
    p = OscillatorParams(0.0, 4.0, 1e-3)
    e1 = solve_reference(p).value
    e2 = solve_reference(p, cfg=SolverConfig(x_max=14.0)).value
    assert abs(e1 - e2) < 1e-10


def test_wkb_barrier_at_x_min():
    p = OscillatorParams(0.0, 4.0, 1e-4)
    d = derive_params(p)
    x0 = default_x_min(p)
    assert 2 * d.nu * math.sqrt(p.lam) * x0 ** (-1 / (2 * d.nu)) == pytest.approx(40.0)


def test_config_validation():
    with pytest.raises(ParameterError):
        SolverConfig(x_min=2.0, x_max=1.0).validate()
    with pytest.raises(ParameterError):
        SolverConfig(x_min=-1.0).validate()
    with pytest.raises(ParameterError):
        SolverConfig(n_points=50).validate()
    with pytest.raises(ParameterError):
        SolverConfig(refinement_levels=0).validate()
    with pytest.raises(ParameterError):
        solve_reference(OscillatorParams(0.0, 4.0), -1)
    with pytest.raises(ParameterError):
        solve_reference(OscillatorParams(0.0, 4.0), cfg=SolverConfig(x_max=1e-30))


def test_resolved_config_is_recorded():
    p = OscillatorParams(0.0, 4.0, 1e-3)
    est = solve_reference(p, cfg=SolverConfig(refinement_levels=3))
    cfg = est.config_used
    assert cfg == resolve_config(p, 0, SolverConfig(refinement_levels=3))
    assert cfg.x_min > 0 and cfg.x_max > cfg.x_min and cfg.n_points >= 1000
    assert len(est.levels) == 3


def test_convergence_error():
    p = OscillatorParams(0.0, 4.0, 1e-3)
    with pytest.raises(ConvergenceError):
        solve_reference(p, cfg=SolverConfig(n_points=100, refinement_levels=2, tol=1e-12))


def test_deterministic():
    p = OscillatorParams(0.3, 5.0, 2e-3)
    assert solve_reference(p).value == solve_reference(p).value


# ---------------------------------------------------------------- Kato-Temple

def test_kt_exact_state():
    iv = kato_temple(3.1, 0.0, 6.9)
    assert iv.valid and iv.lower == iv.upper == 3.1


def test_kt_hand_example():
    iv = kato_temple(3.1, 0.04, 6.9)
    assert iv.valid
    assert iv.lower == pytest.approx(3.1 - 0.04 / 3.8, abs=1e-15)
    assert iv.lower == pytest.approx(3.0894737, abs=1e-7)
    assert iv.upper == 3.1


def test_kt_preconditions():
    iv = kato_temple(3.1, 0.04, 3.0)
    assert not iv.valid and math.isnan(iv.lower) and math.isnan(iv.upper)
    assert not kato_temple(7.0, 0.04, 10.0, prev_upper=7.5).valid
    assert not kato_temple(7.0, 5.0, 10.0, prev_upper=6.0).valid
    assert not kato_temple(7.0, -1.0, 10.0).valid


def test_kt_two_sided():
    iv = kato_temple(7.0, 0.1, 10.0, prev_upper=3.5)
    assert iv.valid
    assert iv.lower == pytest.approx(7.0 - 0.1 / 3.0)
    assert iv.upper == pytest.approx(7.0 + 0.1 / 3.5)
    assert iv.contains(7.0) and not iv.contains(8.0)


def test_kt_without_next_level():
    iv = kato_temple(3.1, 0.04)
    assert iv.valid and iv.lower == -math.inf and iv.upper == 3.1


def test_invalid_interval_contains_nothing():
    assert not KTInterval(float("nan"), float("nan"), False).contains(3.0)


def test_default_next_lower():
    assert default_next_lower(OscillatorParams(0.0, 4.0, 1e-3), 0) == 6.5


@pytest.mark.parametrize("A,alpha", [(0, 6), (0.75, 6), (0, 3.5), (0, 3), (0, 2.75), (0, 2.5)])
@pytest.mark.parametrize("lam", [1e-4, 1e-3])
def test_sandwich(A, alpha, lam):
    p = OscillatorParams(A, alpha, lam)
    b = trial_bounds(p)
    e = solve_reference(p).value
    assert b.interval.valid
    assert b.interval.lower <= e <= b.interval.upper


def test_sandwich_excited():
    p = OscillatorParams(0.0, 6.0, 1e-4)
    b = trial_bounds(p, 1)
    e = solve_reference(p, 1).value
    assert b.interval.valid and b.prev_upper is not None
    assert b.interval.lower <= e <= b.interval.upper


def test_log_term_at_the_half_boundary():
    # at gamma=2, alpha=6 the first-order RS coefficient Gamma(gamma - alpha/2)
    # sits on a pole and the remainder after 4 + 2 sqrt(lam) is lam log lam
    # with unit coefficient, not a plain O(lam)
    p0 = OscillatorParams(0.75, 6.0)
    lams = np.array([1e-6, 1e-5, 1e-4])
    y = np.array([(solve_reference(p0.with_lambda(l)).value - 4 - 2 * math.sqrt(l)) / l for l in lams])
    slope, _ = np.polyfit(np.log(lams), y, 1)
    assert slope == pytest.approx(1.0, abs=0.02)
    # at A=0, alpha=4 the same coefficient is finite and no log appears
    p0 = OscillatorParams(0.0, 4.0)
    y = np.array([(solve_reference(p0.with_lambda(l)).value - 3 - 4 / SQRT_PI * math.sqrt(l)) / l for l in lams])
    slope, _ = np.polyfit(np.log(lams), y, 1)
    assert abs(slope) < 0.1
