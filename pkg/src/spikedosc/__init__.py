"""Perturbation expansions and reference eigenvalues for spiked harmonic oscillators.

H = -d^2/dx^2 + x^2 + A/x^2 + lam/x^alpha on the half-line.
"""

from .errors import (
    ConvergenceError,
    DivergenceError,
    ParameterError,
    PoleError,
    QuadratureError,
    RegimeError,
    SpikedError,
)
from .expansions import (
    EnergyExpansion,
    ExpansionTerm,
    evaluate_expansion,
    excited_expansion,
    ground_expansion,
    laplace_1f1_product,
    rs_coefficients,
    rs_series,
)
from .model import (
    DerivedParams,
    GKState,
    OscillatorParams,
    Regime,
    classify_regime,
    derive_params,
    gk_energy,
    gk_wavefunction,
)
from .reference import (
    EnergyEstimate,
    KTInterval,
    SolverConfig,
    kato_temple,
    solve_reference,
    trial_bounds,
)
from .trialfn import TrialMoments, dw_alpha, trial_state_moments, w_alpha

__version__ = "0.1.0"
