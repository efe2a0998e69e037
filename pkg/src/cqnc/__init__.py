"""Quantum-limited force sensing with atom-assisted coherent quantum noise cancellation.

Closed-form and brute-force (Langevin) added-noise spectra for a dual-cavity
optomechanical sensor whose backaction is cancelled by a negative-mass atomic
ensemble, plus the EIT precooling estimate for the same setup.
"""

from .errors import (
    ConfigError,
    DivisionSingularity,
    MassMissing,
    NegativeDamping,
    NonPositiveRate,
    ParameterError,
    SingularSystem,
    UnknownPreset,
    ZeroCoupling,
)
from .estimator import NoiseSpectrumModel
from .optimum import ASYMPTOTIC, OptimumResult, optimal_g_cqnc, optimal_g_standard, power_sweep
from .oracle import assemble, oracle_spectrum, transfer
from .params import (
    FrequencyLayout,
    Scheme,
    SystemParams,
    g_to_power,
    load_config,
    power_to_g,
    preset,
    thermal_occupancy,
    validate,
)
from .precool import CouplingMode, PrecoolParams, chi_eit, n_min, optical_damping, steady_state_d
from .response import ResponseSet, chi_c, chi_c_prime, chi_m, chi_sigma, responses
from .spectra import (
    NoiseBudget,
    f_add_components,
    s_add,
    s_add_cqnc,
    s_add_standard,
    s_cqnc_limit,
    s_sql,
    shot_bracket,
)

__version__ = "0.1.0"
