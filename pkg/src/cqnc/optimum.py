"""Optimization of the added noise over the measurement strength g."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import optimize

from .params import Scheme, SystemParams, g_to_power, power_to_g
from .response import chi_m
from .spectra import s_add, s_add_standard, s_cqnc_limit, shot_bracket, thermal_force_psd


class _Asymptotic:
    """Marker for an optimum approached only as g -> infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ASYMPTOTIC"

    def __reduce__(self):
        return (_Asymptotic, ())


ASYMPTOTIC = _Asymptotic()


@dataclass(frozen=True)
class OptimumResult:
    omega: float
    scheme: Scheme
    g_opt: Union[float, _Asymptotic]
    s_min: float
    g_99: Optional[float] = None
    power_opt: Optional[float] = None

    @property
    def asymptotic(self) -> bool:
        return self.g_opt is ASYMPTOTIC


def _power_or_none(g, params):
    if params.g0 is None or params.omega_L is None or g is None:
        return None
    return g_to_power(g, params)


def optimal_g_standard(omega: float, params: SystemParams, T: float = 0.0) -> OptimumResult:
    """Closed-form SQL optimum g**2 = kappa / (4 |chi_m|)."""
    abs_chi = abs(chi_m(omega, params.omega_m, params.gamma_m))
    g_opt = math.sqrt(params.kappa / (4.0 * abs_chi))
    s_min = 1.0 / (params.gamma_m * abs_chi) + thermal_force_psd(T, params.omega_m)
    return OptimumResult(
        float(omega), Scheme.STANDARD, g_opt, s_min, power_opt=_power_or_none(g_opt, params)
    )


def golden_minimize_standard(omega: float, params: SystemParams, xtol: float = 1e-12):
    """Numerical SQL optimum by golden-section search on log g.

    Independent of the closed-form minimizer; returns (g, s_min).
    """
    scale = math.sqrt(params.kappa * params.gamma_m)

    def objective(log_g):
        return float(s_add_standard(omega, params.replace(g=math.exp(log_g)), T=0.0).total[0])

    # coarse scan over [1e-6, 1e6] x sqrt(kappa gamma_m) to seed a valid bracket
    grid = np.linspace(math.log(1e-6 * scale), math.log(1e6 * scale), 121)
    values = [objective(x) for x in grid]
    i = int(np.clip(np.argmin(values), 1, len(grid) - 2))
    res = optimize.minimize_scalar(
        objective, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden",
        options={"xtol": xtol},
    )
    return math.exp(res.x), float(res.fun)


def optimal_g_cqnc(
    omega: float,
    params: SystemParams,
    tolerance: float = 0.01,
    scheme: Union[str, Scheme] = Scheme.HETERODYNE_CQNC,
    T: float = 0.0,
) -> OptimumResult:
    """Asymptotic optimum of a cancelled scheme.

    The spectrum falls monotonically towards its large-g floor; ``g_99`` is
    the coupling at which the shot term equals ``tolerance`` times that floor.
    """
    if not 0 < tolerance <= 0.5:
        raise ValueError("tolerance must lie in (0, 0.5]")
    scheme = Scheme.parse(scheme)
    if not scheme.is_cqnc:
        raise ValueError("optimal_g_cqnc needs a CQNC scheme")
    J = 0.0 if scheme is Scheme.RESONANT_CQNC else params.J
    floor = s_cqnc_limit(omega, params) + thermal_force_psd(T, params.omega_m)
    abs_chi = abs(chi_m(omega, params.omega_m, params.gamma_m))
    # 0.5 (kappa/gamma_m) bracket / (g**2 |chi_m|**2) = tolerance * floor
    g_99 = math.sqrt(
        0.5 * params.kappa * shot_bracket(J, params.kappa)
        / (params.gamma_m * abs_chi**2 * tolerance * floor)
    )
    return OptimumResult(
        float(omega), scheme, ASYMPTOTIC, floor, g_99=g_99, power_opt=_power_or_none(g_99, params)
    )


def optimal(omega, params, scheme, tolerance: float = 0.01, T: float = 0.0) -> OptimumResult:
    scheme = Scheme.parse(scheme)
    if scheme is Scheme.STANDARD:
        return optimal_g_standard(omega, params, T)
    return optimal_g_cqnc(omega, params, tolerance, scheme, T)


def default_power_grid(omega: float, params: SystemParams, points: int = 801) -> np.ndarray:
    """Eight decades of power, log spaced, centred on the standard optimum."""
    p_opt = g_to_power(optimal_g_standard(omega, params).g_opt, params)
    return np.logspace(math.log10(p_opt) - 4, math.log10(p_opt) + 4, points)


def power_sweep(omega: float, params: SystemParams, scheme, powers=None):
    """Added noise at T = 0 versus drive power; returns (powers, spectrum).

    Matched couplings G = g are assumed for the cancelled schemes.
    """
    scheme = Scheme.parse(scheme)
    powers = default_power_grid(omega, params) if powers is None else np.asarray(powers, float)
    if powers.ndim != 1 or np.any(powers <= 0) or np.any(np.diff(powers) <= 0):
        raise ValueError("power grid must be positive and strictly ascending")
    gs = np.atleast_1d(power_to_g(powers, params))
    values = np.array(
        [s_add(omega, params.replace(g=float(g), G=float(g)), scheme, T=0.0).total[0] for g in gs]
    )
    return powers, values


def find_crossing(omega: float, params: SystemParams, scheme, lo: float, hi: float,
                  rtol: float = 1e-10) -> float:
    """Power at which ``scheme`` drops below the standard readout, by bisection on log P."""

    def diff(log_p):
        g = float(power_to_g(math.exp(log_p), params))
        p = params.replace(g=g, G=g)
        return (s_add(omega, p, scheme, T=0.0).total[0]
                - s_add(omega, p, Scheme.STANDARD, T=0.0).total[0])

    a, b = math.log(lo), math.log(hi)
    fa, fb = diff(a), diff(b)
    if fa * fb > 0:
        raise ValueError("no sign change of the noise difference on the given power interval")
    while b - a > rtol:
        mid = 0.5 * (a + b)
        fm = diff(mid)
        if fa * fm <= 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return math.exp(0.5 * (a + b))
