"""EIT-assisted sideband precooling of the mechanical mode.

Detunings follow the pump convention Delta_d = omega_d - omega_L and
delta = omega_L - omega_d, so a red-detuned pump has delta = -Delta_d.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

from .errors import NegativeDamping, ParameterError
from .params import HBAR, TWO_PI, SystemParams, preset, thermal_occupancy


class CouplingMode(str, enum.Enum):
    """Which coupling multiplies |<d>| in the optical damping prefactor."""

    AS_WRITTEN = "as-written"  # collective Raman coupling G0 = sqrt(N) E Omega / Delta
    OPTOMECHANICAL = "optomechanical"  # single-photon coupling g0


@dataclass(frozen=True)
class PrecoolParams:
    N: float
    E_rabi: float
    Omega: float
    Delta: float
    Delta_d: float
    P: float
    Gamma: float
    gamma_e: float = TWO_PI * 6e6
    delta: Optional[float] = None
    coupling_mode: CouplingMode = CouplingMode.OPTOMECHANICAL

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", -self.Delta_d)
        object.__setattr__(self, "coupling_mode", CouplingMode(self.coupling_mode))
        if not self.N >= 1:
            raise ParameterError("N must be >= 1")
        if self.P < 0:
            raise ParameterError("P must be >= 0")
        if self.gamma_e <= 0 or self.Gamma < 0:
            raise ParameterError("linewidths must be positive")
        if not math.isclose(self.delta, -self.Delta_d, rel_tol=1e-12, abs_tol=1e-9):
            raise ParameterError("Raman detuning must equal -Delta_d")

    @property
    def G0(self) -> float:
        """Collective Raman coupling sqrt(N) E Omega / Delta."""
        return math.sqrt(self.N) * self.E_rabi * self.Omega / self.Delta

    def replace(self, **changes) -> "PrecoolParams":
        if "Delta_d" in changes and "delta" not in changes:
            changes["delta"] = -changes["Delta_d"]
        return replace(self, **changes)


def appendix_preset(gamma_e: float = TWO_PI * 6e6, coupling_mode=CouplingMode.OPTOMECHANICAL,
                    Gamma: Optional[float] = None):
    """Precooling example parameters; returns (SystemParams, PrecoolParams).

    The excited-state linewidth and the ground-state coherence decay are not
    fixed by the example; they default to 2 pi x 6 MHz and gamma_m.
    """
    params, _ = preset("appendix")
    pre = PrecoolParams(
        N=1e8,
        E_rabi=TWO_PI * 100e3,
        Omega=50.0 * gamma_e,
        Delta=50.0 * gamma_e,
        Delta_d=params.omega_m,
        P=24e-6,
        Gamma=params.gamma_m if Gamma is None else Gamma,
        gamma_e=gamma_e,
        coupling_mode=coupling_mode,
    )
    return params, pre


def chi_eit(p: PrecoolParams, at: str = "center", omega_m: Optional[float] = None) -> complex:
    """EIT susceptibility -E**2 N / [Delta + i gamma_e/2 - Omega**2/(delta + i Gamma/2)].

    ``plus``/``minus`` shift the Raman detuning by +/- omega_m (the motional
    sidebands at omega_L +/- omega_m).
    """
    shifts = {"center": 0.0, "plus": 1.0, "minus": -1.0}
    if at not in shifts:
        raise ValueError("at must be 'center', 'plus' or 'minus'")
    if shifts[at] and omega_m is None:
        raise ValueError("sideband evaluation needs omega_m")
    delta = p.delta + shifts[at] * (omega_m or 0.0)
    raman = p.Omega**2 / (delta + 0.5j * p.Gamma)
    return complex(-(p.E_rabi**2) * p.N / (p.Delta + 0.5j * p.gamma_e - raman))


def pump_rate(p: PrecoolParams, kappa: float, omega_L: float) -> float:
    """eta_d = sqrt(P kappa / (2 hbar omega_L))."""
    return math.sqrt(p.P * kappa / (2.0 * HBAR * omega_L))


def steady_state_d(p: PrecoolParams, kappa: float, omega_L: float) -> complex:
    """Classical amplitude <d> = -i eta_d / (i Delta_d + kappa/2 - i chi_EIT)."""
    eta = pump_rate(p, kappa, omega_L)
    return complex(-1j * eta / (1j * p.Delta_d + kappa / 2.0 - 1j * chi_eit(p)))


@dataclass(frozen=True)
class CoolingResult:
    d_ss: complex
    chi_eit_plus: complex
    chi_eit_minus: complex
    A_minus: float
    A_plus: float
    Gamma_opt: float
    coupling: float


def optical_damping(p: PrecoolParams, params: SystemParams) -> CoolingResult:
    """Cooling and heating rates and their difference Gamma_opt (rad/s)."""
    if params.omega_L is None:
        raise ParameterError("optical damping needs omega_L")
    kappa, wm = params.kappa, params.omega_m
    d = steady_state_d(p, kappa, params.omega_L)
    if p.coupling_mode is CouplingMode.OPTOMECHANICAL:
        if params.g0 is None:
            raise ParameterError("optomechanical coupling mode needs g0")
        coupling = params.g0
    else:
        coupling = p.G0
    prefactor = (4.0 * coupling * abs(d) / math.sqrt(2.0)) ** 2
    cp = chi_eit(p, "plus", wm)
    cm = chi_eit(p, "minus", wm)
    cooling = (1.0 / (1j * (p.Delta_d - wm - cp) + kappa / 2.0)).real
    heating = (1.0 / (-1j * (p.Delta_d + wm - cm.conjugate()) + kappa / 2.0)).real
    A_minus = prefactor * cooling
    A_plus = prefactor * heating
    return CoolingResult(d, cp, cm, A_minus, A_plus, A_minus - A_plus, coupling)


def n_min(cooling: CoolingResult, gamma_m: float, n_th: float) -> float:
    """Final occupancy (gamma_m n_th + Gamma_h) / (gamma_m + Gamma_opt), Gamma_h = A_plus."""
    if cooling.Gamma_opt < 0:
        warnings.warn(
            f"net optical damping is negative ({cooling.Gamma_opt:.3g} rad/s)",
            NegativeDamping,
            stacklevel=2,
        )
    denom = gamma_m + cooling.Gamma_opt
    if denom <= 0:
        raise ParameterError("gamma_m + Gamma_opt must be > 0")
    return (gamma_m * n_th + cooling.A_plus) / denom


def precool_summary(params: SystemParams, p: PrecoolParams, T: Optional[float] = None,
                    occupancy: str = "classical") -> dict:
    T = params.T if T is None else T
    res = optical_damping(p, params)
    occ = thermal_occupancy(T, params.omega_m)
    n_th = occ.classical if occupancy == "classical" else occ.bose_einstein
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NegativeDamping)
        n_final = n_min(res, params.gamma_m, n_th)
    return {
        "coupling_mode": p.coupling_mode.value,
        "gamma_e": p.gamma_e,
        "d_ss_abs": abs(res.d_ss),
        "d_ss_re": res.d_ss.real,
        "d_ss_im": res.d_ss.imag,
        "A_minus": res.A_minus,
        "A_plus": res.A_plus,
        "Gamma_opt": res.Gamma_opt,
        "Gamma_opt_over_omega_m": res.Gamma_opt / params.omega_m,
        "n_th": float(n_th),
        "n_min": float(n_final),
    }
