"""Closed-form added-force-noise spectral densities.

Spectra are dimensionless: multiply by hbar m omega_m gamma_m (the square of
the force normalization) to obtain N**2/Hz. ``NoiseBudget.to_si`` does that
when the effective mass is known.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping, Optional, Union

import numpy as np

from .errors import MassMissing, ZeroCoupling
from .params import HBAR, K_B, Scheme, SystemParams
from .response import backaction_sum, chi_c, chi_c_prime, chi_m, chi_sigma

THERMAL_MODES = ("classical", "symmetrized")


@dataclass(frozen=True)
class NoiseBudget:
    """Per-source decomposition of the added force noise at each frequency.

    ``total`` is the sum of the four components. ``channels`` is filled by
    the Langevin oracle with the contribution of each input channel;
    ``out_of_band`` marks frequencies where a low-frequency closed form is
    being used beyond omega = 0.1 kappa.
    """

    omega: np.ndarray
    thermal: np.ndarray
    shot: np.ndarray
    backaction: np.ndarray
    atomic: np.ndarray
    total: np.ndarray
    normalization: Optional[float] = None
    channels: Optional[Mapping[str, np.ndarray]] = None
    out_of_band: Optional[np.ndarray] = None

    @classmethod
    def from_components(cls, omega, thermal, shot, backaction, atomic, params, **extra):
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        parts = [np.broadcast_to(np.asarray(c, dtype=float), omega.shape).copy()
                 for c in (thermal, shot, backaction, atomic)]
        total = parts[0] + parts[1] + parts[2] + parts[3]
        return cls(omega, *parts, total, normalization=force_normalization(params), **extra)

    COMPONENTS = ("thermal", "shot", "backaction", "atomic", "total")

    def to_si(self) -> "NoiseBudget":
        """Convert every component to N**2/Hz."""
        if self.normalization is None:
            raise MassMissing("SI spectra need the effective mass m")
        scale = self.normalization**2
        changes = {name: getattr(self, name) * scale for name in self.COMPONENTS}
        if self.channels is not None:
            changes["channels"] = {k: v * scale for k, v in self.channels.items()}
        return dataclasses.replace(self, normalization=None, **changes)

    def as_dict(self) -> dict:
        out = {"omega": self.omega}
        out.update({name: getattr(self, name) for name in self.COMPONENTS})
        return out


def force_normalization(params: SystemParams) -> Optional[float]:
    """sqrt(hbar m omega_m gamma_m) in N/sqrt(Hz), or None without a mass."""
    if params.m is None:
        return None
    return float(np.sqrt(HBAR * params.m * params.omega_m * params.gamma_m))


def thermal_force_psd(T: float, omega_m: float, mode: str = "classical") -> float:
    """Spectral density of the thermal force in units of the normalization.

    ``classical`` gives k_B T / hbar omega_m (zero at T = 0);
    ``symmetrized`` gives n_BE(omega_m) + 1/2 and so keeps zero-point noise.
    """
    if T < 0:
        raise ValueError("T must be >= 0")
    if mode == "classical":
        return K_B * T / (HBAR * omega_m)
    if mode == "symmetrized":
        if T == 0:
            return 0.5
        return 1.0 / np.expm1(HBAR * omega_m / (K_B * T)) + 0.5
    raise ValueError(f"thermal mode must be one of {THERMAL_MODES}, got {mode!r}")


def shot_bracket(J: float, kappa: float) -> float:
    """(1/2 - 8 J**2/kappa**2)**2 + 16 J**2/kappa**2."""
    r = J**2 / kappa**2
    return (0.5 - 8.0 * r) ** 2 + 16.0 * r


def _require_coupling(params: SystemParams):
    if params.g <= 0:
        raise ZeroCoupling("g must be > 0 to refer noise to the input force")


def _temperature(params, T):
    return params.T if T is None else T


def _shot_scale(omega, params):
    # (kappa/gamma_m) / (g**2 |chi_m|**2), via 1/|chi_m| to avoid overflow on resonance
    inv = np.abs(1.0 / chi_m(omega, params.omega_m, params.gamma_m))
    return params.kappa / params.gamma_m * (inv / params.g) ** 2


def s_add_cqnc(
    omega,
    params: SystemParams,
    T: Optional[float] = None,
    scheme: Union[str, Scheme] = Scheme.HETERODYNE_CQNC,
    thermal_mode: str = "classical",
) -> NoiseBudget:
    """Added noise under exact backaction cancellation and omega << kappa.

    The resonant scheme uses J = 0 in the shot bracket only. Frequencies above
    0.1 kappa are flagged in ``out_of_band``.
    """
    scheme = Scheme.parse(scheme)
    if not scheme.is_cqnc:
        raise ValueError("s_add_cqnc needs a CQNC scheme")
    _require_coupling(params)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    J = 0.0 if scheme is Scheme.RESONANT_CQNC else params.J
    thermal = thermal_force_psd(_temperature(params, T), params.omega_m, thermal_mode)
    shot = 0.5 * _shot_scale(omega, params) * shot_bracket(J, params.kappa)
    atomic = 0.5 * (1.0 + (omega**2 + params.Gamma**2 / 4.0) / params.omega_m**2)
    return NoiseBudget.from_components(
        omega, thermal, shot, 0.0, atomic, params,
        out_of_band=np.abs(omega) > 0.1 * params.kappa,
    )


def s_add_standard(
    omega, params: SystemParams, T: Optional[float] = None, thermal_mode: str = "classical"
) -> NoiseBudget:
    """Added noise of the conventional optomechanical readout."""
    _require_coupling(params)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    thermal = thermal_force_psd(_temperature(params, T), params.omega_m, thermal_mode)
    shot = 0.5 * _shot_scale(omega, params) * 0.25
    backaction = 0.5 * 4.0 * params.g**2 / (params.kappa * params.gamma_m)
    return NoiseBudget.from_components(
        omega, thermal, shot, backaction, 0.0, params,
        out_of_band=np.abs(omega) > 0.1 * params.kappa,
    )


def s_add(omega, params, scheme, T=None, thermal_mode="classical") -> NoiseBudget:
    """Closed-form spectrum for any scheme."""
    scheme = Scheme.parse(scheme)
    if scheme is Scheme.STANDARD:
        return s_add_standard(omega, params, T, thermal_mode)
    return s_add_cqnc(omega, params, T, scheme, thermal_mode)


def s_sql(omega, params: SystemParams):
    """Standard quantum limit 1 / (gamma_m |chi_m|)."""
    out = 1.0 / (params.gamma_m * np.abs(chi_m(omega, params.omega_m, params.gamma_m)))
    return out if np.ndim(out) else float(out)


def s_cqnc_limit(omega, params: SystemParams):
    """Large-g floor of the cancelled spectrum: atomic vacuum noise only."""
    omega = np.asarray(omega, dtype=float)
    out = 0.5 * (omega**2 + params.omega_m**2 + params.Gamma**2 / 4.0) / params.omega_m**2
    return out if out.ndim else float(out)


def f_add_components(
    omega, params: SystemParams, T: Optional[float] = None, thermal_mode: str = "classical"
) -> NoiseBudget:
    """General added-noise decomposition, no cancellation or omega << kappa assumed.

    Components are grouped by the input that carries them:

    - thermal: the Brownian force itself;
    - shot: the p_c input, weighted by (1 - 1/(chi'_c kappa));
    - backaction: the x_c input, which enters both through the tunneling term
      2J chi_c and through the residual kernel g**2 chi_m + G**2 chi_sigma.
      The two act on the same input and are added coherently, with a
      sqrt(kappa/gamma_m) prefactor on both;
    - atomic: both spin inputs, scaled by G chi_sigma / (g chi_m).

    With J = 0 the backaction component is the pure residual backaction.
    """
    _require_coupling(params)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    k, gm, wm = params.kappa, params.gamma_m, params.omega_m
    cc = chi_c(omega, k)
    ccp = np.atleast_1d(chi_c_prime(omega, params))
    cm = chi_m(omega, wm, gm)
    cs = chi_sigma(omega, wm, params.Gamma)
    g_cm = params.g * cm

    referral = np.sqrt(k / gm) / g_cm
    p_in = referral * (1.0 - 1.0 / (ccp * k))
    shot = 0.5 * np.abs(p_in) ** 2

    spin = params.G * cs / g_cm * np.sqrt(params.Gamma / gm)
    x_sigma_weight = (1j * omega + params.Gamma / 2.0) / wm
    atomic = 0.5 * np.abs(spin) ** 2 * (1.0 + np.abs(x_sigma_weight) ** 2)

    x_in = referral * cc * (2.0 * params.J - backaction_sum(omega, params))
    backaction = 0.5 * np.abs(x_in) ** 2

    thermal = thermal_force_psd(_temperature(params, T), wm, thermal_mode)
    return NoiseBudget.from_components(omega, thermal, shot, backaction, atomic, params)
