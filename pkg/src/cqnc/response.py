"""Complex susceptibilities of the cavity field, mechanics, and atomic spin.

All functions broadcast over ``omega`` and return complex values in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivisionSingularity
from .params import SystemParams


def _scalar_or_array(x):
    return complex(x) if np.ndim(x) == 0 else x


def _checked_inverse(numer, denom, what):
    denom = np.asarray(denom)
    if np.any(denom == 0):
        raise DivisionSingularity(f"{what}: denominator vanishes")
    return _scalar_or_array(numer / denom)


def chi_c(omega, kappa):
    """Cavity quadrature response 1 / (i omega + kappa/2)."""
    omega = np.asarray(omega, dtype=float)
    return _checked_inverse(1.0, 1j * omega + kappa / 2.0, "chi_c")


def chi_m(omega, omega_m, gamma_m):
    """Mechanical response omega_m / (omega_m**2 - omega**2 + i omega gamma_m)."""
    omega = np.asarray(omega, dtype=float)
    denom = omega_m**2 - omega**2 + 1j * omega * gamma_m
    return _checked_inverse(omega_m, denom, "chi_m")


def chi_sigma(omega, omega_m, Gamma):
    """Atomic (negative-mass) response.

    Carries the opposite sign to ``chi_m`` and an extra Gamma**2/4 in the
    denominator, so chi_m + chi_sigma is of order Gamma**2 when Gamma = gamma_m.
    """
    omega = np.asarray(omega, dtype=float)
    denom = omega_m**2 - omega**2 + 1j * omega * Gamma + Gamma**2 / 4.0
    return _checked_inverse(-omega_m, denom, "chi_sigma")


def backaction_sum(omega, params: SystemParams):
    """g**2 chi_m + G**2 chi_sigma, the combined backaction kernel."""
    return params.g**2 * chi_m(omega, params.omega_m, params.gamma_m) + params.G**2 * chi_sigma(
        omega, params.omega_m, params.Gamma
    )


def chi_c_prime(omega, params: SystemParams):
    """Modified quadrature susceptibility of the read-out mode.

    1/chi'_c = 1/chi_c + 2J chi_c [2J - (g**2 chi_m + G**2 chi_sigma)];
    returns chi_c itself when J = 0.
    """
    cc = chi_c(omega, params.kappa)
    if params.J == 0:
        return cc
    two_j = 2.0 * params.J
    inv = 1.0 / np.asarray(cc) + two_j * np.asarray(cc) * (two_j - backaction_sum(omega, params))
    return _checked_inverse(1.0, inv, "chi_c_prime")


@dataclass(frozen=True)
class ResponseSet:
    omega: np.ndarray
    chi_c: np.ndarray
    chi_m: np.ndarray
    chi_sigma: np.ndarray
    chi_c_prime: np.ndarray


def responses(omega, params: SystemParams) -> ResponseSet:
    """All four susceptibilities on a frequency grid."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    return ResponseSet(
        omega=omega,
        chi_c=chi_c(omega, params.kappa),
        chi_m=chi_m(omega, params.omega_m, params.gamma_m),
        chi_sigma=chi_sigma(omega, params.omega_m, params.Gamma),
        chi_c_prime=np.atleast_1d(chi_c_prime(omega, params)),
    )
