"""Brute-force frequency-domain solution of the linearized Langevin equations.

The six quadratures obey dv/dt = A v + B w, with state and input ordering

    state  v = [x, p, x_c, p_c, x_sigma, p_sigma]
    inputs w = [f, F_ext, x_c_in, p_c_in, x_sigma_in, p_sigma_in]

With O(omega) = (2 pi)**-1/2 int O(t) exp(-i omega t) dt the time derivative
becomes i omega, so M(omega) v = B w with M = i omega I - A. The detected
output is p_c_out = sqrt(kappa) p_c - p_c_in. Nothing here uses the closed
forms of :mod:`cqnc.response` or :mod:`cqnc.spectra`; it exists to check them.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

from .errors import SingularSystem, ZeroCoupling
from .params import Scheme, SystemParams
from .spectra import NoiseBudget, thermal_force_psd

STATE = ("x", "p", "x_c", "p_c", "x_sigma", "p_sigma")
INPUTS = ("f", "F_ext", "x_c_in", "p_c_in", "x_sigma_in", "p_sigma_in")
NOISE_CHANNELS = ("f", "x_c_in", "p_c_in", "x_sigma_in", "p_sigma_in")
VACUUM_PSD = 0.5

_P_C = STATE.index("p_c")
_P_C_IN = INPUTS.index("p_c_in")
_F_EXT = INPUTS.index("F_ext")

WORKERS_ENV = "CQNC_WORKERS"
_CHUNK = 4096


def drift_matrix(params: SystemParams) -> np.ndarray:
    wm, gm, k, Gam = params.omega_m, params.gamma_m, params.kappa, params.Gamma
    g, G, two_j = params.g, params.G, 2.0 * params.J
    return np.array(
        [
            [0.0, wm, 0.0, 0.0, 0.0, 0.0],
            [-wm, -gm, -g, 0.0, 0.0, 0.0],
            [0.0, 0.0, -k / 2, two_j, 0.0, 0.0],
            [-g, 0.0, -two_j, -k / 2, -G, 0.0],
            [0.0, 0.0, 0.0, 0.0, -Gam / 2, -wm],
            [0.0, 0.0, -G, 0.0, wm, -Gam / 2],
        ]
    )


def input_matrix(params: SystemParams) -> np.ndarray:
    B = np.zeros((6, 6))
    B[1, 0] = B[1, 1] = np.sqrt(params.gamma_m)
    B[2, 2] = B[3, 3] = np.sqrt(params.kappa)
    B[4, 4] = B[5, 5] = np.sqrt(params.Gamma)
    return B


def assemble(omega, params: SystemParams, scheme: Union[str, Scheme] = Scheme.HETERODYNE_CQNC):
    """Build (M, B) for one frequency or a grid.

    For a grid M has shape (n, 6, 6); B is frequency independent.
    """
    p = params.for_scheme(scheme)
    A = drift_matrix(p)
    omega = np.asarray(omega, dtype=float)
    M = 1j * omega[..., None, None] * np.eye(6) - A
    return M, input_matrix(p)


def _solve_chunk(M, B):
    try:
        return np.linalg.solve(M, np.broadcast_to(B.astype(complex), M.shape))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"Langevin system is singular: {exc}") from None


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _solve(M, B):
    n = M.shape[0]
    if n <= _CHUNK or _workers() == 1:
        return _solve_chunk(M, B)
    chunks = [M[i : i + _CHUNK] for i in range(0, n, _CHUNK)]
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        parts = list(pool.map(lambda m: _solve_chunk(m, B), chunks))
    return np.concatenate(parts)


@dataclass(frozen=True)
class TransferRow:
    """Complex gains from every input channel to p_c_out."""

    omega: np.ndarray
    gains: Dict[str, np.ndarray]

    @property
    def force_gain(self) -> np.ndarray:
        return self.gains["F_ext"]


def transfer(omega, params: SystemParams, scheme: Union[str, Scheme] = Scheme.HETERODYNE_CQNC):
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    M, B = assemble(omega, params, scheme)
    X = _solve(M, B)  # (n, state, input): response of each state to each input
    out = np.sqrt(params.kappa) * X[:, _P_C, :]
    out[:, _P_C_IN] -= 1.0
    return TransferRow(omega, {name: out[:, i] for i, name in enumerate(INPUTS)})


def oracle_spectrum(
    omega,
    params: SystemParams,
    scheme: Union[str, Scheme] = Scheme.HETERODYNE_CQNC,
    T=None,
    thermal_mode: str = "classical",
) -> NoiseBudget:
    """Added force noise from first principles, referred to F_ext.

    Channel contributions |T_channel / T_F|**2 S_channel are reported in
    ``channels``. In the budget, ``shot`` is the p_c input, ``backaction``
    the x_c input (which also carries the tunneling-mixed shot noise when
    J > 0), and ``atomic`` both spin inputs.
    """
    if params.g <= 0:
        raise ZeroCoupling("g must be > 0 to refer noise to the input force")
    T = params.T if T is None else T
    row = transfer(omega, params, scheme)
    t_force = row.force_gain
    if np.any(t_force == 0):
        raise SingularSystem("force transduction vanishes")
    psd = {
        "f": thermal_force_psd(T, params.omega_m, thermal_mode),
        "x_c_in": VACUUM_PSD,
        "p_c_in": VACUUM_PSD,
        "x_sigma_in": VACUUM_PSD,
        "p_sigma_in": VACUUM_PSD,
    }
    channels = {
        name: np.abs(row.gains[name] / t_force) ** 2 * psd[name] for name in NOISE_CHANNELS
    }
    return NoiseBudget.from_components(
        row.omega,
        channels["f"],
        channels["p_c_in"],
        channels["x_c_in"],
        channels["x_sigma_in"] + channels["p_sigma_in"],
        params,
        channels=channels,
    )
