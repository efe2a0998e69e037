"""Physical parameters, presets, and unit conversions.

Every frequency and rate is stored as an angular quantity in rad/s. The
dimensionless quadratures follow the zero-point normalization, so the only
place an effective mass enters is the optional SI conversion of spectra.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, NamedTuple, Optional, Union

import numpy as np

from .errors import ConfigError, NonPositiveRate, ParameterError, UnknownPreset

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
TWO_PI = 2.0 * math.pi


class Scheme(str, enum.Enum):
    """Sensing configuration.

    STANDARD has neither atoms nor tunneling in the readout path;
    RESONANT_CQNC pumps and reads the same mode (J = 0 in the shot bracket);
    HETERODYNE_CQNC pumps the antisymmetric mode and reads the symmetric one.
    """

    STANDARD = "standard"
    RESONANT_CQNC = "resonant"
    HETERODYNE_CQNC = "heterodyne"

    @classmethod
    def parse(cls, value: Union[str, "Scheme"]) -> "Scheme":
        if isinstance(value, Scheme):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {
            "standard": cls.STANDARD,
            "std": cls.STANDARD,
            "resonant": cls.RESONANT_CQNC,
            "resonant-cqnc": cls.RESONANT_CQNC,
            "heterodyne": cls.HETERODYNE_CQNC,
            "heterodyne-cqnc": cls.HETERODYNE_CQNC,
            "cqnc": cls.HETERODYNE_CQNC,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ParameterError(f"unknown scheme {value!r}") from None

    @property
    def is_cqnc(self) -> bool:
        return self is not Scheme.STANDARD


@dataclass(frozen=True)
class SystemParams:
    """Rates and frequencies of the hybrid sensing system (rad/s, K, kg).

    ``g`` is kept as a nonnegative magnitude since only g**2 enters any
    spectrum. ``Gamma=None`` means "match the mechanical damping" and is
    resolved by :func:`validate`.
    """

    omega_m: float
    gamma_m: float
    kappa: float
    Gamma: Optional[float] = None
    J: float = 0.0
    g: float = 0.0
    G: float = 0.0
    g0: Optional[float] = None
    omega_L: Optional[float] = None
    T: float = 0.0
    m: Optional[float] = None

    @property
    def Q(self) -> float:
        return self.omega_m / self.gamma_m

    def replace(self, **changes: Any) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def for_scheme(self, scheme: Union[str, Scheme]) -> "SystemParams":
        """Switch off the couplings a scheme does not use."""
        scheme = Scheme.parse(scheme)
        if scheme is Scheme.STANDARD:
            return self.replace(G=0.0, J=0.0)
        if scheme is Scheme.RESONANT_CQNC:
            return self.replace(J=0.0)
        return self

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class FrequencyLayout:
    """Absolute optical frequencies of the coupled-cavity modes (rad/s)."""

    omega_cav: float
    omega_c: float
    omega_d: float
    omega_Omega: float

    @classmethod
    def from_cavity(cls, omega_cav: float, J: float, omega_Omega: Optional[float] = None):
        omega_c = omega_cav + J
        omega_d = omega_cav - J
        return cls(omega_cav, omega_c, omega_d, omega_c if omega_Omega is None else omega_Omega)

    @property
    def splitting(self) -> float:
        return self.omega_c - self.omega_d


_FIELDS = {f.name for f in dataclasses.fields(SystemParams)}
_STRICTLY_POSITIVE = ("omega_m", "gamma_m", "kappa")
_NONNEGATIVE = ("Gamma", "J", "g", "G", "T")
_OPTIONAL_POSITIVE = ("g0", "omega_L", "m")


def validate(raw: Union[SystemParams, Mapping[str, Any]]) -> SystemParams:
    """Return normalized, checked parameters.

    A mapping may give the quality factor ``Q`` in place of ``gamma_m``.
    ``Gamma`` defaults to ``gamma_m`` (matched dissipation).
    """
    if isinstance(raw, SystemParams):
        values = raw.as_dict()
    else:
        values = dict(raw)
        unknown = set(values) - _FIELDS - {"Q"}
        if unknown:
            raise ParameterError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        Q = values.pop("Q", None)
        if Q is not None:
            if not Q > 0:
                raise NonPositiveRate(f"Q must be > 0, got {Q!r}")
            if values.get("gamma_m") is not None:
                raise ParameterError("give either gamma_m or Q, not both")
            if values.get("omega_m") is None:
                raise ParameterError("Q requires omega_m")
            values["gamma_m"] = float(values["omega_m"]) / float(Q)
        missing = [k for k in _STRICTLY_POSITIVE if values.get(k) is None]
        if missing:
            raise ParameterError(f"missing required parameter(s): {', '.join(missing)}")

    out = {}
    for key, val in values.items():
        if val is None:
            out[key] = None
            continue
        try:
            out[key] = float(val)
        except (TypeError, ValueError):
            raise ParameterError(f"{key} must be a number, got {val!r}") from None
        if not math.isfinite(out[key]):
            raise ParameterError(f"{key} must be finite, got {val!r}")

    for key in _STRICTLY_POSITIVE:
        if not out[key] > 0:
            raise NonPositiveRate(f"{key} must be > 0, got {out[key]!r}")
    if out.get("Gamma") is None:
        out["Gamma"] = out["gamma_m"]
    for key in _NONNEGATIVE:
        if out.get(key, 0.0) < 0:
            raise NonPositiveRate(f"{key} must be >= 0, got {out[key]!r}")
    for key in _OPTIONAL_POSITIVE:
        if out.get(key) is not None and not out[key] > 0:
            raise NonPositiveRate(f"{key} must be > 0 when given, got {out[key]!r}")
    return SystemParams(**out)


class Preset(NamedTuple):
    params: SystemParams
    layout: Optional[FrequencyLayout]


def _fig2() -> SystemParams:
    omega_m = TWO_PI * 300e3
    kappa = TWO_PI * 1e6
    gamma_m = omega_m / 1e8
    # matched couplings at the on-resonance SQL optimum g**2 = kappa*gamma_m/4
    g = math.sqrt(kappa * gamma_m) / 2.0
    return SystemParams(
        omega_m=omega_m, gamma_m=gamma_m, kappa=kappa, Gamma=gamma_m, J=0.0, g=g, G=g, T=0.0
    )


def preset(name: str) -> Preset:
    """Named parameter sets: ``fig2``, ``fig3``, ``appendix``.

    ``fig2`` has no pump frequency, so its layout is ``None``.
    """
    key = str(name).strip().lower()
    if key == "fig2":
        return Preset(_fig2(), None)
    if key in ("fig3", "appendix"):
        base = _fig2()
        omega_L = TWO_PI * 384e12
        J = base.kappa / math.sqrt(2.0)
        params = base.replace(J=J, g0=TWO_PI * 300.0, omega_L=omega_L)
        if key == "fig3":
            # pump at omega_d = omega_L, control field on the sensing mode
            layout = FrequencyLayout.from_cavity(omega_L + J, J)
        else:
            params = params.replace(T=300.0)
            # red-detuned pump, omega_d - omega_L = omega_m; Raman resonance with d
            omega_d = omega_L + params.omega_m
            layout = FrequencyLayout.from_cavity(
                omega_d + J, J, omega_Omega=omega_d + params.omega_m
            )
        return Preset(params, layout)
    raise UnknownPreset(f"unknown preset {name!r}; choose fig2, fig3 or appendix")


def _require_pump(params: SystemParams) -> tuple:
    if params.g0 is None or params.omega_L is None:
        raise ParameterError("power conversion needs g0 and omega_L")
    return params.g0, params.omega_L


def photon_number(g, params: SystemParams):
    """Intracavity photon number proxy (g/g0)**2."""
    g0, _ = _require_pump(params)
    return (np.asarray(g, dtype=float) / g0) ** 2


def g_to_power(g, params: SystemParams):
    """Drive power P = 2 hbar omega_L kappa (g/g0)**2 in W."""
    _, omega_L = _require_pump(params)
    g = np.asarray(g, dtype=float)
    if np.any(g < 0):
        raise ParameterError("g must be >= 0")
    out = 2.0 * HBAR * omega_L * params.kappa * photon_number(g, params)
    return out if out.ndim else float(out)


def power_to_g(power, params: SystemParams):
    g0, omega_L = _require_pump(params)
    power = np.asarray(power, dtype=float)
    if np.any(power < 0):
        raise ParameterError("power must be >= 0")
    out = g0 * np.sqrt(power / (2.0 * HBAR * omega_L * params.kappa))
    return out if out.ndim else float(out)


class Occupancy(NamedTuple):
    classical: float
    bose_einstein: float


def thermal_occupancy(T, omega) -> Occupancy:
    """Thermal phonon number, both as k_B T / hbar omega and Bose-Einstein."""
    T = np.asarray(T, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(T < 0):
        raise ParameterError("T must be >= 0")
    if np.any(omega <= 0):
        raise NonPositiveRate("omega must be > 0")
    classical = K_B * T / (HBAR * omega)
    with np.errstate(divide="ignore", over="ignore"):
        x = np.where(T > 0, HBAR * omega / np.where(T > 0, K_B * T, 1.0), np.inf)
        bose = np.where(np.isinf(x), 0.0, 1.0 / np.expm1(x))
    if classical.ndim == 0:
        return Occupancy(float(classical), float(bose))
    return Occupancy(classical, bose)


def load_config(path: Union[str, Path]) -> SystemParams:
    """Read a flat ``key = value`` parameter file.

    Keys are SystemParams field names (or ``Q``); a ``_hz`` suffix means the
    value is an ordinary frequency and is multiplied by 2 pi. Blank lines and
    ``#`` comments are ignored.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {str(path)!r}: {exc.strerror}") from None
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else (":" if ":" in line else None)
        if sep is None:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split(sep, 1))
        scale = 1.0
        if key.endswith("_hz"):
            key, scale = key[: -len("_hz")], TWO_PI
            if key in ("T", "m", "Q"):
                raise ConfigError(f"{path}:{lineno}: {key} has no _hz form")
        if key not in _FIELDS and key != "Q":
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val) * scale
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: {key} is not a number: {val!r}") from None
    try:
        return validate(values)
    except ParameterError as exc:
        raise ConfigError(f"{path}: {exc}") from None
