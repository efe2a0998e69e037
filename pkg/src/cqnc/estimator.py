"""scikit-learn style front end.

``NoiseSpectrumModel`` maps a column of Fourier frequencies (rad/s) to the
added-noise budget, so sweeps compose with pipelines, ``clone`` and
``get_params``/``set_params``. Fitting only validates the parameters; there
is nothing to learn from data.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .oracle import oracle_spectrum
from .params import Scheme, preset, validate
from .spectra import NoiseBudget, f_add_components, s_add

METHODS = ("closed-form", "general", "oracle")


def check_frequencies(X) -> np.ndarray:
    """Accept a 1-D grid or a single-column 2-D array; return a flat float array."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 1:
        raise ValueError(f"expected one column of frequencies, got {X.shape[1]}")
    return X[:, 0]


class NoiseSpectrumModel(TransformerMixin, BaseEstimator):
    """Added force-noise spectrum of the hybrid sensor.

    Parameters mirror :class:`cqnc.params.SystemParams`; ``method`` picks the
    low-frequency closed form, the general closed form, or the Langevin oracle.
    ``transform`` returns columns (thermal, shot, backaction, atomic, total);
    ``predict`` returns the total.
    """

    def __init__(
        self,
        omega_m=2 * np.pi * 300e3,
        gamma_m=2 * np.pi * 3e-3,
        kappa=2 * np.pi * 1e6,
        Gamma=None,
        J=0.0,
        g=0.0,
        G=0.0,
        T=0.0,
        m=None,
        scheme="heterodyne",
        method="closed-form",
        thermal_mode="classical",
    ):
        self.omega_m = omega_m
        self.gamma_m = gamma_m
        self.kappa = kappa
        self.Gamma = Gamma
        self.J = J
        self.g = g
        self.G = G
        self.T = T
        self.m = m
        self.scheme = scheme
        self.method = method
        self.thermal_mode = thermal_mode

    @classmethod
    def from_preset(cls, name, **overrides):
        params, _ = preset(name)
        keys = cls._get_param_names()
        kw = {k: v for k, v in params.as_dict().items() if k in keys}
        kw.update(overrides)
        return cls(**kw)

    def fit(self, X=None, y=None):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        self.scheme_ = Scheme.parse(self.scheme)
        self.params_ = validate(
            {
                "omega_m": self.omega_m, "gamma_m": self.gamma_m, "kappa": self.kappa,
                "Gamma": self.Gamma, "J": self.J, "g": self.g, "G": self.G,
                "T": self.T, "m": self.m,
            }
        )
        return self

    def budget(self, X) -> NoiseBudget:
        check_is_fitted(self, "params_")
        omega = check_frequencies(X)
        if self.method == "oracle":
            return oracle_spectrum(omega, self.params_, self.scheme_,
                                   thermal_mode=self.thermal_mode)
        if self.method == "general":
            return f_add_components(omega, self.params_.for_scheme(self.scheme_),
                                    thermal_mode=self.thermal_mode)
        return s_add(omega, self.params_, self.scheme_, thermal_mode=self.thermal_mode)

    def transform(self, X):
        b = self.budget(X)
        return np.column_stack([b.thermal, b.shot, b.backaction, b.atomic, b.total])

    def predict(self, X):
        return self.budget(X).total

    def get_feature_names_out(self, input_features=None):
        return np.asarray(NoiseBudget.COMPONENTS, dtype=object)
