import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from cqnc.errors import NonPositiveRate
from cqnc.estimator import NoiseSpectrumModel, check_frequencies
from cqnc.params import Scheme
from cqnc.spectra import s_add


def test_from_preset_roundtrip(fig3):
    model = NoiseSpectrumModel.from_preset("fig3", scheme="heterodyne").fit()
    assert model.params_.replace(g0=fig3.g0, omega_L=fig3.omega_L) == fig3
    assert model.scheme_ is Scheme.HETERODYNE_CQNC


def test_predict_matches_functional(fig3):
    w = np.linspace(0.5, 1.5, 7) * fig3.omega_m
    model = NoiseSpectrumModel.from_preset("fig3", scheme="standard").fit()
    np.testing.assert_allclose(model.predict(w), s_add(w, fig3, "standard").total)


@pytest.mark.parametrize("method", ["closed-form", "general", "oracle"])
def test_methods_agree_at_low_frequency(method, fig3):
    w = np.linspace(1e-5, 1e-3, 4) * fig3.kappa
    model = NoiseSpectrumModel.from_preset("fig3", method=method).fit()
    np.testing.assert_allclose(model.predict(w), s_add(w, fig3, "heterodyne").total, rtol=1e-4)


def test_transform_columns():
    model = NoiseSpectrumModel.from_preset("fig2").fit()
    X = np.array([[1e5], [2e5]])
    out = model.transform(X)
    assert out.shape == (2, 5)
    np.testing.assert_allclose(out[:, :4].sum(axis=1), out[:, 4])
    assert list(model.get_feature_names_out()) == ["thermal", "shot", "backaction", "atomic", "total"]


def test_clone_and_params():
    model = NoiseSpectrumModel.from_preset("fig2", scheme="resonant")
    twin = clone(model).set_params(T=4.0)
    assert twin.get_params()["scheme"] == "resonant"
    assert twin.T == 4.0 and model.T == 0.0


def test_pipeline():
    pipe = make_pipeline(FunctionTransformer(lambda x: 2 * np.pi * x),
                         NoiseSpectrumModel.from_preset("fig2"))
    out = pipe.fit_transform(np.array([[300e3]]))
    assert out.shape == (1, 5)


def test_errors():
    with pytest.raises(NotFittedError):
        NoiseSpectrumModel().predict([1.0])
    with pytest.raises(ValueError):
        NoiseSpectrumModel(method="magic").fit()
    with pytest.raises(NonPositiveRate):
        NoiseSpectrumModel(kappa=-1.0).fit()
    with pytest.raises(ValueError):
        check_frequencies(np.ones((3, 2)))
