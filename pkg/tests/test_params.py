import math

import pytest

from cqnc.errors import ConfigError, NonPositiveRate, ParameterError, UnknownPreset
from cqnc.params import (
    HBAR,
    K_B,
    FrequencyLayout,
    Scheme,
    SystemParams,
    g_to_power,
    load_config,
    photon_number,
    power_to_g,
    preset,
    thermal_occupancy,
    validate,
)

TWO_PI = 2 * math.pi


def test_fig2_preset_values(fig2):
    assert fig2.omega_m == pytest.approx(TWO_PI * 300e3)
    assert fig2.kappa == pytest.approx(TWO_PI * 1e6)
    assert fig2.Q == pytest.approx(1e8)
    assert fig2.Gamma == fig2.gamma_m
    assert fig2.J == 0
    assert fig2.g == fig2.G == pytest.approx(math.sqrt(fig2.kappa * fig2.gamma_m) / 2)
    assert preset("fig2").layout is None


def test_fig3_and_appendix_presets(fig3):
    assert fig3.J == pytest.approx(fig3.kappa / math.sqrt(2))
    assert fig3.g0 == pytest.approx(TWO_PI * 300)
    app = preset("appendix")
    assert app.params.T == 300
    assert app.layout.omega_d == pytest.approx(app.params.omega_L + app.params.omega_m)


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        preset("fig9")


@pytest.mark.parametrize("key", ["omega_m", "gamma_m", "kappa"])
def test_strictly_positive_rates(fig2, key):
    raw = fig2.as_dict()
    raw[key] = 0.0
    with pytest.raises(NonPositiveRate):
        validate(raw)


@pytest.mark.parametrize("key", ["Gamma", "J", "g", "G", "T"])
def test_nonnegative_fields(fig2, key):
    raw = fig2.as_dict()
    raw[key] = -1.0
    with pytest.raises(NonPositiveRate):
        validate(raw)


def test_validate_defaults_and_q():
    p = validate({"omega_m": 10.0, "Q": 100.0, "kappa": 5.0})
    assert p.gamma_m == pytest.approx(0.1)
    assert p.Gamma == p.gamma_m


def test_validate_rejects_unknown_and_nonfinite():
    with pytest.raises(ParameterError):
        validate({"omega_m": 1.0, "gamma_m": 1.0, "kappa": 1.0, "bogus": 2})
    with pytest.raises(ParameterError):
        validate({"omega_m": float("nan"), "gamma_m": 1.0, "kappa": 1.0})


def test_for_scheme(fig3):
    assert fig3.for_scheme(Scheme.STANDARD).G == 0
    assert fig3.for_scheme(Scheme.STANDARD).J == 0
    assert fig3.for_scheme(Scheme.RESONANT_CQNC).J == 0
    assert fig3.for_scheme(Scheme.HETERODYNE_CQNC) == fig3


@pytest.mark.parametrize("text,expected", [
    ("std", Scheme.STANDARD), ("cqnc", Scheme.HETERODYNE_CQNC),
    ("resonant-cqnc", Scheme.RESONANT_CQNC), (Scheme.STANDARD, Scheme.STANDARD),
])
def test_scheme_aliases(text, expected):
    assert Scheme.parse(text) is expected


def test_power_conversion_frozen(fig3):
    # P = 2 hbar omega_L kappa (g/g0)**2, evaluated by hand
    g = 172.072116
    expected = 2 * HBAR * fig3.omega_L * fig3.kappa * (g / fig3.g0) ** 2
    assert g_to_power(g, fig3) == pytest.approx(expected, rel=1e-12)
    assert g_to_power(g, fig3) == pytest.approx(2.6645e-14, rel=1e-4)
    assert power_to_g(g_to_power(g, fig3), fig3) == pytest.approx(g, rel=1e-12)
    assert photon_number(g, fig3) == pytest.approx((g / fig3.g0) ** 2)


def test_power_needs_pump_parameters(fig2):
    with pytest.raises(ParameterError):
        g_to_power(1.0, fig2)


def test_thermal_occupancy(fig2):
    occ = thermal_occupancy(300.0, fig2.omega_m)
    assert occ.classical == pytest.approx(K_B * 300 / (HBAR * fig2.omega_m))
    assert occ.classical == pytest.approx(2.0837e7, rel=1e-4)
    assert occ.bose_einstein == pytest.approx(occ.classical - 0.5, rel=1e-9)
    assert thermal_occupancy(0.0, fig2.omega_m) == (0.0, 0.0)


def test_layout_splitting():
    lay = FrequencyLayout.from_cavity(100.0, 3.0)
    assert lay.splitting == pytest.approx(6.0)


def test_load_config(tmp_path):
    path = tmp_path / "p.cfg"
    path.write_text(
        "# resonator\nomega_m_hz = 300e3\nQ: 1e8\nkappa_hz = 1e6\ng = 2.0\nT = 4\n",
        encoding="utf-8",
    )
    p = load_config(path)
    assert p.omega_m == pytest.approx(TWO_PI * 300e3)
    assert p.gamma_m == pytest.approx(p.omega_m / 1e8)
    assert p.T == 4.0


@pytest.mark.parametrize("body", ["omega_m = 1\nomega_m = 2\n", "wat = 1\n", "T_hz = 3\n"])
def test_load_config_errors(tmp_path, body):
    path = tmp_path / "bad.cfg"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_missing_names_path(tmp_path):
    missing = tmp_path / "nope.cfg"
    with pytest.raises(ConfigError, match="nope.cfg"):
        load_config(missing)


def test_params_frozen(fig2):
    with pytest.raises(Exception):
        fig2.g = 3.0
    assert isinstance(fig2.replace(g=3.0), SystemParams)
