"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the report.
"""

import math
import time

import numpy as np
import pytest

from cqnc import validation
from cqnc.optimum import (
    default_power_grid,
    find_crossing,
    golden_minimize_standard,
    optimal_g_standard,
    power_sweep,
)
from cqnc.oracle import oracle_spectrum
from cqnc.params import Scheme, preset
from cqnc.precool import CouplingMode, appendix_preset, precool_summary
from cqnc.spectra import s_add_cqnc, s_add_standard, s_cqnc_limit, shot_bracket, thermal_force_psd


def report(criterion, passed, detail):
    print(f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}")
    assert passed, detail


@pytest.fixture(scope="module")
def fig2():
    return preset("fig2").params


@pytest.fixture(scope="module")
def fig3():
    return preset("fig3").params


def test_criterion_1_sql_anchor(fig2):
    wm, gm = fig2.omega_m, fig2.gamma_m
    on = optimal_g_standard(wm, fig2)
    s_on = s_add_standard(wm, fig2.replace(g=on.g_opt), T=0.0).total[0]
    off = optimal_g_standard(wm + 4 * gm, fig2)
    s_off = s_add_standard(wm + 4 * gm, fig2.replace(g=off.g_opt), T=0.0).total[0]
    # independent numerical optimum
    _, s_on_num = golden_minimize_standard(wm, fig2)
    _, s_off_num = golden_minimize_standard(wm + 4 * gm, fig2)
    ok = (abs(s_on - 1) <= 0.005 and abs(s_on_num - 1) <= 0.005
          and abs(s_off / math.sqrt(65) - 1) <= 0.01 and abs(s_off_num / math.sqrt(65) - 1) <= 0.01)
    report(1, ok, f"S(omega_m) = {s_on:.6f} (golden {s_on_num:.6f}), "
                  f"S(omega_m + 4 gamma_m) = {s_off:.6f} (golden {s_off_num:.6f}), sqrt(65) = 8.062258")


def test_criterion_2_cqnc_limit_anchor(fig2):
    val = s_cqnc_limit(fig2.omega_m, fig2)
    correction = fig2.Gamma**2 / (4 * fig2.omega_m**2)
    ok = abs(val - 1) <= correction + 1e-15 and abs(val - 1) < 1e-8
    report(2, ok, f"s_cqnc_limit(omega_m) - 1 = {val - 1:.3e}, bound {correction:.3e}")


def _scaled_kappa(params, factor):
    # same mechanics, broader cavity, so the band around omega_m satisfies omega << kappa
    k = params.kappa * factor
    g = math.sqrt(k * params.gamma_m) / 2
    return params.replace(kappa=k, g=g, G=g)


def test_criterion_3_oracle_equivalence(fig2, fig3):
    worst_cqnc = 0.0
    smooth = True
    for params, scheme in ((fig2, Scheme.RESONANT_CQNC), (fig3, Scheme.HETERODYNE_CQNC),
                           (fig3, Scheme.RESONANT_CQNC)):
        omega, dev = validation.oracle_vs_cqnc_closed_form(params, scheme, points=201)
        worst_cqnc = max(worst_cqnc, dev.max())
        x = (2 * omega[1:] / params.kappa) ** 2
        ratio = dev[1:] / x
        # quadratic leading order: dev / (2w/kappa)**2 nearly constant across the band
        smooth &= bool(np.all(np.diff(dev) >= 0) and ratio.max() / ratio.min() - 1 <= 0.02)

    worst_std = 0.0
    for params in (fig2, _scaled_kappa(fig2, 20.0)):
        if params is fig2:
            omega = np.array([fig2.omega_m])
        else:
            omega = params.omega_m * np.linspace(0.8, 1.2, 41)
        o = oracle_spectrum(omega, params, Scheme.STANDARD, T=0.0).total
        c = s_add_standard(omega, params, T=0.0).total
        worst_std = max(worst_std, float(np.max(np.abs(o - c) / o)))

    grid = np.linspace(0.0, 0.05 * fig3.kappa, 10_000)
    t0 = time.perf_counter()
    oracle_spectrum(grid, fig3, Scheme.HETERODYNE_CQNC, T=0.0)
    elapsed = time.perf_counter() - t0

    ok = worst_cqnc <= 0.02 and worst_std <= 0.05 and smooth and elapsed < 5.0
    report(3, ok, f"CQNC max dev {worst_cqnc:.4f} (<= 0.02), standard max dev {worst_std:.4f} "
                  f"(<= 0.05), smooth (2w/kappa)^2 growth {smooth}, 1e4 points in {elapsed:.2f} s")


def test_criterion_4_backaction_cancellation():
    drop, bound = validation.cancellation_drop()
    slope = validation.standard_backaction_slope()
    ok = drop >= bound and abs(slope - 2.0) <= 0.01
    report(4, ok, f"x_c channel drop {drop:.6f} for 10x smaller Gamma = gamma_m "
                  f"(>= 1e4 up to O(Gamma^2/omega_m^2): {bound:.6f}); standard slope {slope:.5f}")


def test_criterion_5_bracket_anchors(fig3):
    het_bracket = shot_bracket(fig3.kappa / math.sqrt(2), fig3.kappa)
    res_bracket = shot_bracket(0.0, fig3.kappa)
    w = np.array([0.5, 1.0, 1.5]) * fig3.omega_m
    het = s_add_cqnc(w, fig3, T=0.0, scheme=Scheme.HETERODYNE_CQNC).shot
    res = s_add_cqnc(w, fig3, T=0.0, scheme=Scheme.RESONANT_CQNC).shot
    ratio = het / res
    ok = het_bracket == 20.25 and res_bracket == 0.25 and np.allclose(ratio, 81.0, rtol=1e-12)
    report(5, ok, f"bracket(kappa/sqrt2) = {het_bracket}, bracket(0) = {res_bracket}, "
                  f"shot ratio {ratio.min():.12g}..{ratio.max():.12g}")


def test_criterion_6_fig3_shapes(fig3):
    wm = fig3.omega_m
    powers, std = power_sweep(wm, fig3, Scheme.STANDARD)
    i = int(np.argmin(std))
    d = np.diff(std)
    unique = 0 < i < len(std) - 1 and np.all(d[:i] < 0) and np.all(d[i:] > 0)
    minimum_ok = abs(std[i] - 1) <= 0.005

    monotone = True
    for w in (wm, wm + 4 * fig3.gamma_m):
        for scheme in (Scheme.RESONANT_CQNC, Scheme.HETERODYNE_CQNC):
            _, s = power_sweep(w, fig3, scheme)
            monotone &= bool(np.all(np.diff(s) <= 0))

    w_det = wm + 4 * fig3.gamma_m
    grid = default_power_grid(w_det, fig3)
    crossings = {}
    for scheme in (Scheme.RESONANT_CQNC, Scheme.HETERODYNE_CQNC):
        crossings[scheme.value] = find_crossing(w_det, fig3, scheme, grid[0], grid[-1])
    finite = all(math.isfinite(p) and grid[0] < p < grid[-1] for p in crossings.values())

    ok = unique and minimum_ok and monotone and finite
    report(6, ok, f"standard interior minimum {std[i]:.6f} at P = {powers[i]:.4e} W "
                  f"(unique {unique}); CQNC monotone {monotone}; crossings "
                  + ", ".join(f"{k} {v:.4e} W" for k, v in crossings.items()))


def test_criterion_7_thermal_term(fig2, fig3):
    check = validation.check_thermal_linearity()
    n300 = thermal_force_psd(300.0, fig2.omega_m)
    s0 = s_add_standard(fig2.omega_m, fig2, T=0.0).total[0]
    s300 = s_add_standard(fig2.omega_m, fig2, T=300.0).total[0]
    added = s300 - s0
    ok = check.passed and abs(added / 2.08e7 - 1) <= 0.005
    report(7, ok, f"linearity worst relative error {check.worst_case:.2e} (<= 1e-12); "
                  f"fig2 thermal at 300 K = {added:.6e} (2.08e7 +/- 0.5%)")


def test_criterion_8_appendix():
    sys_p, pre = appendix_preset(coupling_mode=CouplingMode.OPTOMECHANICAL)
    opt = precool_summary(sys_p, pre, T=300.0)
    _, pre_w = appendix_preset(coupling_mode=CouplingMode.AS_WRITTEN)
    written = precool_summary(sys_p, pre_w, T=300.0)
    ratio = opt["Gamma_opt_over_omega_m"]
    ok = 0.03 <= ratio <= 3.0 and opt["n_min"] < 1
    report(8, ok, f"optomechanical Gamma_opt/omega_m = {ratio:.4f} (0.03..3), n_min = {opt['n_min']:.4f}; "
                  f"as-written Gamma_opt/omega_m = {written['Gamma_opt_over_omega_m']:.3e} "
                  f"(inconsistent with 0.3)")


def test_criterion_9_property_suite():
    t0 = time.perf_counter()
    good = validation.run_all(seed=42)
    bad = validation.run_all(seed=42, mismatch=0.5)
    elapsed = time.perf_counter() - t0
    status = {c["check"]: c["status"] for c in bad["checks"]}
    ok = (good["passed"] and not bad["passed"]
          and status["cancellation_scaling"] == "fail" and elapsed < 60)
    report(9, ok, f"default suite passed {good['passed']}; G = 0.5 g cancellation check "
                  f"{status['cancellation_scaling']}; {elapsed:.2f} s for both runs")
