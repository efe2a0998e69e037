"""Command-line interface: ``cqnc <subcommand> ...``.

Exit codes: 0 success, 1 failed anchor/property check, 2 usage or
configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import validation
from .errors import DivisionSingularity, ParameterError, SingularSystem
from .optimum import (
    default_power_grid,
    find_crossing,
    optimal_g_cqnc,
    optimal_g_standard,
    power_sweep,
)
from .oracle import oracle_spectrum
from .params import (
    TWO_PI,
    Scheme,
    SystemParams,
    g_to_power,
    load_config,
    photon_number,
    power_to_g,
    preset,
)
from .precool import CouplingMode, appendix_preset, precool_summary
from .spectra import NoiseBudget, f_add_components, s_add, s_cqnc_limit, s_sql, shot_bracket

SCHEMA_VERSION = 1

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """9 significant digits, locale independent."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(float(x), ".9g")


_UNITS = {
    "wm": lambda p: p.omega_m,
    "gm": lambda p: p.gamma_m,
    "kappa": lambda p: p.kappa,
    "k": lambda p: p.kappa,
    "mhz": lambda p: TWO_PI * 1e6,
    "khz": lambda p: TWO_PI * 1e3,
    "hz": lambda p: TWO_PI,
    "rad": lambda p: 1.0,
}
_TERM = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:e[-+]?\d+)?)\s*([a-z]*)\s*$", re.I)


def parse_frequency(text: str, params: SystemParams) -> float:
    """Angular frequency from e.g. ``0.5wm``, ``1wm+4gm``, ``300khz``, ``1e6rad``.

    A bare number is taken as rad/s.
    """
    total = 0.0
    for term in re.split(r"(?<=[a-z\d])\s*\+\s*", text.strip(), flags=re.I):
        m = _TERM.match(term)
        if not m or m.group(2).lower() not in _UNITS | {"": None}:
            raise UsageError(f"cannot parse frequency {text!r}")
        unit = m.group(2).lower() or "rad"
        total += float(m.group(1)) * _UNITS[unit](params)
    return total


def _grid(start: float, stop: float, points: int, spacing: str) -> np.ndarray:
    if points < 2:
        raise UsageError("need at least 2 points")
    if not start < stop:
        raise UsageError("start must be below stop")
    if spacing == "log":
        if start <= 0:
            raise UsageError("log spacing needs a positive start")
        return np.logspace(math.log10(start), math.log10(stop), points)
    return np.linspace(start, stop, points)


def _schemes(text: str) -> List[Scheme]:
    out = []
    for item in text.split(","):
        if item.strip():
            try:
                out.append(Scheme.parse(item))
            except ParameterError as exc:
                raise UsageError(str(exc)) from None
    if not out:
        raise UsageError("no scheme given")
    return out


def _load_params(args, default_preset: str = "fig2") -> SystemParams:
    if args.config and args.preset:
        raise UsageError("give either --preset or --config")
    if args.config:
        params = load_config(args.config)
    else:
        params = preset(args.preset or default_preset).params
    if getattr(args, "g", None) is not None:
        params = params.replace(g=args.g, G=args.g if args.G is None else args.G)
    elif getattr(args, "G", None) is not None:
        params = params.replace(G=args.G)
    if getattr(args, "temperature", None) is not None:
        params = params.replace(T=args.temperature)
    return params


def _check_finite(rows: List[dict]):
    for row in rows:
        for key, value in row.items():
            if isinstance(value, (float, np.floating)) and not math.isfinite(value):
                raise FloatingPointError(f"non-finite {key} at row {row}")


def _write(rows: List[dict], columns: Sequence[str], args, command: str, out=None):
    out = out or sys.stdout
    _check_finite(rows)
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "rows": rows}
        text = json.dumps(doc, indent=1, sort_keys=False) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row.get(c)) for c in columns])
        text = buf.getvalue()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _budget_rows(budget: NoiseBudget, scheme: Scheme, x_name="omega_rad_s", x=None):
    x = budget.omega if x is None else x
    for i in range(len(x)):
        yield {
            x_name: x[i],
            "scheme": scheme.value,
            "total": budget.total[i],
            "thermal": budget.thermal[i],
            "shot": budget.shot[i],
            "backaction": budget.backaction[i],
            "atomic": budget.atomic[i],
            "normalization": budget.normalization,
        }


def cmd_spectrum(args) -> int:
    params = _load_params(args)
    start = parse_frequency(args.start, params)
    stop = parse_frequency(args.stop, params)
    omega = _grid(start, stop, args.points, args.spacing)
    rows = []
    for scheme in _schemes(args.scheme):
        if args.general:
            budget = f_add_components(omega, params.for_scheme(scheme))
        else:
            budget = s_add(omega, params, scheme)
        if args.si:
            budget = budget.to_si()
        block = list(_budget_rows(budget, scheme))
        if args.oracle:
            ref = oracle_spectrum(omega, params, scheme)
            if args.si:
                ref = ref.to_si()
            for row, o in zip(block, ref.total):
                row["oracle_total"] = o
                row["rel_dev"] = abs(row["total"] - o) / o
        rows.extend(block)
    columns = ["omega_rad_s", "scheme", "total", "thermal", "shot", "backaction", "atomic"]
    if args.oracle:
        columns += ["oracle_total", "rel_dev"]
    _write(rows, columns, args, "spectrum")
    return EXIT_OK


def cmd_power_sweep(args) -> int:
    params = _load_params(args, default_preset="fig3")
    omega = parse_frequency(args.omega, params)
    if args.start is None and args.stop is None:
        powers = default_power_grid(omega, params, args.points)
    else:
        if args.start is None or args.stop is None:
            raise UsageError("give both --from and --to")
        powers = _grid(args.start, args.stop, args.points, "log")
    rows = []
    gs = np.atleast_1d(power_to_g(powers, params))
    for scheme in _schemes(args.scheme):
        for P, g in zip(powers, gs):
            b = s_add(omega, params.replace(g=float(g), G=float(g)), scheme, T=0.0)
            rows.append({
                "power_W": P, "scheme": scheme.value, "g_rad_s": g,
                "photon_number": photon_number(g, params), "total": b.total[0],
                "shot": b.shot[0], "backaction": b.backaction[0], "atomic": b.atomic[0],
            })
    columns = ["power_W", "scheme", "g_rad_s", "photon_number", "total", "shot",
               "backaction", "atomic"]
    _write(rows, columns, args, "power-sweep")
    return EXIT_OK


def cmd_sql(args) -> int:
    params = _load_params(args)
    omega = _grid(parse_frequency(args.start, params), parse_frequency(args.stop, params),
                  args.points, args.spacing)
    rows = []
    for w in omega:
        opt = optimal_g_standard(w, params)
        rows.append({
            "omega_rad_s": w, "s_sql": s_sql(w, params), "s_cqnc_limit": s_cqnc_limit(w, params),
            "g_opt_rad_s": opt.g_opt, "power_opt_W": opt.power_opt,
        })
    _write(rows, ["omega_rad_s", "s_sql", "s_cqnc_limit", "g_opt_rad_s", "power_opt_W"],
           args, "sql")
    return EXIT_OK


class _Anchors:
    def __init__(self, out):
        self.out = out
        self.ok = True

    def check(self, name: str, value: float, passed: bool, expect: str):
        self.ok &= bool(passed)
        self.out.write(f"{'PASS' if passed else 'FAIL'} {name}: {fmt(value)} (expected {expect})\n")

    def info(self, name: str, value):
        self.out.write(f"INFO {name}: {fmt(value) if not isinstance(value, str) else value}\n")


def _csv_file(path: Path, columns, rows):
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row.get(c)) for c in columns])


def reproduce_fig2(outdir: Path, anchors: _Anchors):
    params, _ = preset("fig2")
    wm, gm = params.omega_m, params.gamma_m
    omega = np.union1d(np.linspace(0.1, 2.0, 1901) * wm, [wm, wm + 4 * gm])
    standard = np.array([optimal_g_standard(w, params).s_min for w in omega])
    limit = s_cqnc_limit(omega, params)
    _csv_file(outdir / "fig2.csv", ["omega_rad_s", "standard_optimal", "cqnc_limit"],
              [{"omega_rad_s": w, "standard_optimal": s, "cqnc_limit": c}
               for w, s, c in zip(omega, standard, limit)])
    i = int(np.argmin(standard))
    anchors.check("fig2 standard minimum", standard[i], abs(standard[i] - 1) <= 5e-3
                  and omega[i] == wm, "1.000 +/- 0.5% at omega_m")
    s_det = optimal_g_standard(wm + 4 * gm, params).s_min
    anchors.check("fig2 standard at omega_m + 4 gamma_m", s_det,
                  abs(s_det / math.sqrt(65) - 1) <= 0.01, "sqrt(65) = 8.062 +/- 1%")
    lim = s_cqnc_limit(wm, params)
    anchors.check("fig2 CQNC limit at omega_m", lim, abs(lim - 1) <= 1e-8, "1 within 1e-8")


def reproduce_fig3(outdir: Path, anchors: _Anchors, detuned: bool):
    params, _ = preset("fig3")
    wm, gm = params.omega_m, params.gamma_m
    omega = wm + 4 * gm if detuned else wm
    tag = "fig3b" if detuned else "fig3a"
    powers = default_power_grid(omega, params, 801)
    curves = {s: power_sweep(omega, params, s, powers)[1] for s in Scheme}
    _csv_file(outdir / f"{tag}.csv",
              ["power_W", "photon_number", "standard", "resonant", "heterodyne"],
              [{"power_W": P, "photon_number": photon_number(power_to_g(P, params), params),
                **{s.value: curves[s][i] for s in Scheme}} for i, P in enumerate(powers)])
    std = curves[Scheme.STANDARD]
    i = int(np.argmin(std))
    interior = 0 < i < len(std) - 1
    target = 1.0 if not detuned else math.sqrt(65)
    tol = 5e-3 if not detuned else 0.01
    anchors.check(f"{tag} standard interior minimum", std[i],
                  interior and abs(std[i] / target - 1) <= tol,
                  f"{target:.4g} +/- {tol:.1%}, interior")
    for s in (Scheme.RESONANT_CQNC, Scheme.HETERODYNE_CQNC):
        mono = bool(np.all(np.diff(curves[s]) <= 0))
        anchors.check(f"{tag} {s.value} monotone nonincreasing", float(mono), mono, "1")
    ratio = shot_bracket(params.J, params.kappa) / shot_bracket(0.0, params.kappa)
    anchors.check(f"{tag} heterodyne/resonant shot ratio", ratio, abs(ratio - 81) <= 1e-12, "81")
    asym = optimal_g_cqnc(omega, params).s_min
    anchors.check(f"{tag} CQNC asymptote", asym, abs(asym - 1) <= 0.01, "1.0 +/- 1%")
    if detuned:
        for s in (Scheme.RESONANT_CQNC, Scheme.HETERODYNE_CQNC):
            try:
                p_cross = find_crossing(omega, params, s, powers[0], powers[-1] * 1e4)
                anchors.check(f"{tag} {s.value} crosses below standard at P [W]", p_cross,
                              math.isfinite(p_cross), "finite")
            except ValueError:
                anchors.check(f"{tag} {s.value} crosses below standard", float("nan"), False,
                              "finite crossing")


def reproduce_appendix(outdir: Path, anchors: _Anchors, gamma_e: float = TWO_PI * 6e6):
    rows = []
    for mode in CouplingMode:
        params, pre = appendix_preset(gamma_e, mode)
        rows.append(precool_summary(params, pre))
    (outdir / "appendix.json").write_text(
        json.dumps({"schema_version": SCHEMA_VERSION, "results": rows}, indent=1) + "\n",
        encoding="utf-8")
    opto = next(r for r in rows if r["coupling_mode"] == CouplingMode.OPTOMECHANICAL.value)
    ratio = opto["Gamma_opt_over_omega_m"]
    anchors.info("appendix |<d>|", opto["d_ss_abs"])
    anchors.check("appendix Gamma_opt/omega_m (optomechanical)", ratio,
                  0.03 <= ratio <= 3.0, "0.3 within a factor of 10")
    anchors.check("appendix n_min (optomechanical, T = 300 K)", opto["n_min"],
                  opto["n_min"] < 1, "< 1")
    written = next(r for r in rows if r["coupling_mode"] == CouplingMode.AS_WRITTEN.value)
    anchors.info("appendix Gamma_opt/omega_m (as-written G0 coupling)",
                 written["Gamma_opt_over_omega_m"])
    anchors.info("appendix n_min (as-written G0 coupling)", written["n_min"])
    anchors.info("note", "as-written coupling is orders of magnitude from Gamma_opt ~ 0.3 omega_m")


def cmd_reproduce(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    anchors = _Anchors(sys.stdout)
    figures = ["fig2", "fig3a", "fig3b", "appendix"] if args.figure == "all" else [args.figure]
    for fig in figures:
        if fig == "fig2":
            reproduce_fig2(outdir, anchors)
        elif fig in ("fig3a", "fig3b"):
            reproduce_fig3(outdir, anchors, detuned=fig == "fig3b")
        else:
            reproduce_appendix(outdir, anchors)
    sys.stdout.write(f"SUMMARY {'PASS' if anchors.ok else 'FAIL'}\n")
    return EXIT_OK if anchors.ok else EXIT_CHECK


def cmd_precool(args) -> int:
    modes = list(CouplingMode) if args.mode == "both" else [CouplingMode(args.mode)]
    rows = []
    for mode in modes:
        params, pre = appendix_preset(TWO_PI * args.gamma_e_mhz * 1e6, mode,
                                      Gamma=args.Gamma)
        if args.power is not None:
            pre = pre.replace(P=args.power)
        rows.append(precool_summary(params, pre, T=args.temperature))
    json.dump({"schema_version": SCHEMA_VERSION, "results": rows}, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    start = time.perf_counter()
    report = validation.run_all(seed=args.seed, mismatch=args.inject_mismatch)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    sys.stderr.write(f"validate: {time.perf_counter() - start:.2f} s\n")
    return EXIT_OK if report["passed"] else EXIT_CHECK


def _add_param_source(p):
    p.add_argument("--preset", choices=["fig2", "fig3", "appendix"],
                   help="named parameter set (default fig2; fig3 for power-sweep)")
    p.add_argument("--config", help="key = value parameter file")


def _add_output(p):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqnc", description="Force-noise spectra of an atom-assisted CQNC optomechanical sensor")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="added-noise spectrum over frequency")
    _add_param_source(p)
    p.add_argument("--scheme", default="standard,cqnc",
                   help="comma list of standard, resonant, heterodyne (cqnc = heterodyne)")
    p.add_argument("--from", dest="start", default="0.5wm",
                   help="start frequency, e.g. 0.5wm, 300khz, 1e6rad")
    p.add_argument("--to", dest="stop", default="1.5wm")
    p.add_argument("-n", "--points", type=int, default=201)
    p.add_argument("--spacing", choices=["linear", "log"], default="linear")
    p.add_argument("--temperature", type=float, help="bath temperature in K")
    p.add_argument("--g", type=float, help="mechanical coupling g in rad/s (sets G too)")
    p.add_argument("--G", type=float, help="atomic coupling G in rad/s")
    p.add_argument("--oracle", action="store_true", help="add Langevin-oracle comparison")
    p.add_argument("--general", action="store_true",
                   help="use the general closed form instead of the low-frequency one")
    p.add_argument("--si", action="store_true", help="output in N^2/Hz (needs m)")
    _add_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("power-sweep", help="added noise versus drive power at T = 0")
    _add_param_source(p)
    p.add_argument("--scheme", default="standard,resonant,heterodyne")
    p.add_argument("--omega", default="1wm", help="Fourier frequency, e.g. 1wm+4gm")
    p.add_argument("--from", dest="start", type=float, help="lowest power in W")
    p.add_argument("--to", dest="stop", type=float, help="highest power in W")
    p.add_argument("-n", "--points", type=int, default=801)
    _add_output(p)
    p.set_defaults(func=cmd_power_sweep)

    p = sub.add_parser("sql", help="standard quantum limit and CQNC floor over frequency")
    _add_param_source(p)
    p.add_argument("--from", dest="start", default="0.5wm")
    p.add_argument("--to", dest="stop", default="1.5wm")
    p.add_argument("-n", "--points", type=int, default=201)
    p.add_argument("--spacing", choices=["linear", "log"], default="linear")
    _add_output(p)
    p.set_defaults(func=cmd_sql)

    p = sub.add_parser("reproduce", help="regenerate figure data and check anchor values")
    p.add_argument("figure", choices=["fig2", "fig3a", "fig3b", "appendix", "all"])
    p.add_argument("--outdir", default="reproduce_out")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("precool", help="EIT precooling rates and final occupancy")
    p.add_argument("--gamma-e-mhz", type=float, default=6.0,
                   help="excited-state linewidth / 2pi in MHz")
    p.add_argument("--mode", choices=["optomechanical", "as-written", "both"], default="both")
    p.add_argument("--power", type=float, help="input power in W (default 24e-6)")
    p.add_argument("--temperature", type=float, help="bath temperature in K (default 300)")
    p.add_argument("--Gamma", type=float, help="ground-state coherence decay in rad/s")
    p.set_defaults(func=cmd_precool)

    p = sub.add_parser("validate", help="run the invariant suite, JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-mismatch", type=float, metavar="RATIO",
                   help="negative control: set G = RATIO * g in the cancellation check")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        sys.stderr.write(f"cqnc {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (SingularSystem, DivisionSingularity, FloatingPointError) as exc:
        sys.stderr.write(f"cqnc {args.command}: numerical error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
