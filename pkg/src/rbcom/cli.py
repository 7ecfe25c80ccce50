"""``rbcom-sim``: run a named analysis on a JSON configuration and write CSV/JSON.

Usage::

    rbcom-sim <analysis> [--config PATH] [--out DIR] [--seed N] [--case L120|L10]

Every analysis writes its CSV table(s) plus ``result.json`` (config hash,
summary scalars, warnings and documented deviations from the reference
results) into the output directory. Exit status is 0 on success and 1 on
any model or configuration error, with a JSON error document on stderr.
"""

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .cavity import distance_gain, drive_for_laser_power, laser_power
from .config import ANALYSES, CASES, SystemConfig, config_hash, default_config, from_dict, load_config
from .errors import RBComError
from .link import evaluate_link, frequency_grid, monte_carlo_snr, power_capacity_sweep, snr_db, system_gamma
from .network import bandwidth_3db, mna_transfers, signal_response
from .noise import background_photocurrent, background_power, shot_psd_input
from .pump import pump_power
from .pv_ac import cell_capacitance, dynamic_resistance, small_signal_at
from .pv_dc import iv_curve, open_circuit_voltage, output_vs_photocurrent, photocurrent, solve_operating_point
from .reference import compare, identify_case

FREQ_COLUMNS = ["f_Hz", "H2_signal_dB", "H2_RC_dB", "H2_Rsh_dB", "H2_RL_dB", "H2_r_dB", "H2_Rs_dB"]
NOISE_COLUMNS = [
    "f_Hz",
    "shot_V2Hz",
    "thermal_total_V2Hz",
    "thermal_RC_V2Hz",
    "thermal_Rsh_V2Hz",
    "thermal_RL_V2Hz",
    "thermal_r_V2Hz",
    "thermal_Rs_V2Hz",
]
# column order of the per-source thermal columns above
_SOURCE_ORDER = ("R_C", "R_sh", "R_L", "r", "R_s")


@dataclass
class RunResult:
    analysis: str
    config_hash: str
    summary: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    deviations: list = field(default_factory=list)

    def document(self):
        return {
            "analysis": self.analysis,
            "config_hash": self.config_hash,
            "summary": self.summary,
            "files": self.files,
            "warnings": self.warnings,
            "deviations": [d.as_dict() for d in self.deviations],
        }


def fmt(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".16e")


def csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(path_or_text):
    """Parse a table written by this module into (columns, float array)."""
    text = Path(path_or_text).read_text() if isinstance(path_or_text, Path) else path_or_text
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)


def _db(x):
    with np.errstate(divide="ignore"):
        return 10 * np.log10(x)


def _nominal_op(cfg):
    return solve_operating_point(photocurrent(cfg.run.P_laser, cfg.pv), cfg.network.R_L, cfg.pv)


def _oracle_error(cfg, model):
    w = 2 * np.pi * frequency_grid(cfg)
    closed = signal_response(w, model)
    oracle = mna_transfers(w, model, ("photocurrent",))["photocurrent"]
    return float(np.max(np.abs(closed - oracle) / np.abs(oracle)))


def _iv_curve(cfg, res):
    pv = cfg.pv
    for k, I_ph in enumerate(cfg.run.iv_photocurrents):
        V_oc = open_circuit_voltage(I_ph, pv)
        V, I = iv_curve(I_ph, np.linspace(0.0, V_oc, cfg.run.n_V), pv)
        res.tables[f"iv_curve_{k}.csv"] = csv_text(["V_pv_o", "I_pv_o"], zip(V, I))
        res.summary[f"V_oc_V[{k}]"] = V_oc
        res.summary[f"I_ph_A[{k}]"] = I_ph


def _operating_point(cfg, res):
    op = _nominal_op(cfg)
    res.summary.update(op.as_dict())
    I_ph, I_out = output_vs_photocurrent(cfg.network.R_L, np.linspace(0, cfg.run.I_ph_max, cfg.run.n_I_ph), cfg.pv)
    res.tables["output_vs_photocurrent.csv"] = csv_text(["I_ph", "I_pv_o"], zip(I_ph, I_out))


def _small_signal(cfg, res):
    pv, ac = cfg.pv, cfg.ac_cell
    op = _nominal_op(cfg)
    cell = small_signal_at(op, pv, ac)
    res.summary.update(
        {
            "V_d_V": op.V_d,
            "r_ohm": cell.r,
            "C_F": cell.C,
            "r_physical_ohm": dynamic_resistance(op.V_d, pv),
            "C_physical_F": cell.C_T + cell.C_d,
            "C_T_F": cell.C_T,
            "C_d_F": cell.C_d,
            "calibrated": cell.calibrated,
        }
    )
    grid = np.linspace(0, cfg.run.I_ph_max, cfg.run.n_I_ph)
    rows = []
    for I_ph in grid:
        o = solve_operating_point(float(I_ph), cfg.network.R_L, pv)
        if o.V_d >= ac.V_0:
            break
        rows.append((o.V_pv_o, dynamic_resistance(o.V_d, pv), cell_capacitance(o.V_d, pv, ac)))
    res.tables["small_signal.csv"] = csv_text(["V_pv_o", "r_ohm", "C_farad"], rows)


def _freq_response(cfg, res):
    rep = evaluate_link(cfg)
    res.warnings += rep.warnings
    f = rep.spectra.frequencies
    trans = mna_transfers(2 * np.pi * f, rep.model, _SOURCE_ORDER)
    cols = [f, _db(np.abs(rep.spectra.h_ph.values) ** 2)] + [_db(np.abs(trans[s]) ** 2) for s in _SOURCE_ORDER]
    res.tables["freq_response.csv"] = csv_text(FREQ_COLUMNS, zip(*cols))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res.summary["bandwidth_Hz"] = bandwidth_3db(rep.spectra.h_ph)
    res.warnings += [str(w.message) for w in caught]
    res.summary["peak_H2_V2A2"] = float(np.max(np.abs(rep.spectra.h_ph.values) ** 2))
    res.summary["oracle_max_rel_error"] = _oracle_error(cfg, rep.model)


def _noise(cfg, res):
    rep = evaluate_link(cfg)
    res.warnings += rep.warnings
    sp = rep.spectra
    P_bkg = background_power(cfg.background)
    cols = [sp.frequencies, sp.shot.values, sp.thermal.values] + [sp.thermal_terms[s] for s in _SOURCE_ORDER]
    res.tables["noise.csv"] = csv_text(NOISE_COLUMNS, zip(*cols))
    res.summary.update(
        {
            "P_bkg_W": P_bkg,
            "i_ph_bkg_A": background_photocurrent(cfg.background, cfg.pv.rho),
            "shot_input_A2Hz": shot_psd_input(cfg.run.P_laser, P_bkg, cfg.pv.rho),
            "thermal_convention": cfg.run.thermal_convention,
        }
    )


def _snr_capacity(cfg, res):
    rep = evaluate_link(cfg)
    res.warnings += rep.warnings
    res.summary.update(rep.summary())
    res.summary["I_ph_A"] = rep.operating_point.I_ph
    res.summary["sigma_ph_ac2_A2"] = rep.gamma**2 * cfg.ofdm.sigma_s2
    res.summary["oracle_max_rel_error"] = _oracle_error(cfg, rep.model)
    rows = zip(rep.frequencies / 1e6, snr_db(rep.snr), rep.capacity / 1e6)
    res.tables["snr_capacity.csv"] = csv_text(["f_MHz", "SNR_dB", "capacity_Mbps"], rows)


def _power_sweep(cfg, res):
    run = cfg.run
    grid = np.linspace(run.P_laser_min, run.P_laser_max, run.n_P_laser)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        points = power_capacity_sweep(grid, cfg)
    res.warnings += sorted({str(w.message) for w in caught})
    rows = [(p.P_laser, p.P_chg, p.capacity / 1e9) for p in points]
    res.tables["power_sweep.csv"] = csv_text(["P_laser_W", "P_chg_W", "capacity_Gbps"], rows)
    res.summary["max_P_chg_W"] = max(p.P_chg for p in points)
    res.summary["max_capacity_bps"] = max(p.capacity for p in points)


def _distance_sweep(cfg, res):
    run, cav = cfg.run, cfg.cavity
    # drive fixed at the level that gives the nominal laser power
    I_in = drive_for_laser_power(run.P_laser, cfg.pump, cav, run.distance)
    P_pump = pump_power(I_in, cfg.pump)
    physical = from_dict({"cavity": {"eta_d_override": None}}, base=cfg).cavity
    d = np.logspace(np.log10(run.d_min), np.log10(run.d_max), run.n_d)
    f_d = distance_gain(d, physical)
    P = laser_power(P_pump, d, physical)
    res.tables["distance_sweep.csv"] = csv_text(["d_m", "f_d", "P_laser_W"], zip(d, f_d, P))
    res.summary.update({"I_in_A": I_in, "P_pump_W": P_pump})


def _monte_carlo(cfg, res):
    mc = monte_carlo_snr(cfg, seed=cfg.run.seed)
    mc_db, an_db = snr_db(mc.snr), snr_db(mc.snr_analytic)
    rows = zip(mc.frequencies / 1e6, mc_db, an_db, mc_db - an_db)
    res.tables["monte_carlo.csv"] = csv_text(["f_MHz", "SNR_dB_mc", "SNR_dB_analytic", "delta_dB"], rows)
    res.summary.update(
        {
            "seed": cfg.run.seed,
            "sample_rate_Hz": mc.sample_rate,
            "n_samples": mc.n_samples,
            "fraction_within_1dB": float(np.mean(np.abs(mc_db - an_db) <= 1.0)),
            "max_abs_delta_dB": float(np.max(np.abs(mc_db - an_db))),
        }
    )


DISPATCH = {
    "iv-curve": _iv_curve,
    "operating-point": _operating_point,
    "small-signal": _small_signal,
    "freq-response": _freq_response,
    "noise": _noise,
    "snr-capacity": _snr_capacity,
    "power-sweep": _power_sweep,
    "distance-sweep": _distance_sweep,
    "monte-carlo": _monte_carlo,
}


def run_analysis(cfg: SystemConfig, analysis=None, out_dir=None) -> RunResult:
    """Run ``analysis`` (default ``cfg.run.analysis``); write files if ``out_dir`` is given."""
    analysis = analysis or cfg.run.analysis
    if analysis not in DISPATCH:
        raise ValueError(f"unknown analysis {analysis!r}; expected one of {', '.join(ANALYSES)}")
    res = RunResult(analysis=analysis, config_hash=config_hash(cfg))
    res.summary["gamma"] = system_gamma(cfg)
    DISPATCH[analysis](cfg, res)
    res.warnings = sorted(set(res.warnings))
    res.deviations = compare(res.summary, identify_case(cfg))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in res.tables.items():
            (out / name).write_text(text)
            # names relative to out_dir keep result.json independent of where it was written
            res.files.append(name)
        (out / "result.json").write_text(json.dumps(res.document(), indent=2, default=float) + "\n")
    return res


def build_parser():
    p = argparse.ArgumentParser(prog="rbcom-sim", description="Resonant-beam SWIPT link simulator")
    p.add_argument("analysis", choices=ANALYSES)
    p.add_argument("--config", type=Path, help="JSON configuration (defaults to the built-in parameter table)")
    p.add_argument("--out", type=Path, default=Path("rbcom-out"), help="output directory")
    p.add_argument("--seed", type=int, help="random seed (overrides run.seed)")
    p.add_argument("--case", choices=sorted(CASES), help="apply a wire-inductance case")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else default_config(args.case or "L120")
        if args.case:
            cfg = cfg.with_case(args.case)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ValueError("--seed must be an unsigned 64-bit integer")
            cfg = from_dict({"run": {"seed": args.seed}}, base=cfg)
        res = run_analysis(cfg, args.analysis, args.out)
    except (RBComError, ValueError, ArithmeticError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        field_name = getattr(exc, "field", None)
        if field_name:
            err["field"] = field_name
        print(json.dumps(err), file=sys.stderr)
        return 1
    for d in res.deviations:
        print(f"deviation: {d}", file=sys.stderr)
    print(json.dumps(res.document(), indent=2, default=float))
    return 0


if __name__ == "__main__":
    sys.exit(main())
