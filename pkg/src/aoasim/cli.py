"""Command-line interface.

Subcommands:
    simulate  run one scenario, emit spectrum.csv and report.json
    sweep     rerun a Gaussian-pattern scenario over a list of HPBWs,
              emit sweep.csv and report.json
    fit       score the simulated spectrum against empirical data (LSE)
    taps      extract delay taps from a raw PDP CSV

All outputs are deterministic for a fixed scenario and seed.  Failures
print a machine-readable JSON error record to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .estimation import lse, rms_angle_spread_paths
from .montecarlo import generate_trial
from .scenario import (
    DEFAULT_PATHS_PER_TAP,
    DEFAULT_PROMINENCE_DB,
    ScenarioConfig,
    extract_taps,
    hpbw_sweep,
    run_simulation,
)

_DEG = math.pi / 180.0
_US = 1e-6


def _load_config(args):
    config = ScenarioConfig.from_file(args.scenario)
    overrides = {}
    if getattr(args, "trials", None) is not None:
        overrides["trials"] = args.trials
    if getattr(args, "bins", None) is not None:
        overrides["bins"] = args.bins
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    return replace(config, **overrides) if overrides else config


def _check_spectrum(spectrum):
    # Spot check before anything is written; a defect means a bug upstream.
    if not spectrum.is_normalized():
        raise ValueError(
            f"output spectrum failed normalization "
            f"(defect {spectrum.normalization_defect():.3e})"
        )


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_spectrum_csv(path, spectrum):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["angle_deg", "pdf_per_deg"])
        for center, density in zip(spectrum.bin_centers, spectrum.density):
            writer.writerow([repr(float(center) / _DEG), repr(float(density) * _DEG)])


def _read_csv_pairs(path):
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if rows:
                    raise ValueError(f"malformed CSV row in {path}: {row!r}")
                # otherwise: header row, skip
    if not rows:
        raise ValueError(f"no numeric rows found in {path}")
    return rows


def _cmd_simulate(args):
    config = _load_config(args)
    report = run_simulation(config, workers=args.workers)
    _check_spectrum(report.averaged_spectrum)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = report.to_json_dict()
    payload["version"] = __version__
    if args.per_path_spread:
        spreads = [
            rms_angle_spread_paths(generate_trial(config, i))
            for i in range(config.trials)
        ]
        payload["per_path_spread_deg"] = [s / _DEG for s in spreads]
        payload["per_path_spread_mean_deg"] = sum(spreads) / len(spreads) / _DEG
    _write_spectrum_csv(out / "spectrum.csv", report.averaged_spectrum)
    _write_json(out / "report.json", payload)
    print(
        f"angle spread: {report.angle_spread / _DEG:.3f} deg "
        f"({config.trials} trials, {config.bins} bins)"
    )
    return 0


def _cmd_sweep(args):
    config = _load_config(args)
    hpbws = [float(tok) for tok in args.hpbw.split(",") if tok.strip()]
    points = hpbw_sweep(config, hpbws, workers=args.workers)
    for point in points:
        _check_spectrum(point.report.averaged_spectrum)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["hpbw_deg", "as_deg"])
        for point in points:
            writer.writerow([repr(point.hpbw_deg), repr(point.angle_spread / _DEG)])
    payload = {
        "version": __version__,
        "scenario": config.to_json_dict(),
        "points": [
            {
                "hpbw_deg": point.hpbw_deg,
                "angle_spread_deg": point.angle_spread / _DEG,
                "report": point.report.to_json_dict(),
            }
            for point in points
        ],
    }
    _write_json(out / "report.json", payload)
    for point in points:
        print(f"hpbw {point.hpbw_deg:7.1f} deg -> angle spread {point.angle_spread / _DEG:.3f} deg")
    return 0


def _cmd_fit(args):
    config = _load_config(args)
    report = run_simulation(config, workers=args.workers)
    _check_spectrum(report.averaged_spectrum)
    empirical_deg = _read_csv_pairs(args.empirical)
    # CSV columns are angle_deg, density_per_deg; convert to per-radian.
    empirical = [(a * _DEG, d / _DEG) for a, d in empirical_deg]
    value = lse(report.averaged_spectrum, empirical)
    result = {
        "lse": value,
        "points": len(empirical),
        "trials": config.trials,
        "bins": config.bins,
        "angle_spread_deg": report.angle_spread / _DEG,
    }
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def _cmd_taps(args):
    samples_us = _read_csv_pairs(args.pdp)
    profile = extract_taps(
        [(d * _US, p) for d, p in samples_us],
        min_prominence_db=args.prominence,
        paths_per_tap=args.paths,
    )
    payload = {
        "taps": [
            {"delay_us": t.delay / _US, "power": t.power, "paths": t.path_count}
            for t in profile.taps
        ],
        "rms_delay_spread_us": profile.rms_delay_spread() / _US,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def _add_run_options(parser):
    parser.add_argument("--trials", type=int, default=None, help="override trial count")
    parser.add_argument("--bins", type=int, default=None, help="override histogram bin count")
    parser.add_argument("--seed", type=int, default=None, help="override master seed")
    parser.add_argument("--workers", type=int, default=1,
                        help="concurrent trial workers (output is identical for any value)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="aoasim",
        description="Monte Carlo simulator for multipath arrival-angle distributions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario and emit spectrum data")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    _add_run_options(p)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--per-path-spread", action="store_true",
                   help="also report the unbinned per-trial angle spread")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("sweep", help="angle spread versus HPBW for a Gaussian pattern")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--hpbw", required=True, help="comma-separated HPBW list in degrees")
    _add_run_options(p)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("fit", help="least-square error against empirical spectrum data")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--empirical", required=True,
                   help="CSV with columns angle_deg, density_per_deg")
    _add_run_options(p)
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("taps", help="extract delay taps from a PDP CSV")
    p.add_argument("--pdp", required=True, help="CSV with columns delay_us, power_linear")
    p.add_argument("--prominence", type=float, default=DEFAULT_PROMINENCE_DB,
                   help="peak prominence threshold in dB")
    p.add_argument("--paths", type=int, default=DEFAULT_PATHS_PER_TAP,
                   help="path count assigned to each extracted tap")
    p.add_argument("--out", default=None, help="write the tap JSON here instead of stdout")
    p.set_defaults(handler=_cmd_taps)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        record = {"error": str(exc), "type": type(exc).__name__, "command": args.command}
        sys.stderr.write(json.dumps(record) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
