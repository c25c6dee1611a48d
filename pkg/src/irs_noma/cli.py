#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Command line interface

    irs-noma analyze|simulate|compare|density --config scenario.cfg --out result.csv

`analyze` writes analytic outage curves, `simulate` Monte-Carlo curves,
`compare` both joined per threshold with their gaps, and `density` the S1 and
|S2| histograms next to their analytic approximations. Floats are written
with 17 significant digits so identical configs give identical files.
"""

import argparse
import csv
import logging
import os
import sys
from typing import Iterable, List, Optional, Sequence

from . import __version__
from .channel import Strategy, s1_density, s2_magnitude_density
from .config import ScenarioConfig, load_config
from .errors import IrsNomaError
from .mcsim import DensityQuantity, EmpiricalCurve, Histogram, empirical_density, empirical_outage
from .outage import OutageCurve, OutageMode, outage_curve

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("analyze", "simulate", "compare", "density")

CURVE_HEADER = ["threshold_db", "strategy", "ue", "mode", "p_out", "ci_low", "ci_high", "source"]
COMPARE_HEADER = [
    "threshold_db",
    "strategy",
    "ue",
    "mode",
    "p_analytic",
    "p_empirical",
    "ci_low",
    "ci_high",
    "abs_gap",
    "rel_gap",
]
DENSITY_HEADER = [
    "quantity",
    "bin_low",
    "bin_high",
    "bin_center",
    "empirical_density",
    "analytic_density",
]


def format_float(value: Optional[float]) -> str:
    """17 significant digits; None is an empty cell"""
    return "" if value is None else format(float(value), ".17g")


def _open_csv(path: str):
    output_dir = os.path.dirname(path) or "."
    os.makedirs(output_dir, exist_ok=True)
    return open(path, "w", newline="", encoding="utf-8")


def write_curves_csv(path: str, curves: Iterable[OutageCurve]) -> int:
    """Write analytic and/or empirical curves; returns the number of data rows"""
    rows = 0
    with _open_csv(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CURVE_HEADER)
        for curve in curves:
            empirical = isinstance(curve, EmpiricalCurve)
            for index, threshold in enumerate(curve.thresholds_db):
                writer.writerow(
                    [
                        format_float(threshold),
                        curve.strategy.value,
                        curve.ue,
                        curve.mode.value,
                        format_float(curve.p_out[index]),
                        format_float(curve.ci_low[index] if empirical else None),
                        format_float(curve.ci_high[index] if empirical else None),
                        curve.source,
                    ]
                )
                rows += 1
    logger.info("wrote %d rows to %s", rows, path)
    return rows


def read_curves_csv(path: str) -> List[OutageCurve]:
    """Read curves written by `write_curves_csv`, in file order"""
    grouped = {}
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            key = (row["strategy"], int(row["ue"]), row["mode"], row["source"])
            grouped.setdefault(key, []).append(row)

    curves: List[OutageCurve] = []
    for (strategy, ue, mode, source), rows in grouped.items():
        thresholds = [float(r["threshold_db"]) for r in rows]
        p_out = [float(r["p_out"]) for r in rows]
        if source == EmpiricalCurve.source:
            # sample count and seed are not part of the file
            curves.append(
                EmpiricalCurve(
                    Strategy(strategy),
                    OutageMode(mode),
                    ue,
                    thresholds,
                    p_out,
                    [float(r["ci_low"]) for r in rows],
                    [float(r["ci_high"]) for r in rows],
                    n_samples=0,
                    seed=0,
                )
            )
        else:
            curves.append(OutageCurve(Strategy(strategy), OutageMode(mode), ue, thresholds, p_out))
    return curves


def write_compare_csv(
    path: str, analytic: Sequence[OutageCurve], empirical: Sequence[EmpiricalCurve]
) -> int:
    """Analytic and empirical curves joined per (strategy, ue, threshold)"""
    rows = 0
    with _open_csv(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(COMPARE_HEADER)
        for model, measured in zip(analytic, empirical):
            for index, threshold in enumerate(model.thresholds_db):
                p_model = model.p_out[index]
                p_measured = measured.p_out[index]
                gap = abs(p_model - p_measured)
                writer.writerow(
                    [
                        format_float(threshold),
                        model.strategy.value,
                        model.ue,
                        model.mode.value,
                        format_float(p_model),
                        format_float(p_measured),
                        format_float(measured.ci_low[index]),
                        format_float(measured.ci_high[index]),
                        format_float(gap),
                        format_float(gap / p_measured if p_measured > 0.0 else None),
                    ]
                )
                rows += 1
    logger.info("wrote %d rows to %s", rows, path)
    return rows


def write_density_csv(path: str, histograms: Sequence[tuple]) -> int:
    """Rows of (quantity, Histogram, analytic density at bin centers)"""
    rows = 0
    with _open_csv(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(DENSITY_HEADER)
        for quantity, histogram, analytic in histograms:
            edges = histogram.bin_edges
            for index, center in enumerate(histogram.bin_centers):
                writer.writerow(
                    [
                        quantity.value,
                        format_float(edges[index]),
                        format_float(edges[index + 1]),
                        format_float(center),
                        format_float(histogram.density[index]),
                        format_float(analytic[index]),
                    ]
                )
                rows += 1
    logger.info("wrote %d rows to %s", rows, path)
    return rows


def _analytic_curves(config: ScenarioConfig) -> List[OutageCurve]:
    links = config.links()
    thresholds = config.thresholds_db()
    curves = []
    for strategy in config.strategies():
        curves.extend(outage_curve(links, strategy, thresholds, config.mode))
    return curves


def _empirical_curves(config: ScenarioConfig) -> List[EmpiricalCurve]:
    links = config.links()
    thresholds = config.thresholds_db()
    curves = []
    for strategy in config.strategies():
        curves.extend(
            empirical_outage(
                links,
                strategy,
                thresholds,
                config.mode,
                config.n_samples,
                config.seed,
                workers=config.workers,
                confidence=config.confidence,
            )
        )
    return curves


def _densities(config: ScenarioConfig) -> List[tuple]:
    results = []
    quantities = ((DensityQuantity.S1, config.m_g1), (DensityQuantity.S2_MAGNITUDE, config.m_g2))
    for quantity, m_g in quantities:
        histogram: Histogram = empirical_density(
            quantity,
            config.n_elements,
            config.m_bs,
            m_g,
            config.n_samples,
            bins=config.bins,
            seed=config.seed,
            workers=config.workers,
        )
        if quantity is DensityQuantity.S1:
            analytic = s1_density(histogram.bin_centers, config.n_elements, config.m_bs, m_g)
        else:
            analytic = s2_magnitude_density(histogram.bin_centers, config.n_elements)
        results.append((quantity, histogram, analytic))
    return results


def execute(subcommand: str, config: ScenarioConfig, out: str) -> int:
    """
    Run one subcommand and write its CSV.

    Returns:
        Number of data rows written

    Raises:
        IrsNomaError: invalid scenario or numerical failure
        OSError: output cannot be written
    """
    if subcommand == "analyze":
        return write_curves_csv(out, _analytic_curves(config))
    if subcommand == "simulate":
        return write_curves_csv(out, _empirical_curves(config))
    if subcommand == "compare":
        return write_compare_csv(out, _analytic_curves(config), _empirical_curves(config))
    if subcommand == "density":
        return write_density_csv(out, _densities(config))
    expected = ", ".join(SUBCOMMANDS)
    raise IrsNomaError(f"unknown subcommand {subcommand!r}; expected one of {expected}")


def run(subcommand: str, config: ScenarioConfig, out: str) -> int:
    """Run a subcommand; returns the process exit status"""
    try:
        rows = execute(subcommand, config, out)
    except (IrsNomaError, OSError) as e:
        logger.error("%s failed: %s", subcommand, e)
        print(f"❌ {subcommand} failed: {e}", file=sys.stderr)
        return 1
    print(f"✓ Created: {out} ({rows} rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irs-noma",
        description="Outage analysis of two-user uplink IRS-assisted NOMA under Nakagami-m fading",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="scenario file (key = value); example defaults if omitted")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--seed", type=int, help="Monte-Carlo seed")
    parser.add_argument("--samples", type=int, help="Monte-Carlo realizations")
    parser.add_argument("--mode", choices=[m.value for m in OutageMode])
    parser.add_argument("--strategy", choices=[s.value for s in Strategy] + ["all"])
    parser.add_argument("--power-dbm", type=float, help="transmit power of both UEs [dBm]")
    parser.add_argument("--workers", type=int, help="Monte-Carlo worker threads")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the irs-noma console script"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    try:
        config = load_config(args.config) if args.config else ScenarioConfig()
        config = config.with_overrides(
            seed=args.seed,
            n_samples=args.samples,
            mode=args.mode,
            strategy=args.strategy,
            p_tx_dbm=args.power_dbm,
            workers=args.workers,
        )
    except (IrsNomaError, OSError) as e:
        logger.error("configuration failed: %s", e)
        print(f"❌ Error: {e}", file=sys.stderr)
        return 1
    return run(args.subcommand, config, args.out)


if __name__ == "__main__":
    sys.exit(main())
