#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
FastMCP Server for IRS-NOMA outage analysis

Exposes the analyze, simulate, compare and density runs as tools. Each tool
reads an optional scenario file, applies its overrides and writes one CSV.
"""

import logging
import os
from pathlib import Path
from typing import Literal, Optional

from fastmcp import FastMCP

from .cli import SUBCOMMANDS, execute
from .config import CONFIG_KEYS, ScenarioConfig, load_config

logger = logging.getLogger(__name__)

# Create FastMCP server instance
mcp = FastMCP("irs-noma-outage")

Subcommand = Literal["analyze", "simulate", "compare", "density"]


def _run_subcommand_impl(
    subcommand: str,
    config_path: Optional[str],
    output_path: str,
    **overrides,
) -> str:
    """
    Internal implementation shared by the scenario tools and the batch tool.
    """
    if subcommand not in SUBCOMMANDS:
        return f"❌ Error: Unknown subcommand: {subcommand}"
    if config_path and not os.path.exists(config_path):
        return f"❌ Error: Config file not found: {config_path}"

    try:
        config = load_config(config_path) if config_path else ScenarioConfig()
        config = config.with_overrides(**overrides)

        output_dir = os.path.dirname(output_path) or "."
        os.makedirs(output_dir, exist_ok=True)

        rows = execute(subcommand, config, output_path)
        return f"✓ Created: {output_path} ({rows} rows)"

    except Exception as e:
        logger.error("%s failed: %s", subcommand, e)
        return f"❌ {subcommand} failed: {str(e)}"


@mcp.tool()
def analyze_scenario(
    output_path: str,
    config_path: Optional[str] = None,
    mode: Optional[Literal["noic", "ic", "snr"]] = None,
    strategy: Optional[Literal["boost-ue1", "boost-ue2", "no-irs", "all"]] = None,
    power_dbm: Optional[float] = None,
) -> str:
    """
    Write analytic outage curves of both UEs to a CSV file.

    Args:
        output_path: Path of the CSV to create
        config_path: Optional scenario file (key = value); defaults apply without one
        mode: Detection mode - "noic", "ic" (default) or "snr"
        strategy: Surface configuration, or "all" for the three of them
        power_dbm: Transmit power of both UEs in dBm

    Returns:
        Success message with the created file path

    Examples:
        analyze_scenario("fig1.csv")
        → Creates fig1.csv with IC curves for every strategy at 20 dBm

        analyze_scenario("noic.csv", "scenario.cfg", mode="noic", power_dbm=35)
    """
    return _run_subcommand_impl(
        "analyze", config_path, output_path, mode=mode, strategy=strategy, p_tx_dbm=power_dbm
    )


@mcp.tool()
def simulate_scenario(
    output_path: str,
    config_path: Optional[str] = None,
    mode: Optional[Literal["noic", "ic", "snr"]] = None,
    strategy: Optional[Literal["boost-ue1", "boost-ue2", "no-irs", "all"]] = None,
    power_dbm: Optional[float] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> str:
    """
    Write Monte-Carlo outage curves with confidence intervals to a CSV file.

    Args:
        output_path: Path of the CSV to create
        config_path: Optional scenario file
        mode: Detection mode
        strategy: Surface configuration, or "all"
        power_dbm: Transmit power of both UEs in dBm
        samples: Channel realizations per strategy
        seed: Seed of the sample streams; equal seeds give equal files
    """
    return _run_subcommand_impl(
        "simulate",
        config_path,
        output_path,
        mode=mode,
        strategy=strategy,
        p_tx_dbm=power_dbm,
        n_samples=samples,
        seed=seed,
    )


@mcp.tool()
def compare_scenario(
    output_path: str,
    config_path: Optional[str] = None,
    mode: Optional[Literal["noic", "ic", "snr"]] = None,
    strategy: Optional[Literal["boost-ue1", "boost-ue2", "no-irs", "all"]] = None,
    power_dbm: Optional[float] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> str:
    """
    Write analytic and Monte-Carlo outage side by side, with their gaps.
    """
    return _run_subcommand_impl(
        "compare",
        config_path,
        output_path,
        mode=mode,
        strategy=strategy,
        p_tx_dbm=power_dbm,
        n_samples=samples,
        seed=seed,
    )


@mcp.tool()
def density_scenario(
    output_path: str,
    config_path: Optional[str] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> str:
    """
    Write histograms of S1 and |S2| next to their analytic densities.

    Args:
        output_path: Path of the CSV to create
        config_path: Optional scenario file (n_elements, m_bs, m_g1, m_g2, bins)
        samples: Samples per quantity (at least 100000)
        seed: Seed of the sample streams
    """
    return _run_subcommand_impl("density", config_path, output_path, n_samples=samples, seed=seed)


@mcp.tool()
def run_scenario_batch(
    config_paths: list[str],
    output_dir: str,
    subcommand: Subcommand = "analyze",
) -> str:
    """
    Run one subcommand over several scenario files.

    Output files are named after the scenario files and placed in the
    specified directory.

    Args:
        config_paths: List of scenario files
        output_dir: Directory for output CSV files
        subcommand: "analyze", "simulate", "compare" or "density"

    Returns:
        Summary of runs with success/failure counts

    Example:
        run_scenario_batch(["n16.cfg", "n32.cfg", "n64.cfg"], "results")
        → Creates results/n16.csv, results/n32.csv, results/n64.csv
    """
    try:
        os.makedirs(output_dir, exist_ok=True)
    except OSError as e:
        return f"❌ Batch run failed: {str(e)}"

    results = []
    success_count = 0
    fail_count = 0

    for config_path in config_paths:
        if not os.path.exists(config_path):
            results.append(f"⊘ Skipped (not found): {config_path}")
            fail_count += 1
            continue

        base_name = Path(config_path).stem
        output_path = os.path.join(output_dir, f"{base_name}.csv")
        result = _run_subcommand_impl(subcommand, config_path, output_path)

        if result.startswith("✓"):
            success_count += 1
            results.append(f"✓ {base_name}")
        else:
            fail_count += 1
            results.append(f"❌ {base_name}: {result}")

    summary = f"\n{'='*50}\nBatch {subcommand.capitalize()} Complete\n{'='*50}\n"
    summary += f"✓ Success: {success_count}\n"
    summary += f"❌ Failed: {fail_count}\n"
    summary += f"{'='*50}\n\n"

    return summary + "\n".join(results)


@mcp.tool()
def list_config_keys() -> str:
    """
    List the keys a scenario file accepts, with their defaults.

    Returns:
        One line per key
    """
    defaults = ScenarioConfig()
    lines = ["📄 IRS-NOMA scenario keys (key = value, # comments)", ""]
    for key, description in CONFIG_KEYS.items():
        default = getattr(defaults, key)
        if key == "strategy" and default is None:
            shown = "all"
        elif default is None:
            shown = "-"
        elif hasattr(default, "value"):
            shown = default.value
        else:
            shown = default
        lines.append(f"• {key} = {shown}    {description}")
    lines.append("")
    lines.append("strategy = all runs boost-ue1, boost-ue2 and no-irs")
    return "\n".join(lines)


def main():
    """Entry point for the MCP server"""
    mcp.run()


if __name__ == "__main__":
    main()
