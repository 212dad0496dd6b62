# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# analysis.py - 결과 분석 및 출력
# ==============================================================================

"""
Analysis and reporting functions for robustport v1.0
Renders console summaries with rich and writes plot-ready CSV/JSON files.

Exports are byte-deterministic: floats are written as shortest round-trip
decimals, lines end with LF and files are UTF-8.
"""

import io
import json
import logging
from dataclasses import asdict
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd
from rich import box
from rich.console import Console
from rich.table import Table

from .config import REPORT_WIDTH
from .enums import OutputFormat, Provenance
from .errors import ConfigError
from .market_model import confidence_level
from .models import GridSpec, SolutionSurface
from .strategy import regime_of, robust_position

logger = logging.getLogger(__name__)

SURFACE_COLUMNS = ["t", "y", "f", "f_y", "pi", "regime"]


def render_table(table):
    """
    Render a rich Table to plain text.

    The console is at least the report width and widens to the table's natural
    width, so cells are never truncated or wrapped.
    """
    natural = Console(width=10_000, file=io.StringIO(), color_system=None).measure(table).maximum
    console = Console(record=True, width=max(REPORT_WIDTH, natural), file=io.StringIO(), color_system=None)
    console.print(table)
    return console.export_text()


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    return value


def write_frame(frame, path, output_format=OutputFormat.csv):
    """Write a DataFrame as CSV or as a JSON array of row objects."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if output_format is OutputFormat.json:
        records = [{key: _plain(value) for key, value in row.items()} for row in frame.to_dict(orient="records")]
        path.write_text(json.dumps(records, indent=2) + "\n", encoding="utf-8", newline="\n")
    else:
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    logger.info("wrote %d rows to %s", len(frame), path)
    return path


def output_path(cfg, stem):
    """cfg.output_dir / stem.<format>."""
    return Path(cfg.output_dir) / f"{stem}.{cfg.output_format.value}"


# ------------------------------------------------------------------------------
# Surfaces
# ------------------------------------------------------------------------------

def surface_frame(params, prior, surface):
    """Long table t,y,f,f_y,pi,regime; rows ordered by time, then state."""
    rows = []
    for i, t in enumerate(surface.times):
        pi = robust_position(params, prior, t, surface.states, surface.f_y[i])
        regimes = regime_of(params, prior, t, surface.states)
        rows.append(pd.DataFrame({
            "t": np.full(surface.states.size, t),
            "y": surface.states,
            "f": surface.f[i],
            "f_y": surface.f_y[i],
            "pi": pi,
            "regime": [regime.value for regime in regimes],
        }))
    return pd.concat(rows, ignore_index=True)[SURFACE_COLUMNS]


def load_surface_csv(path, provenance=Provenance.FiniteDifference, theta=0.5):
    """Re-import an exported surface; float values are reproduced exactly."""
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in SURFACE_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigError(f"{path}: not a surface export, missing {missing}")
    times = np.unique(frame["t"].to_numpy())
    states = np.unique(frame["y"].to_numpy())
    shape = (times.size, states.size)
    if len(frame) != times.size * states.size:
        raise ConfigError(f"{path}: {len(frame)} rows do not form a {shape[0]} x {shape[1]} grid")
    ordered = frame.sort_values(["t", "y"], kind="mergesort")
    grid = GridSpec(float(states[0]), float(states[-1]), states.size, times.size, theta)
    return SolutionSurface(grid, times, states, ordered["f"].to_numpy().reshape(shape),
                           ordered["f_y"].to_numpy().reshape(shape), provenance)


# ------------------------------------------------------------------------------
# Tables for the other exports
# ------------------------------------------------------------------------------

def region_frame(rows):
    """Region boundary curves, one row per time."""
    return pd.DataFrame(rows, columns=["t", "y_low", "band_low", "inner", "band_high", "y_high"])


def simulation_frame(result):
    """One row per strategy with every StrategyStats field."""
    return pd.DataFrame([asdict(item) for item in result.stats])


def terminal_wealth_frame(result):
    """Per-path terminal wealth, one column per strategy."""
    return pd.DataFrame({name: values for name, values in result.terminal_wealth.items()})


def admissibility_frame(result):
    row = asdict(result.witness)
    row.update(found=result.found, evaluations=result.evaluations,
               valid=result.witness.valid, valid_alt=result.witness.valid_alt)
    return pd.DataFrame([row])


# ------------------------------------------------------------------------------
# Console reports
# ------------------------------------------------------------------------------

def _key_value_table(title, rows):
    table = Table(title=title, box=box.SIMPLE, show_header=True, header_style="bold")
    table.add_column("Quantity", justify="left")
    table.add_column("Value", justify="right")
    for key, value in rows:
        table.add_row(key, value)
    return table


def estimate_report(sigma_hat, y0_hat, sigma0_sq_hat, n_prices, a=None):
    """Calibration summary."""
    rows = [("prices", str(n_prices)), ("sigma", f"{sigma_hat:.6f}"), ("y0", f"{y0_hat:.6f}"),
            ("sigma0^2", f"{sigma0_sq_hat:.6g}")]
    if a is not None:
        rows.append(("confidence level", f"{confidence_level(a):.4f}"))
    return render_table(_key_value_table("Maximum likelihood estimates", rows))


def decision_report(decision, backend):
    """One StrategyDecision."""
    worst = "any in set (y)" if decision.any_in_set else f"{decision.mu_worst:.6f}"
    rows = [("t", f"{decision.t:g}"), ("y", f"{decision.y:.6f}"), ("backend", backend),
            ("regime", decision.regime.value), ("worst-case drift", worst),
            ("myopic", f"{decision.myopic:.6f}"), ("hedging", f"{decision.hedging:.6f}"),
            ("pi", f"{decision.pi:.6f}")]
    return render_table(_key_value_table("Robust feedback", rows))


def admissibility_report(result, reference=None, a=None):
    """Witness constants and both left-hand sides, plus an optional reference witness and confidence level."""
    table = Table(title="Admissibility inequalities (both left sides must be < 1)",
                  box=box.SIMPLE, show_header=True, header_style="bold")
    for column in ("Witness", "delta1", "delta7", "delta8", "eps3", "lhs1", "lhs2", "lhs2 (alt)", "Valid"):
        table.add_column(column, justify="left" if column == "Witness" else "right")
    entries = [("search best", result.witness)]
    if reference is not None:
        entries.append(("reference", reference))
    for label, w in entries:
        table.add_row(label, f"{w.delta1:.4f}", f"{w.delta7:.4f}", f"{w.delta8:.4f}", f"{w.epsilon3:.4g}",
                      f"{w.lhs1:.4f}", f"{w.lhs2:.4f}", f"{w.lhs2_alt:.4f}", "yes" if w.valid else "no")
    verdict = "witness found" if result.found else "no witness within budget"
    report = render_table(table) + f"{verdict} ({result.evaluations} evaluations)\n"
    if a is not None:
        report += f"confidence level 2N(a) - 1 = {confidence_level(a):.4f} (a = {a:g})\n"
    return report
