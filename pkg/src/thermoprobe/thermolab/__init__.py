"""Scenario runner: temperature sweeps, figure presets, exports and the CLI."""
from .export import FORMATS, export, to_csv, to_json, to_svg
from .scenario import PRESETS, ScenarioSpec, TGrid, Vary, figure_preset
from .sweep import COLUMNS, SweepResult, SweepRow, run_sweep, thermal_family

__all__ = [
    "COLUMNS",
    "FORMATS",
    "PRESETS",
    "ScenarioSpec",
    "SweepResult",
    "SweepRow",
    "TGrid",
    "Vary",
    "export",
    "figure_preset",
    "run_sweep",
    "thermal_family",
    "to_csv",
    "to_json",
    "to_svg",
]
