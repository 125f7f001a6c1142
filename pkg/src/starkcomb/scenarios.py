"""Scenario runners: deterministic CSV data products plus a run manifest.

Every scenario writes CSV files with a short metadata header (package
version, configuration hash, scenario name) followed by the column row and
data rows, and a JSON manifest listing each output with its SHA-256. Output
bytes are a pure function of the configuration; timestamps are embedded only
when explicitly requested.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bloch import probe_absorption
from .comb import CellArrayPlan, FrequencyComb, place_cells
from .config import ReceiverConfig, build_channels
from .errors import ConfigError, InfeasiblePlanError
from .field_map import field_at, transition_frequency_at
from .receiver import (
    SignalScenario,
    min_detectable_field,
    sensitivity,
    stitched_response,
)

__all__ = ["SCENARIO_NAMES", "run_scenario"]

SCENARIO_NAMES = ("plan", "response", "linearity", "sensitivity", "sweep2cell", "eit")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".10g")
    return str(value)


def _write_csv(
    path: Path,
    meta: Sequence[tuple[str, object]],
    columns: Sequence[str],
    rows: Sequence[Sequence],
    timestamp: bool,
) -> None:
    lines = [f"# {key}: {_fmt(value)}" for key, value in meta]
    if timestamp:
        lines.append(f"# generated_at: {datetime.now(timezone.utc).isoformat()}")
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(
    out_dir: Path, name: str, config: ReceiverConfig, seed: int | None,
    outputs: list[Path],
) -> Path:
    manifest = {
        "scenario": name,
        "version": __version__,
        "config_sha256": config.sha256,
        "seed": seed,
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    path = out_dir / f"{name}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _meta(config: ReceiverConfig, name: str) -> list[tuple[str, object]]:
    return [
        ("starkcomb_version", __version__),
        ("config_sha256", config.sha256),
        ("scenario", name),
    ]


def _plan(config: ReceiverConfig) -> CellArrayPlan:
    plan = place_cells(
        config.profile,
        config.transition,
        config.comb,
        tol=config.placement_tolerance,
        min_gap=config.min_gap,
    )
    if not plan.feasible:
        raise InfeasiblePlanError(
            f"minimum cell spacing {plan.min_spacing:.4g} cm is below the "
            f"required gap {config.min_gap:.4g} cm"
        )
    return plan


def _beat_rows(spectrum) -> list[tuple]:
    return [
        (
            row.signal_frequency / 1e9,
            row.channel_index,
            row.delta_f / 1e3,
            row.beat_power,
            row.above_noise,
        )
        for row in spectrum.rows
    ]


_BEAT_COLUMNS = ("signal_GHz", "channel_index", "delta_f_kHz", "beat_dBm", "above_noise")


def _run_plan(config: ReceiverConfig, out_dir: Path, timestamp: bool) -> list[Path]:
    plan = _plan(config)
    plan_path = out_dir / "plan.csv"
    rows = []
    for entry, nxt in zip(plan.entries, (*plan.entries[1:], None)):
        spacing = entry.position - nxt.position if nxt is not None else None
        rows.append(
            (
                entry.line_index,
                entry.line_frequency / 1e9,
                entry.position,
                entry.lo_power,
                spacing,
            )
        )
    _write_csv(
        plan_path,
        _meta(config, "plan")
        + [("min_spacing_cm", plan.min_spacing), ("feasible", plan.feasible)],
        ("line_index", "line_GHz", "position_cm", "lo_power_dBm", "spacing_to_next_cm"),
        rows,
        timestamp,
    )

    profile_path = out_dir / "field_profile.csv"
    lo, hi = config.profile.valid_range
    xs = np.linspace(lo, hi, 241)
    profile_rows = [
        (
            x,
            field_at(config.profile, float(x)),
            transition_frequency_at(config.profile, config.transition, float(x)) / 1e9,
        )
        for x in xs
    ]
    _write_csv(
        profile_path,
        _meta(config, "plan"),
        ("x_cm", "field_V_per_cm", "transition_GHz"),
        profile_rows,
        timestamp,
    )
    return [plan_path, profile_path]


def _run_response(config: ReceiverConfig, out_dir: Path, timestamp: bool) -> list[Path]:
    plan = _plan(config)
    params = config.scenarios["response"]
    field = params["field"]
    if field is None:
        field = config.channel_defaults.reference_field
    scenario = SignalScenario.linear_sweep(
        params["start"], params["stop"], params["points"], field,
        measurement_time=config.measurement_time,
    )
    spectrum = stitched_response(plan, config.channels, scenario)
    path = out_dir / "response.csv"
    _write_csv(
        path,
        _meta(config, "response") + [("field_V_per_cm", field)],
        _BEAT_COLUMNS,
        _beat_rows(spectrum),
        timestamp,
    )
    return [path]


def _run_linearity(config: ReceiverConfig, out_dir: Path, timestamp: bool) -> list[Path]:
    plan = _plan(config)
    params = config.scenarios["linearity"]
    fields = np.logspace(
        math.log10(params["min_field"]), math.log10(params["max_field"]),
        params["points"],
    )
    delta = config.channel_defaults.reference_detuning
    rows = []
    for entry in plan.entries:
        scenario = SignalScenario.tone_list(
            [(entry.line_frequency + delta, float(e)) for e in fields],
            measurement_time=config.measurement_time,
        )
        spectrum = stitched_response(plan, config.channels, scenario)
        for e, row in zip(fields, spectrum.rows):
            rows.append(
                (entry.line_index, entry.line_frequency / 1e9, e, row.beat_power)
            )
    path = out_dir / "linearity.csv"
    _write_csv(
        path,
        _meta(config, "linearity") + [("delta_f_kHz", delta / 1e3)],
        ("channel_index", "line_GHz", "field_V_per_cm", "beat_dBm"),
        rows,
        timestamp,
    )
    return [path]


def _run_sensitivity(config: ReceiverConfig, out_dir: Path, timestamp: bool) -> list[Path]:
    plan = _plan(config)
    delta = config.channel_defaults.reference_detuning
    rows = []
    for entry, channel in zip(plan.entries, config.channels):
        e_det = min_detectable_field(channel, delta)
        s = sensitivity(e_det, config.measurement_time)
        rows.append(
            (entry.line_index, entry.line_frequency / 1e9, e_det * 1e9, s * 1e9)
        )
    path = out_dir / "sensitivity.csv"
    _write_csv(
        path,
        _meta(config, "sensitivity")
        + [
            ("delta_f_kHz", delta / 1e3),
            ("measurement_time_s", config.measurement_time),
        ],
        ("channel_index", "line_GHz", "E_det_nV_per_cm", "sensitivity_nV_cm_Hz"),
        rows,
        timestamp,
    )
    return [path]


def _run_sweep2cell(config: ReceiverConfig, out_dir: Path, timestamp: bool) -> list[Path]:
    params = config.scenarios["sweep2cell"]
    low, high = params["low_line"], params["high_line"]
    comb = FrequencyComb(
        center_frequency=(low + high) / 2.0,
        line_spacing=high - low,
        line_count=2,
        total_power=config.comb.total_power,
    )
    plan = place_cells(
        config.profile,
        config.transition,
        comb,
        tol=config.placement_tolerance,
        min_gap=config.min_gap,
    )
    if not plan.feasible:
        raise InfeasiblePlanError(
            f"two-cell spacing {plan.min_spacing:.4g} cm is below the required "
            f"gap {config.min_gap:.4g} cm"
        )
    channels = build_channels(config.channel_defaults, 2)
    field = params["field"]
    if field is None:
        field = config.channel_defaults.reference_field
    scenario = SignalScenario.linear_sweep(
        params["start"], params["stop"], params["points"], field,
        measurement_time=config.measurement_time,
    )
    spectrum = stitched_response(plan, channels, scenario)
    path = out_dir / "sweep2cell.csv"
    _write_csv(
        path,
        _meta(config, "sweep2cell")
        + [
            ("field_V_per_cm", field),
            ("position_low_line_cm", plan.entries[0].position),
            ("position_high_line_cm", plan.entries[1].position),
        ],
        _BEAT_COLUMNS,
        _beat_rows(spectrum),
        timestamp,
    )
    return [path]


def _run_eit(config: ReceiverConfig, out_dir: Path, timestamp: bool) -> list[Path]:
    params = config.scenarios["eit"]
    span = params["probe_span"]
    detunings = np.linspace(-span, span, params["points"]) * 2.0 * math.pi
    ladder = config.ladder
    rows = [
        (
            d / (2.0 * math.pi * 1e6),
            probe_absorption(replace(ladder, probe_detuning=float(d))),
        )
        for d in detunings
    ]
    path = out_dir / "eit.csv"
    two_pi = 2.0 * math.pi
    meta = _meta(config, "eit") + [
        ("probe_rabi_MHz", ladder.probe_rabi / two_pi / 1e6),
        ("coupling_rabi_MHz", ladder.coupling_rabi / two_pi / 1e6),
        ("mw_rabi_MHz", ladder.mw_rabi / two_pi / 1e6),
        ("probe_detuning_MHz", "swept"),
        ("coupling_detuning_MHz", ladder.coupling_detuning / two_pi / 1e6),
        ("mw_detuning_MHz", ladder.mw_detuning / two_pi / 1e6),
        ("decay_e_MHz", ladder.decay_e / two_pi / 1e6),
        ("decay_r1_MHz", ladder.decay_r1 / two_pi / 1e6),
        ("decay_r2_MHz", ladder.decay_r2 / two_pi / 1e6),
        ("dephasing_MHz", ladder.dephasing / two_pi / 1e6),
    ]
    _write_csv(path, meta, ("probe_detuning_MHz", "absorption"), rows, timestamp)
    return [path]


_RUNNERS: dict[str, Callable[[ReceiverConfig, Path, bool], list[Path]]] = {
    "plan": _run_plan,
    "response": _run_response,
    "linearity": _run_linearity,
    "sensitivity": _run_sensitivity,
    "sweep2cell": _run_sweep2cell,
    "eit": _run_eit,
}


def run_scenario(
    config: ReceiverConfig,
    name: str,
    out_dir: str | Path = ".",
    *,
    seed: int | None = None,
    timestamp: bool = False,
) -> list[Path]:
    """Run one scenario and return the paths of every file written.

    ``seed`` is reserved for future stochastic noise draws; the current
    model is deterministic and only records it in the manifest.
    """
    if name not in _RUNNERS:
        raise ConfigError(
            f"unknown scenario {name!r}; expected one of {', '.join(SCENARIO_NAMES)}"
        )
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = _RUNNERS[name](config, out_dir, timestamp)
    manifest = _write_manifest(out_dir, name, config, seed, outputs)
    return outputs + [manifest]
