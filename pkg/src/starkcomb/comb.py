"""Microwave frequency comb definition, cell placement, and channel routing.

Each comb line acts as a local oscillator for exactly one vapor cell. A cell
is placed by inverting the position-to-frequency map of the field profile so
its Stark-shifted transition lands on the line; placement uses bisection,
which the strictly monotone profile makes unconditionally convergent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CoverageError, DomainError, PlannerError
from .field_map import FieldProfile, transition_frequency_at
from .stark import RydbergTransition

__all__ = [
    "FrequencyComb",
    "CellArrayPlan",
    "PlanEntry",
    "comb_lines",
    "place_cells",
    "assign_channel",
    "coverage_union",
]

# A single cell receives +/- 5 MHz around its line; comb spacing of twice
# this value makes adjacent channels meet exactly at their 3 dB points.
DEFAULT_HALF_WIDTH_HZ = 5e6

_BISECTION_MAX_ITER = 200
_POSITION_TOLERANCE_CM = 1e-9


def _equal_split_dbm(total_power: float, count: int) -> float:
    return total_power - 10.0 * math.log10(count)


def _power_sum_dbm(levels: tuple[float, ...]) -> float:
    return 10.0 * math.log10(sum(10.0 ** (p / 10.0) for p in levels))


@dataclass(frozen=True)
class FrequencyComb:
    """Equally spaced microwave local-oscillator lines.

    Line k sits at ``center_frequency + (k - (line_count - 1)/2) * line_spacing``
    for k = 0 .. line_count - 1. ``per_line_power`` defaults to an equal split
    of ``total_power``; individually optimized line strengths can be supplied
    instead, in which case ``total_power`` is their power sum.
    """

    center_frequency: float
    line_spacing: float
    line_count: int
    per_line_power: tuple[float, ...] = field(default=())
    total_power: float = 0.0

    def __post_init__(self) -> None:
        if self.line_spacing <= 0:
            raise DomainError(f"line_spacing must be > 0, got {self.line_spacing}")
        if self.line_count < 1:
            raise DomainError(f"line_count must be >= 1, got {self.line_count}")
        if not self.per_line_power:
            object.__setattr__(
                self,
                "per_line_power",
                (_equal_split_dbm(self.total_power, self.line_count),)
                * self.line_count,
            )
        else:
            object.__setattr__(
                self, "per_line_power", tuple(self.per_line_power)
            )
            if len(self.per_line_power) != self.line_count:
                raise DomainError(
                    f"per_line_power has {len(self.per_line_power)} entries but "
                    f"line_count is {self.line_count}"
                )
            object.__setattr__(
                self, "total_power", _power_sum_dbm(self.per_line_power)
            )


def comb_lines(comb: FrequencyComb) -> list[float]:
    """Line frequencies in Hz, sorted ascending."""
    half_span = (comb.line_count - 1) / 2.0
    return [
        comb.center_frequency + (k - half_span) * comb.line_spacing
        for k in range(comb.line_count)
    ]


@dataclass(frozen=True)
class PlanEntry:
    """One cell bound to one comb line."""

    line_index: int
    line_frequency: float
    position: float
    lo_power: float


@dataclass(frozen=True)
class CellArrayPlan:
    """Ordered cell positions, one per comb line.

    Entries are ordered by line index (ascending frequency); for a decaying
    field profile the positions decrease strictly along that order.
    ``min_spacing`` is the smallest adjacent position gap in cm
    (``inf`` for a single cell) and ``feasible`` records whether it clears
    the requested minimum gap.
    """

    entries: tuple[PlanEntry, ...]
    min_spacing: float
    feasible: bool


def _bisect_position(
    profile: FieldProfile,
    transition: RydbergTransition,
    target: float,
    tol: float,
) -> float:
    """Position whose transition frequency matches ``target`` within ``tol`` Hz.

    The bracket is the profile's valid range. Targets within ``tol`` of a
    range endpoint return that endpoint exactly, so anchor lines map back to
    their anchor positions. Otherwise bisection tightens the bracket to
    ``_POSITION_TOLERANCE_CM`` and returns the final bracket midpoint.
    """
    lo, hi = profile.valid_range
    f_lo = transition_frequency_at(profile, transition, lo)
    f_hi = transition_frequency_at(profile, transition, hi)

    if abs(f_lo - target) <= tol:
        return lo
    if abs(f_hi - target) <= tol:
        return hi
    if not f_hi < target < f_lo:
        raise CoverageError(
            f"line at {target} Hz outside reachable band [{f_hi}, {f_lo}] Hz"
        )

    for _ in range(_BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        f_mid = transition_frequency_at(profile, transition, mid)
        if f_mid > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _POSITION_TOLERANCE_CM:
            break
    mid = 0.5 * (lo + hi)
    if abs(transition_frequency_at(profile, transition, mid) - target) > tol:
        raise PlannerError(
            f"bisection failed to reach {tol:g} Hz for line at {target} Hz"
        )
    return mid


def place_cells(
    profile: FieldProfile,
    transition: RydbergTransition,
    comb: FrequencyComb,
    tol: float = 1e3,
    min_gap: float = 0.0,
) -> CellArrayPlan:
    """Place one cell per comb line by inverting the position-frequency map.

    Parameters
    ----------
    profile, transition
        Define the position-to-frequency map; must be strictly decreasing.
    comb : FrequencyComb
        Every line must lie within the band reachable over the valid range.
    tol : float
        Placement accuracy in Hz (default 1 kHz).
    min_gap : float
        Minimum acceptable adjacent cell spacing in cm. The plan is marked
        infeasible (not rejected) when violated; pass the physical cell
        diameter to enforce real geometry.
    """
    lo, hi = profile.valid_range
    if not (
        transition_frequency_at(profile, transition, lo)
        > transition_frequency_at(profile, transition, hi)
    ):
        raise PlannerError("profile is not strictly decreasing over its valid range")

    entries = []
    for k, line in enumerate(comb_lines(comb)):
        try:
            x = _bisect_position(profile, transition, line, tol)
        except CoverageError as exc:
            raise CoverageError(f"line {k}: {exc}") from exc
        entries.append(
            PlanEntry(
                line_index=k,
                line_frequency=line,
                position=x,
                lo_power=comb.per_line_power[k],
            )
        )

    for a, b in zip(entries, entries[1:]):
        if not a.position > b.position:
            raise PlannerError(
                f"positions not strictly decreasing with line frequency: "
                f"x[{a.line_index}] = {a.position} cm, "
                f"x[{b.line_index}] = {b.position} cm"
            )

    if len(entries) > 1:
        min_spacing = min(
            a.position - b.position for a, b in zip(entries, entries[1:])
        )
    else:
        min_spacing = math.inf

    return CellArrayPlan(
        entries=tuple(entries),
        min_spacing=min_spacing,
        feasible=min_spacing >= min_gap,
    )


def assign_channel(
    comb: FrequencyComb,
    signal_frequency: float,
    half_width: float = DEFAULT_HALF_WIDTH_HZ,
) -> tuple[int, float]:
    """Route a signal to its nearest comb line.

    Returns ``(line_index, detuning)`` with signed detuning
    ``signal_frequency - line``. A signal exactly midway between two lines
    resolves to the lower index. Signals outside
    ``[first_line - half_width, last_line + half_width]`` raise
    :class:`CoverageError`.
    """
    lines = comb_lines(comb)
    if not lines[0] - half_width <= signal_frequency <= lines[-1] + half_width:
        raise CoverageError(
            f"signal at {signal_frequency} Hz outside covered band "
            f"[{lines[0] - half_width}, {lines[-1] + half_width}] Hz"
        )
    index = _nearest_line_index(lines, comb.line_spacing, signal_frequency)
    return index, signal_frequency - lines[index]


def _nearest_line_index(
    lines: list[float], spacing: float, frequency: float
) -> int:
    # ceil(t - 0.5) rounds to nearest with exact midpoints going down.
    t = (frequency - lines[0]) / spacing
    index = math.ceil(t - 0.5)
    return min(max(index, 0), len(lines) - 1)


def coverage_union(
    lines: list[float], half_width: float = DEFAULT_HALF_WIDTH_HZ
) -> list[tuple[float, float]]:
    """Merged coverage intervals ``[line - half_width, line + half_width]``.

    Intervals that touch exactly are merged, so a comb with spacing equal to
    ``2 * half_width`` yields a single contiguous interval of width
    ``line_count * 2 * half_width``.
    """
    if not lines:
        raise DomainError("coverage requires at least one line")
    intervals = sorted((f - half_width, f + half_width) for f in lines)
    merged = [intervals[0]]
    for lo, hi in intervals[1:]:
        last_lo, last_hi = merged[-1]
        if lo <= last_hi:
            merged[-1] = (last_lo, max(last_hi, hi))
        else:
            merged.append((lo, hi))
    return merged
