"""Calibrated channel model of the heterodyne receiver array.

Each cell is reduced to a linear channel: beat-note power grows 20 dB per
decade of signal field strength, rolls off in detuning from the cell's comb
line as a flat-top filter

    |H(df)|^2 = 1 / (1 + (df / half_width_3db)**(2 * rolloff_order))

and is floored by an incoherent noise power. Absolute powers, the reference
field, and noise floors are calibration constants rather than first-
principles quantities; they are chosen to reproduce measured numbers (peak
beat power, minimum detectable field) and the small-signal physics is
justified separately by :mod:`starkcomb.bloch`.

All fields are in V/cm, powers in dBm, frequencies in Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

import numpy as np

from .comb import CellArrayPlan
from .errors import DomainError, PlannerError

__all__ = [
    "ChannelResponse",
    "SignalScenario",
    "BeatRow",
    "BeatSpectrum",
    "rolloff",
    "beat_signal_power",
    "beat_power",
    "min_detectable_field",
    "calibrate_noise_floor",
    "sensitivity",
    "far_field_strength",
    "evaluate_channels",
    "stitched_response",
]


@dataclass(frozen=True)
class ChannelResponse:
    """Linear heterodyne channel bound to one comb line.

    ``peak_power`` is the beat power at ``reference_field`` on line center;
    ``gain_scale`` is a dimensionless per-channel factor modeling transition
    dipole-moment degradation; ``noise_floor`` is the analyzer noise power
    in the analysis bandwidth.
    """

    peak_power: float
    reference_field: float
    half_width_3db: float = 5e6
    rolloff_order: int = 2
    noise_floor: float = -80.0
    gain_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.reference_field <= 0:
            raise DomainError(
                f"reference_field must be > 0, got {self.reference_field}"
            )
        if self.half_width_3db <= 0:
            raise DomainError(
                f"half_width_3db must be > 0, got {self.half_width_3db}"
            )
        if self.rolloff_order < 1 or int(self.rolloff_order) != self.rolloff_order:
            raise DomainError(
                f"rolloff_order must be a positive integer, got {self.rolloff_order}"
            )
        if self.gain_scale <= 0:
            raise DomainError(f"gain_scale must be > 0, got {self.gain_scale}")
        if not self.noise_floor < self.peak_power:
            raise DomainError(
                f"noise_floor ({self.noise_floor} dBm) must be below "
                f"peak_power ({self.peak_power} dBm)"
            )


def rolloff(channel: ChannelResponse, delta_f: float) -> float:
    """Power response |H(delta_f)|^2, exactly 1/2 at the 3 dB half-width."""
    x = abs(delta_f) / channel.half_width_3db
    return 1.0 / (1.0 + x ** (2 * channel.rolloff_order))


def beat_signal_power(channel: ChannelResponse, field: float, delta_f: float) -> float:
    """Beat-note signal power in dBm before noise flooring (``field`` > 0)."""
    if field <= 0:
        raise DomainError(f"field must be > 0 for the pre-floor power, got {field}")
    return (
        channel.peak_power
        + 20.0 * math.log10(field / channel.reference_field)
        + 10.0 * math.log10(rolloff(channel, delta_f))
        + 20.0 * math.log10(channel.gain_scale)
    )


def beat_power(channel: ChannelResponse, field: float, delta_f: float) -> float:
    """Observed beat power in dBm: signal power-summed with the noise floor.

    A zero field returns the noise floor exactly.
    """
    if field < 0:
        raise DomainError(f"field must be >= 0, got {field}")
    if field == 0:
        return channel.noise_floor
    s = beat_signal_power(channel, field, delta_f)
    return 10.0 * math.log10(
        10.0 ** (s / 10.0) + 10.0 ** (channel.noise_floor / 10.0)
    )


def min_detectable_field(channel: ChannelResponse, delta_f: float = 0.0) -> float:
    """Field (V/cm) whose beat signal power equals the noise floor."""
    exponent = (
        channel.noise_floor
        - channel.peak_power
        - 10.0 * math.log10(rolloff(channel, delta_f))
        - 20.0 * math.log10(channel.gain_scale)
    ) / 20.0
    return channel.reference_field * 10.0**exponent


def calibrate_noise_floor(
    channel: ChannelResponse, target_field: float, delta_f: float = 0.0
) -> ChannelResponse:
    """Channel with its noise floor set so ``min_detectable_field`` hits the target."""
    if target_field <= 0:
        raise DomainError(f"target_field must be > 0, got {target_field}")
    floor = (
        channel.peak_power
        + 20.0 * math.log10(target_field / channel.reference_field)
        + 10.0 * math.log10(rolloff(channel, delta_f))
        + 20.0 * math.log10(channel.gain_scale)
    )
    return replace(channel, noise_floor=floor)


def sensitivity(e_det: float, measurement_time: float) -> float:
    """Sensitivity in V cm^-1 Hz^-1/2 from the minimum detectable field.

    ``sensitivity = e_det * sqrt(measurement_time)``.
    """
    if e_det <= 0:
        raise DomainError(f"e_det must be > 0, got {e_det}")
    if measurement_time <= 0:
        raise DomainError(
            f"measurement_time must be > 0, got {measurement_time}"
        )
    return e_det * math.sqrt(measurement_time)


def far_field_strength(
    power: float, gain: float, distance: float, perturbation: float = 1.0
) -> float:
    """Far-field strength in V/m at ``distance`` m from an antenna.

    ``E = perturbation * sqrt(30 * power * gain) / distance`` with ``power``
    in W, antenna ``gain`` dimensionless, and ``perturbation`` the cell
    perturbation factor. Divide by 100 for V/cm.
    """
    if power < 0:
        raise DomainError(f"power must be >= 0, got {power}")
    if gain <= 0:
        raise DomainError(f"gain must be > 0, got {gain}")
    if distance <= 0:
        raise DomainError(f"distance must be > 0, got {distance}")
    if perturbation <= 0:
        raise DomainError(f"perturbation must be > 0, got {perturbation}")
    return perturbation * math.sqrt(30.0 * power * gain) / distance


@dataclass(frozen=True)
class SignalScenario:
    """Input microwave stimulus: a tone list or a linear frequency sweep.

    ``analysis_span`` records the spectrum-analyzer span around each beat
    (metadata only); ``measurement_time`` enters the sensitivity formula.
    """

    kind: str
    tones: tuple[tuple[float, float], ...] = ()
    sweep: tuple[float, float, int, float] | None = None
    analysis_span: float = 5e6
    measurement_time: float = 0.1

    def __post_init__(self) -> None:
        if self.kind not in ("tone-list", "linear-sweep"):
            raise DomainError(f"unknown scenario kind {self.kind!r}")
        if self.kind == "tone-list":
            if not self.tones:
                raise DomainError("tone-list scenario requires at least one tone")
            for f, e in self.tones:
                if f <= 0:
                    raise DomainError(f"tone frequency must be > 0, got {f}")
                if e < 0:
                    raise DomainError(f"tone field must be >= 0, got {e}")
        else:
            if self.sweep is None:
                raise DomainError("linear-sweep scenario requires sweep parameters")
            start, stop, points, field_ = self.sweep
            if start <= 0 or stop <= 0:
                raise DomainError("sweep frequencies must be > 0")
            if not start < stop:
                raise DomainError(
                    f"sweep start must be below stop, got [{start}, {stop}]"
                )
            if points < 2:
                raise DomainError(f"sweep needs at least 2 points, got {points}")
            if field_ < 0:
                raise DomainError(f"sweep field must be >= 0, got {field_}")

    @classmethod
    def tone_list(
        cls, tones: Sequence[tuple[float, float]], **kwargs
    ) -> "SignalScenario":
        return cls(kind="tone-list", tones=tuple(tones), **kwargs)

    @classmethod
    def linear_sweep(
        cls, start: float, stop: float, points: int, field: float, **kwargs
    ) -> "SignalScenario":
        return cls(kind="linear-sweep", sweep=(start, stop, points, field), **kwargs)

    def points(self) -> Iterator[tuple[float, float]]:
        """Yield (frequency, field) pairs in deterministic order."""
        if self.kind == "tone-list":
            yield from self.tones
        else:
            start, stop, n, field_ = self.sweep
            for f in np.linspace(start, stop, n):
                yield float(f), field_


@dataclass(frozen=True)
class BeatRow:
    """One evaluated signal frequency routed to its nearest channel."""

    signal_frequency: float
    channel_index: int
    delta_f: float
    beat_power: float
    above_noise: bool
    in_band: bool


@dataclass(frozen=True)
class BeatSpectrum:
    """Beat powers for a stimulus, one row per evaluated frequency."""

    rows: tuple[BeatRow, ...]


def _nearest_entry(lines: Sequence[float], frequency: float) -> int:
    # Brute-force nearest line; ties resolve to the lower index.
    best = 0
    best_dist = abs(frequency - lines[0])
    for i in range(1, len(lines)):
        d = abs(frequency - lines[i])
        if d < best_dist:
            best, best_dist = i, d
    return best


def _check_plan(plan: CellArrayPlan, responses: Sequence[ChannelResponse]) -> None:
    if not plan.entries:
        raise PlannerError("plan has no entries")
    if len(responses) != len(plan.entries):
        raise PlannerError(
            f"got {len(responses)} channel responses for {len(plan.entries)} "
            "plan entries"
        )


def _row(
    channel: ChannelResponse,
    index: int,
    frequency: float,
    delta_f: float,
    field: float,
) -> BeatRow:
    power = beat_power(channel, field, delta_f)
    above = field > 0 and field >= min_detectable_field(channel, delta_f)
    return BeatRow(
        signal_frequency=frequency,
        channel_index=index,
        delta_f=delta_f,
        beat_power=power,
        above_noise=above,
        in_band=abs(delta_f) <= channel.half_width_3db,
    )


def evaluate_channels(
    plan: CellArrayPlan,
    responses: Sequence[ChannelResponse],
    frequency: float,
    field: float,
) -> tuple[BeatRow, ...]:
    """Beat response of every channel to a single tone (isolation checks)."""
    _check_plan(plan, responses)
    return tuple(
        _row(responses[i], e.line_index, frequency, frequency - e.line_frequency, field)
        for i, e in enumerate(plan.entries)
    )


def stitched_response(
    plan: CellArrayPlan,
    responses: Sequence[ChannelResponse],
    scenario: SignalScenario,
) -> BeatSpectrum:
    """Broadband response stitched from the per-cell channels.

    Each stimulus frequency is routed to its nearest comb line and evaluated
    on that cell's channel; with monotone rolloff and equalized channels this
    per-frequency winner is the maximum over all channels, so the rows trace
    the stitched broadband curve. Frequencies outside every channel's 3 dB
    band are still evaluated but flagged ``in_band = False``.
    """
    _check_plan(plan, responses)
    lines = [e.line_frequency for e in plan.entries]
    rows = []
    for frequency, field in scenario.points():
        i = _nearest_entry(lines, frequency)
        rows.append(
            _row(
                responses[i],
                plan.entries[i].line_index,
                frequency,
                frequency - lines[i],
                field,
            )
        )
    return BeatSpectrum(rows=tuple(rows))
