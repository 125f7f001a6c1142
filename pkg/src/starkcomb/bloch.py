"""Steady-state optical Bloch equations for the four-level receiver ladder.

Level structure (basis order used throughout):

    0  |g>   ground state
    1  |e>   intermediate state, probed on |g> -> |e>
    2  |r1>  first Rydberg state, coupled on |e> -> |r1>
    3  |r2>  second Rydberg state, driven by the microwave LO on |r1> -> |r2>

The rotating-frame Hamiltonian (hbar = 1, all rates in rad/s) is

    H = -Dp |e><e| - (Dp+Dc) |r1><r1| - (Dp+Dc+Dmw) |r2><r2|
        + (Op/2)(|g><e| + h.c.) + (Oc/2)(|e><r1| + h.c.)
        + (Omw/2)(|r1><r2| + h.c.)

with Lindblad decay |e> -> |g> at ``decay_e``, cascade decays
|r1> -> |e> at ``decay_r1`` and |r2> -> |r1> at ``decay_r2``, and pure
dephasing of each Rydberg level at ``dephasing`` (a proxy for laser
linewidth and transit broadening). A single zero-velocity class is modeled;
Doppler averaging is out of scope.

The steady state solves the vectorized Liouvillian with a trace constraint.
The beat note produced by mixing a weak signal with the LO is modeled
quasi-statically: its amplitude is the derivative of the probe absorption
with respect to the microwave Rabi frequency at the LO operating point
(:func:`heterodyne_gain`) times the signal Rabi frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateSystemError, DomainError, RegimeError, SolverError

__all__ = [
    "LadderSystem",
    "DensityMatrixSolution",
    "steady_state",
    "probe_absorption",
    "at_splitting",
    "heterodyne_gain",
]

_RESIDUAL_LIMIT = 1e-9

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LadderSystem:
    """Drive and relaxation parameters of the four-level ladder, in rad/s."""

    probe_rabi: float
    coupling_rabi: float
    mw_rabi: float
    probe_detuning: float = 0.0
    coupling_detuning: float = 0.0
    mw_detuning: float = 0.0
    decay_e: float = _TWO_PI * 5.2e6
    decay_r1: float = _TWO_PI * 10e3
    decay_r2: float = _TWO_PI * 10e3
    dephasing: float = _TWO_PI * 100e3

    def __post_init__(self) -> None:
        for name in ("probe_rabi", "coupling_rabi", "mw_rabi"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("decay_r1", "decay_r2", "dephasing"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.decay_e <= 0:
            raise DomainError(f"decay_e must be > 0, got {self.decay_e}")


@dataclass(frozen=True)
class DensityMatrixSolution:
    """Steady-state density matrix and the norm of its Liouvillian residual.

    ``residual_norm`` is measured after rescaling all system rates by their
    maximum, so it is dimensionless and comparable across parameter regimes.
    """

    rho: np.ndarray
    residual_norm: float


def _lowering(i: int, j: int) -> np.ndarray:
    op = np.zeros((4, 4), dtype=complex)
    op[i, j] = 1.0
    return op


def _liouvillian(system: LadderSystem, scale: float) -> np.ndarray:
    """Vectorized Liouvillian (column-major stacking), rates divided by ``scale``."""
    s = system
    h = np.zeros((4, 4), dtype=complex)
    h[1, 1] = -s.probe_detuning
    h[2, 2] = -(s.probe_detuning + s.coupling_detuning)
    h[3, 3] = -(s.probe_detuning + s.coupling_detuning + s.mw_detuning)
    h[0, 1] = h[1, 0] = s.probe_rabi / 2.0
    h[1, 2] = h[2, 1] = s.coupling_rabi / 2.0
    h[2, 3] = h[3, 2] = s.mw_rabi / 2.0
    h /= scale

    collapse = []
    for rate, (i, j) in (
        (s.decay_e, (0, 1)),
        (s.decay_r1, (1, 2)),
        (s.decay_r2, (2, 3)),
    ):
        if rate > 0:
            collapse.append(math.sqrt(rate / scale) * _lowering(i, j))
    if s.dephasing > 0:
        for level in (2, 3):
            collapse.append(math.sqrt(2.0 * s.dephasing / scale) * _lowering(level, level))

    eye = np.eye(4, dtype=complex)
    liouv = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for c in collapse:
        cdc = c.conj().T @ c
        liouv += np.kron(c.conj(), c)
        liouv -= 0.5 * (np.kron(eye, cdc) + np.kron(cdc.T, eye))
    return liouv


def steady_state(system: LadderSystem) -> DensityMatrixSolution:
    """Solve the Lindblad steady state of the ladder.

    The 16-dimensional null-space problem is augmented with the unit-trace
    row and solved by least squares. Raises
    :class:`DegenerateSystemError` when the steady state is not unique
    (rank-deficient Liouvillian, e.g. an undriven, undamped level) and
    :class:`SolverError` when the residual exceeds ``1e-9``.
    """
    s = system
    scale = max(
        s.probe_rabi, s.coupling_rabi, s.mw_rabi,
        abs(s.probe_detuning), abs(s.coupling_detuning), abs(s.mw_detuning),
        s.decay_e, s.decay_r1, s.decay_r2, s.dephasing,
    )
    liouv = _liouvillian(s, scale)

    trace_row = np.zeros((1, 16), dtype=complex)
    trace_row[0, [0, 5, 10, 15]] = 1.0
    stacked = np.vstack([liouv, trace_row])
    rhs = np.zeros(17, dtype=complex)
    rhs[16] = 1.0

    solution, _, rank, _ = np.linalg.lstsq(stacked, rhs, rcond=None)
    if rank < 16:
        raise DegenerateSystemError(
            f"steady state is not unique (rank {rank} < 16); the level "
            "structure is disconnected or undamped"
        )

    residual = float(np.linalg.norm(liouv @ solution))
    if residual > _RESIDUAL_LIMIT:
        raise SolverError(
            f"steady-state residual {residual:.3e} exceeds {_RESIDUAL_LIMIT:g}"
        )
    rho = solution.reshape((4, 4), order="F")
    return DensityMatrixSolution(rho=rho, residual_norm=residual)


def probe_absorption(system: LadderSystem) -> float:
    """Probe absorption, normalized to the resonant two-level value.

    Returns ``Im(rho_ge) * decay_e / probe_rabi``, which is 1 for a weak
    resonant probe with no coupling or microwave field and 0 under ideal
    transparency.
    """
    if system.probe_rabi <= 0:
        raise DomainError("probe_rabi must be > 0 to define probe absorption")
    rho = steady_state(system).rho
    return float(rho[0, 1].imag * system.decay_e / system.probe_rabi)


def at_splitting(system: LadderSystem, probe_sweep: np.ndarray) -> float:
    """Transmission-peak separation under a strong resonant microwave field.

    Sweeps the probe detuning over ``probe_sweep`` (rad/s), locates the two
    deepest transparency windows by local-minimum detection with quadratic
    peak interpolation, and returns their separation in Hz. In the
    strong-field regime the separation equals the microwave Rabi frequency.

    Raises :class:`RegimeError` below the strong-field regime
    (``mw_rabi < 5 * decay_e``) or when fewer than two windows are found.
    """
    if system.mw_rabi < 5.0 * system.decay_e:
        raise RegimeError(
            f"mw_rabi = {system.mw_rabi:.3e} rad/s is below the strong-field "
            f"regime (5 * decay_e = {5.0 * system.decay_e:.3e} rad/s)"
        )
    detunings = np.asarray(probe_sweep, dtype=float)
    if detunings.ndim != 1 or detunings.size < 5:
        raise DomainError("probe_sweep must be a 1-D array of at least 5 detunings")

    absorption = np.array(
        [probe_absorption(replace(system, probe_detuning=d)) for d in detunings]
    )

    minima = []
    for i in range(1, detunings.size - 1):
        if absorption[i] < absorption[i - 1] and absorption[i] < absorption[i + 1]:
            # Quadratic interpolation through the three points around the dip.
            denom = absorption[i - 1] - 2.0 * absorption[i] + absorption[i + 1]
            step = detunings[i + 1] - detunings[i]
            shift = 0.0
            if denom != 0.0:
                shift = 0.5 * step * (absorption[i - 1] - absorption[i + 1]) / denom
            minima.append((absorption[i], detunings[i] + shift))

    if len(minima) < 2:
        raise RegimeError(
            f"found {len(minima)} transparency window(s); need two to measure "
            "a splitting (widen or refine the probe sweep)"
        )
    minima.sort(key=lambda m: m[0])
    (_, d1), (_, d2) = minima[0], minima[1]
    return abs(d2 - d1) / _TWO_PI


def heterodyne_gain(system: LadderSystem) -> float:
    """Derivative of probe absorption with respect to the microwave Rabi rate.

    Central finite difference at the LO operating point ``system.mw_rabi``
    with step ``max(1e-4 * mw_rabi, 2*pi*1 kHz)``. The beat-note amplitude
    produced by a weak signal of Rabi frequency ``omega_sig`` is
    ``heterodyne_gain(system) * omega_sig`` for ``omega_sig << mw_rabi``.
    """
    lo = system.mw_rabi
    if lo <= 0:
        raise DomainError("mw_rabi must be > 0 to define the heterodyne gain")
    h = max(1e-4 * lo, _TWO_PI * 1e3)
    if h >= lo:
        raise DomainError(
            f"mw_rabi = {lo:.3e} rad/s is too small for the finite-difference "
            f"step {h:.3e} rad/s"
        )
    upper = probe_absorption(replace(system, mw_rabi=lo + h))
    lower = probe_absorption(replace(system, mw_rabi=lo - h))
    return (upper - lower) / (2.0 * h)
