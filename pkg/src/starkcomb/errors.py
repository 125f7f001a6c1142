"""Exception hierarchy for the starkcomb package."""


class StarkCombError(Exception):
    """Base class for all starkcomb errors."""


class DomainError(StarkCombError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UnreachableFrequencyError(DomainError):
    """Target frequency lies below the field-free transition frequency."""


class DegenerateTransitionError(DomainError):
    """Transition has zero differential polarizability and cannot be tuned."""


class ProfileRangeError(StarkCombError):
    """Position lies outside the valid range of a field profile."""


class UnderdeterminedError(StarkCombError):
    """Too few (or degenerate) anchors to fit a field profile."""


class InfeasibleProfileError(StarkCombError):
    """Anchor set is inconsistent with a monotone decaying field profile."""


class CoverageError(StarkCombError):
    """A frequency falls outside the band reachable by the array or comb."""


class PlannerError(StarkCombError):
    """Cell placement failed or produced an invalid plan."""


class InfeasiblePlanError(PlannerError):
    """Placement succeeded but violates the minimum cell spacing."""


class RegimeError(StarkCombError):
    """Operation invoked outside its validity regime (e.g. too weak a field)."""


class SolverError(StarkCombError):
    """Numerical solve failed to meet its residual requirement."""


class DegenerateSystemError(SolverError):
    """Steady state is not unique (disconnected or undamped level structure)."""


class ConfigError(StarkCombError):
    """Configuration file is missing, malformed, or violates the schema."""
