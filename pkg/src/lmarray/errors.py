"""Exception types raised by the synthesis and simulation pipeline.

Every failure mode that a caller can act on gets its own class; all of
them derive from LmArrayError so batch drivers can catch one type and
record a per-row status string.
"""


class LmArrayError(Exception):
    """Base class for all library errors."""


class ValidationError(LmArrayError):
    """Input data violates a structural invariant (non-reciprocal or
    non-passive impedance matrix, malformed document, bad config)."""


class DegenerateTopology(LmArrayError):
    """The requested loading topology cannot realize this ABCD quadruple
    because the inversion pivot is (numerically) zero.  Switch topology
    or move the free parameter."""


class InvalidBasis(LmArrayError):
    """Basis parameter makes the current-mapping matrix singular
    (element spacing argument at or past the first Bessel zero)."""


class NonPositivePower(LmArrayError):
    """Power-normalization radicand is not positive; the impedance
    matrix is not passive for this excitation."""


class EtaUndefined(LmArrayError):
    """Current ratio is undefined (|I2/I1| pivot below threshold)."""


class ZeroCurrentBranch(LmArrayError):
    """Reference branch current is numerically zero; the per-symbol
    solve is not defined for this pair."""


class NegativeInputPower(LmArrayError):
    """Total input power coefficient came out non-positive; indicates a
    non-passive impedance matrix or an inconsistent current ratio."""


class SingularDelta(LmArrayError):
    """Port-1 drive coefficient is numerically zero; the closed-form
    load solve has no solution with this element ordering."""


class SingularOmega(LmArrayError):
    """Branch-2 power coefficient is numerically zero; the closed-form
    load solve has no solution with this element ordering."""


class ThetaNearPole(LmArrayError):
    """Feed-phase angle is at +/-90 degrees where the free-parameter
    term diverges; retry with the free parameter set to zero."""


class RadicandError(LmArrayError):
    """Free value in the two-parameter solve is too large in magnitude;
    the square-root argument went negative."""


class Degenerate(LmArrayError):
    """Cross determinant of the drive coefficients vanishes
    (symmetric-excitation case); the two-parameter solve is singular."""


class SingularNetwork(LmArrayError):
    """The loaded-network linear system is singular and cannot be
    solved for the port currents."""


class ConfigError(LmArrayError):
    """Simulation or CLI configuration is unusable (empty grid, zero
    budgets, missing files)."""
