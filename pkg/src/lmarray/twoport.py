"""Lossless two-port algebra for the tunable reactance load modulators.

Each load modulator is a purely reactive two-port described by the chain
matrix

    [V'] = [ a      j*Z0*b ] [V]
    [I']   [ j*c/Z0   d    ] [I]

with real, dimensionless entries (a, b, c, d).  The imaginary unit and
the Z0 scaling appear only here and in the circuit solver; everything
else in the package manipulates the real quadruple.  Reciprocity of a
lossless reactive network pins the determinant:  a*d + b*c = 1.

Two realizations are supported: a T-section of three reactances with a
feed line (the triple is (x1, y2, x3): series-x, shunt-y, series-x,
normalized to Z0) and a Pi-section without a line (triple (y1, x2, y3):
shunt-y, series-x, shunt-y).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateTopology

#: Pivot threshold for the analytic inversions.  Normalized entries are
#: O(1) for realizable designs, so anything below this is treated as a
#: genuinely degenerate topology rather than rounding noise.
EPSILON_DIV = 1e-9


class Topology(enum.Enum):
    T_WITH_TL = "t_with_tl"
    PI_NO_TL = "pi_no_tl"


@dataclass(frozen=True)
class NormalizedABCD:
    """Real quadruple of a normalized lossless chain matrix."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite chain entry {name}")

    def reciprocity_residual(self) -> float:
        """a*d + b*c - 1; zero for any reciprocal lossless two-port."""
        return self.a * self.d + self.b * self.c - 1.0


@dataclass(frozen=True)
class ReactanceTuple:
    """Three normalized load values of one modulator.

    For T_WITH_TL the triple is (x1, y2, x3); for PI_NO_TL it is
    (y1, x2, y3).  x values are reactances over Z0, y values are
    susceptances times Z0.
    """

    topology: Topology
    v1: float
    v2: float
    v3: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.v1, self.v2, self.v3))):
            raise ValueError("non-finite load value")

    def denormalized(self, z0: float) -> tuple[float, float, float]:
        """Component values in SI units.

        T_WITH_TL: (X1 ohm, B2 siemens, X3 ohm).
        PI_NO_TL:  (B1 siemens, X2 ohm, B3 siemens).
        """
        if self.topology is Topology.T_WITH_TL:
            return (self.v1 * z0, self.v2 / z0, self.v3 * z0)
        return (self.v1 / z0, self.v2 * z0, self.v3 / z0)


def abcd_from_t_with_tl(t: ReactanceTuple) -> NormalizedABCD:
    """Chain entries of the T-section-with-line modulator.

    a = -y2, b = 1 - x3*y2, c = 1 - x1*y2, d = -x3 - x1*(1 - x3*y2).
    The parametrization satisfies a*d + b*c = 1 identically.
    """
    if t.topology is not Topology.T_WITH_TL:
        raise ValueError(f"expected T_WITH_TL tuple, got {t.topology}")
    x1, y2, x3 = t.v1, t.v2, t.v3
    b = 1.0 - x3 * y2
    return NormalizedABCD(a=-y2, b=b, c=1.0 - x1 * y2, d=-x3 - x1 * b)


def abcd_from_pi_no_tl(t: ReactanceTuple) -> NormalizedABCD:
    """Chain entries of the Pi-section modulator.

    a = -y3 - y1*(1 - x2*y3), b = 1 - x2*y1, c = 1 - x2*y3, d = -x2.
    """
    if t.topology is not Topology.PI_NO_TL:
        raise ValueError(f"expected PI_NO_TL tuple, got {t.topology}")
    y1, x2, y3 = t.v1, t.v2, t.v3
    c = 1.0 - x2 * y3
    return NormalizedABCD(a=-y3 - y1 * c, b=1.0 - x2 * y1, c=c, d=-x2)


def abcd_from_reactances(t: ReactanceTuple) -> NormalizedABCD:
    """Dispatch on the tuple's topology."""
    if t.topology is Topology.T_WITH_TL:
        return abcd_from_t_with_tl(t)
    return abcd_from_pi_no_tl(t)


def reactances_from_abcd(abcd: NormalizedABCD, topology: Topology) -> ReactanceTuple:
    """Invert the chain parametrization back to the three load values.

    T_WITH_TL pivots on a (y2 = -a, x3 = (b-1)/a, x1 = (c-1)/a);
    PI_NO_TL pivots on d (x2 = -d, y1 = (b-1)/d, y3 = (c-1)/d).

    Raises DegenerateTopology when the pivot entry is numerically zero,
    meaning this topology cannot realize the requested network.
    """
    if topology is Topology.T_WITH_TL:
        if abs(abcd.a) <= EPSILON_DIV:
            raise DegenerateTopology(
                f"T-with-line pivot |a|={abs(abcd.a):.3e} below {EPSILON_DIV:g}"
            )
        return ReactanceTuple(
            topology,
            v1=(abcd.c - 1.0) / abcd.a,
            v2=-abcd.a,
            v3=(abcd.b - 1.0) / abcd.a,
        )
    if abs(abcd.d) <= EPSILON_DIV:
        raise DegenerateTopology(
            f"Pi pivot |d|={abs(abcd.d):.3e} below {EPSILON_DIV:g}"
        )
    return ReactanceTuple(
        topology,
        v1=(abcd.b - 1.0) / abcd.d,
        v2=-abcd.d,
        v3=(abcd.c - 1.0) / abcd.d,
    )


def complete_d(a: float, b: float, c: float) -> float:
    """Fourth chain entry from the reciprocity relation d = (1 - b*c)/a."""
    if abs(a) <= EPSILON_DIV:
        raise DegenerateTopology(f"cannot complete d: |a|={abs(a):.3e}")
    return (1.0 - b * c) / a


def propagate(
    abcd: NormalizedABCD, v: complex, i: complex, z0: float
) -> tuple[complex, complex]:
    """Map antenna-side (V, I) to feed-side (V', I') through the two-port.

    V' = a*V + j*Z0*b*I,  I' = j*(c/Z0)*V + d*I.
    """
    v_out = abcd.a * v + 1j * z0 * abcd.b * i
    i_out = 1j * (abcd.c / z0) * v + abcd.d * i
    return v_out, i_out
