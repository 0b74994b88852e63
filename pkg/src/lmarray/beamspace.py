"""Mapping from multiplexed symbol pairs to antenna port currents.

Two data streams are not driven onto the two elements directly; each
stream weights one of two orthonormal basis patterns of the coupled
pair.  For the closely spaced two-element array the basis construction
collapses to a fixed 2x2 real matrix built from J0(b), where b is the
electrical spacing argument (2*pi*d/lambda).  The port currents for a
symbol pair (s1, s2) are

    I1 = (q*e^{j*phi}/sqrt(2*pi)) * (s1 - g/r * s2)
    I2 = (q*e^{j*phi}/sqrt(2*pi)) * s2 / r

with g = J0(b), r = sqrt(1 - g^2).  The scalar q normalizes the
radiated power of each pair to a fixed fraction of the peak power, and
phi is a constant phase shift applied to both streams.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .antenna import AntennaZMatrix
from .errors import InvalidBasis, NonPositivePower

#: First zero of J0; the basis matrix is singular there.
J0_FIRST_ZERO = 2.404825557695773

#: Square 16-QAM alphabet on the unnormalized {+-1, +-3} grid.  All
#: power scaling flows through q and the feed voltage, so the grid is
#: stored raw.
QAM16 = tuple(
    complex(re, im) for re in (-3, -1, 1, 3) for im in (3, 1, -1, -3)
)

TWO_PI = 2.0 * math.pi


def bessel_j0(x: float) -> float:
    """Ordinary Bessel function of order zero by its ascending series.

    Sum of (-1)^k (x/2)^{2k} / (k!)^2 with an explicit term bound; for
    |x| <= 3 forty terms leave the relative truncation error far below
    1e-14, so no asymptotic branch is needed at this argument range.
    """
    if x < 0.0:
        raise ValueError("argument must be >= 0")
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, 40):
        term *= -q / (k * k)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return total


@dataclass(frozen=True)
class SymbolPair:
    """One multiplexed symbol pair; s1 weights basis 1, s2 basis 2."""

    s1: complex
    s2: complex

    def power_sum(self) -> float:
        return abs(self.s1) ** 2 + abs(self.s2) ** 2


@dataclass(frozen=True)
class BasisConfig:
    """Fixed parameters of the basis construction and power scaling.

    b must stay below the first J0 zero so the current-mapping matrix
    is real and finite.  Defaults: b = pi/4 (lambda/8 element spacing),
    phi = -10 degrees, 50 ohm source, 1 W peak radiated power, 16-QAM.
    """

    b: float = math.pi / 4.0
    phase_shift_rad: float = math.radians(-10.0)
    z0: float = 50.0
    prad_max: float = 1.0
    constellation: tuple = field(default=QAM16)

    def __post_init__(self):
        if not (0.0 < self.b < J0_FIRST_ZERO):
            raise InvalidBasis(f"b={self.b!r} outside (0, {J0_FIRST_ZERO})")
        if not self.prad_max > 0.0:
            raise ValueError("prad_max must be positive")
        if not self.z0 > 0.0:
            raise ValueError("z0 must be positive")

    def basis_gain(self) -> tuple[float, float]:
        """(g, r) with g = J0(b) and r = sqrt(1 - g^2).

        Raises InvalidBasis when 1 - g^2 is not positive (singular
        mapping in the b -> 0 limit).
        """
        g = bessel_j0(self.b)
        rsq = 1.0 - g * g
        if rsq <= 0.0:
            raise InvalidBasis(f"basis matrix singular: 1 - J0(b)^2 = {rsq:g}")
        return g, math.sqrt(rsq)

    def peak_power_sum(self) -> float:
        """Largest |s1|^2 + |s2|^2 over the alphabet (36 for 16-QAM)."""
        peak = max(abs(c) ** 2 for c in self.constellation)
        return 2.0 * peak


def target_radiated_power(pair: SymbolPair, cfg: BasisConfig) -> float:
    """Radiated power assigned to a pair: its power sum relative to the
    alphabet peak, times the configured maximum."""
    return pair.power_sum() / cfg.peak_power_sum() * cfg.prad_max


def feeding_voltage(pair: SymbolPair, cfg: BasisConfig) -> float:
    """Feed voltage magnitude delivering the pair's radiated power into
    a matched Z0 input: |Vin| = sqrt(P_target * Z0)."""
    return math.sqrt(target_radiated_power(pair, cfg) * cfg.z0)


def power_norm_factor(pair: SymbolPair, zm: AntennaZMatrix, cfg: BasisConfig) -> float:
    """Scale factor q making the radiated power of the mapped currents
    equal the pair's target power.

    The radiated power of the mapped currents is a quadratic form in
    (|s1|^2, |s2|^2, Re(s1* s2)) with coefficients from the normalized
    resistances and (g, r):

        P = Z0 * (q^2 / 2 pi) * [ z11r*|s1|^2
              + (z11r*g^2 - 2*z21r*g + z22r) * |s2|^2 / r^2
              - 2*(z11r*g - z21r) * Re(s1* s2) / r ]

    q is the positive root making P equal the target.  Raises
    NonPositivePower when the bracket is not positive for a nonzero
    pair (non-passive Z matrix).
    """
    g, r = cfg.basis_gain()
    zn = zm.normalized()
    z11r = zn[0][0].real
    z21r = zn[1][0].real
    z22r = zn[1][1].real
    p1 = abs(pair.s1) ** 2
    p2 = abs(pair.s2) ** 2
    cross = (pair.s1.conjugate() * pair.s2).real
    bracket = (
        z11r * p1
        + (z11r * g * g - 2.0 * z21r * g + z22r) * p2 / (r * r)
        - 2.0 * (z11r * g - z21r) * cross / r
    )
    target = target_radiated_power(pair, cfg)
    if target == 0.0:
        return 0.0
    if bracket <= 0.0:
        raise NonPositivePower(
            f"radiated-power form non-positive ({bracket:g}) for pair {pair}"
        )
    return math.sqrt(TWO_PI * target / (cfg.z0 * bracket))


def currents_from_symbols(
    pair: SymbolPair, cfg: BasisConfig, q: float
) -> tuple[complex, complex]:
    """Antenna port currents (I1, I2) for a pair with a given q."""
    g, r = cfg.basis_gain()
    k = q / math.sqrt(TWO_PI) * cmath.exp(1j * cfg.phase_shift_rad)
    i1 = k * (pair.s1 - (g / r) * pair.s2)
    i2 = k * (pair.s2 / r)
    return i1, i2


def radiated_power(i1: complex, i2: complex, zm: AntennaZMatrix) -> float:
    """Re(V1 I1* + V2 I2*) with V = Z I; the power delivered into the
    antenna ports by a current pair.  Used as the independent check of
    the q normalization."""
    v1 = zm.z11 * i1 + zm.z12 * i2
    v2 = zm.z21 * i1 + zm.z22 * i2
    return (v1 * i1.conjugate() + v2 * i2.conjugate()).real
