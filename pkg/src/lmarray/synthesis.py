"""Closed-form computation of the per-symbol modulator loads.

Given the target port currents of one symbol pair, both load modulators
are solved so that three conditions hold simultaneously at the shared
feed node: both branch input voltages equal the feed voltage, the input
impedance equals the source impedance, and the feed voltage has zero
phase.  No iteration is involved; the solve is a handful of real
formulas built on the current ratio eta = I2/I1.

Everything is expressed through the per-unit-current port voltages

    v1 = V1/(Z0*I1) = r1 + j*x1      (drive-point, port 1)
    v2 = V2/(Z0*I1) = r2 + j*x2      (transfer to port 2)

and the projections w1 = Re(eta* v1), w2 = Re(eta* v2).  The branch
powers are then P1 = Z0|I1|^2 r1 and P2 = Z0|I1|^2 w2, and the total
input power coefficient is r1 + w2, which must be positive for any
passive antenna.

The production path fixes the feed phase first (the angle theta of I1
that makes the feed voltage real) and collapses everything to explicit
cos/sin expressions; a residual scalar s remains free in the shunt
coefficients and can be used to steer component values.  An older
two-free-parameter route (pick b1 and c2, solve the rest) is kept as an
independent cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .antenna import AntennaZMatrix
from .beamspace import BasisConfig, SymbolPair, currents_from_symbols, power_norm_factor
from .errors import (
    Degenerate,
    EtaUndefined,
    NegativeInputPower,
    RadicandError,
    SingularDelta,
    SingularOmega,
    ThetaNearPole,
    ZeroCurrentBranch,
)
from .twoport import (
    EPSILON_DIV,
    NormalizedABCD,
    ReactanceTuple,
    Topology,
    complete_d,
    reactances_from_abcd,
)

EPSILON_ETA = 1e-12
EPSILON_CURRENT = 1e-12
EPSILON_COS = 1e-12


@dataclass(frozen=True)
class DriveTerms:
    """Real decomposition of the port voltages per unit port-1 current."""

    r1: float  # Re(V1/(Z0 I1))
    x1: float  # Im(V1/(Z0 I1))
    r2: float  # Re(V2/(Z0 I1))
    x2: float  # Im(V2/(Z0 I1))
    cross_det: float  # x1*r2 - r1*x2
    eta_dot_v1: float  # Re(eta* v1)
    eta_dot_v2: float  # Re(eta* v2); branch-2 power coefficient

    def input_coeff(self) -> float:
        """Total input-power coefficient r1 + Re(eta* v2)."""
        return self.r1 + self.eta_dot_v2


def compute_drive_terms(zm: AntennaZMatrix, eta: complex) -> DriveTerms:
    """Drive terms for a current ratio eta = I2/I1.

    With the normalized matrix z = Z/Z0:
        v1 = z11 + eta*z12,   v2 = z21 + eta*z22.
    """
    zn = zm.normalized()
    v1 = zn[0][0] + eta * zn[0][1]
    v2 = zn[1][0] + eta * zn[1][1]
    return DriveTerms(
        r1=v1.real,
        x1=v1.imag,
        r2=v2.real,
        x2=v2.imag,
        cross_det=v1.imag * v2.real - v1.real * v2.imag,
        eta_dot_v1=(eta.conjugate() * v1).real,
        eta_dot_v2=(eta.conjugate() * v2).real,
    )


def wrap_angle(angle: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def target_theta(phi: float, angle_s2: float, eta: complex) -> float:
    """Phase that I1 must carry for a zero-phase feed voltage.

    theta = phi + angle(s2) - angle(eta), reduced to (-pi, pi].  The
    second-stream current has phase phi + angle(s2) by construction, so
    dividing out eta lands on I1.
    """
    if abs(eta) <= EPSILON_ETA:
        raise EtaUndefined(f"|eta| = {abs(eta):.3e} below {EPSILON_ETA:g}")
    return wrap_angle(phi + angle_s2 - cmath.phase(eta))


def _check_pivots(dt: DriveTerms) -> float:
    """Common pivot guards; returns sqrt of the input coefficient."""
    coeff = dt.input_coeff()
    if coeff <= 0.0:
        raise NegativeInputPower(f"input power coefficient {coeff:g} <= 0")
    if abs(dt.r1) <= EPSILON_DIV:
        raise SingularDelta(f"|r1| = {abs(dt.r1):.3e} below {EPSILON_DIV:g}")
    if abs(dt.eta_dot_v2) <= EPSILON_DIV:
        raise SingularOmega(
            f"branch-2 power coefficient {dt.eta_dot_v2:.3e} too small"
        )
    return math.sqrt(coeff)


def solve_ab(
    dt: DriveTerms, theta: float, eta: complex
) -> tuple[float, float, float, float]:
    """Series coefficients (a1, b1, a2, b2) of both modulators.

    Written in cos/sin form throughout so theta near +-90 degrees is
    regular:

        a1 = cos(t)/r1 * R             b1 = -(x1 cos + r1 sin)/r1 * R
        a2 = (er cos - ei sin)/w2 * R  b2 = -(x2 cos + r2 sin)/w2 * R

    with R = sqrt(r1 + w2) and eta = er + j*ei.
    """
    root = _check_pivots(dt)
    cos_t = math.cos(theta)
    sin_t = math.sin(theta)
    w2 = dt.eta_dot_v2
    a1 = cos_t / dt.r1 * root
    b1 = -(dt.x1 * cos_t + dt.r1 * sin_t) / dt.r1 * root
    a2 = (eta.real * cos_t - eta.imag * sin_t) / w2 * root
    b2 = -(dt.x2 * cos_t + dt.r2 * sin_t) / w2 * root
    return a1, b1, a2, b2


def solve_c(
    dt: DriveTerms, theta: float, eta: complex, s: float
) -> tuple[float, float]:
    """Shunt coefficients (c1, c2) for an arbitrary free scalar s.

        c1 = -s/r1 - sin(t)/R
        c2 = (er cos - ei sin)/(w2 cos) * s - (ei cos + er sin)/R

    The only pole in s sits at cos(t) = 0; s = 0 is always safe there.
    """
    root = _check_pivots(dt)
    cos_t = math.cos(theta)
    sin_t = math.sin(theta)
    w2 = dt.eta_dot_v2
    c1 = -s / dt.r1 - sin_t / root
    c2 = -(eta.imag * cos_t + eta.real * sin_t) / root
    if s != 0.0:
        if abs(cos_t) < EPSILON_COS:
            raise ThetaNearPole(
                f"|cos(theta)| = {abs(cos_t):.3e}: free parameter must be 0"
            )
        c2 += (eta.real * cos_t - eta.imag * sin_t) / (w2 * cos_t) * s
    return c1, c2


def input_power(i1: complex, dt: DriveTerms, z0: float) -> tuple[float, float, float]:
    """(Pin, P1, P2) in watts for a solved pair.

    Pin = Z0 |I1|^2 (r1 + w2), split in proportion r1 : w2.  Either
    branch share may be negative; the total may not.
    """
    coeff = dt.input_coeff()
    if coeff <= 0.0:
        raise NegativeInputPower(f"input power coefficient {coeff:g} <= 0")
    pin = z0 * abs(i1) ** 2 * coeff
    return pin, dt.r1 / coeff * pin, dt.eta_dot_v2 / coeff * pin


@dataclass(frozen=True)
class SynthesisResult:
    """Full per-pair solution: chain entries, loads, and diagnostics."""

    abcd1: NormalizedABCD
    abcd2: NormalizedABCD
    loads1: ReactanceTuple
    loads2: ReactanceTuple
    theta: float
    s_param: float
    i1: complex
    i2: complex
    vin: complex
    pin: float
    p1: float
    p2: float
    eta: complex


def synthesize(
    pair: SymbolPair,
    zm: AntennaZMatrix,
    cfg: BasisConfig | None = None,
    topology: Topology = Topology.T_WITH_TL,
    s: float = 0.0,
) -> SynthesisResult:
    """Solve both modulators for one symbol pair.

    Pipeline: power normalization -> port currents -> current ratio ->
    drive terms -> feed phase -> (a, b) -> (c) -> reciprocity d -> load
    values.  The feed voltage is evaluated from the solved branch (not
    assumed real), so its residual phase is an honest diagnostic.
    """
    if cfg is None:
        cfg = BasisConfig(z0=zm.z0)
    q = power_norm_factor(pair, zm, cfg)
    i1, i2 = currents_from_symbols(pair, cfg, q)
    if abs(i1) <= EPSILON_CURRENT:
        raise ZeroCurrentBranch(f"|I1| = {abs(i1):.3e} for pair {pair}")
    eta = i2 / i1
    dt = compute_drive_terms(zm, eta)
    theta = target_theta(cfg.phase_shift_rad, cmath.phase(pair.s2), eta)
    a1, b1, a2, b2 = solve_ab(dt, theta, eta)
    c1, c2 = solve_c(dt, theta, eta, s)
    abcd1 = NormalizedABCD(a1, b1, c1, complete_d(a1, b1, c1))
    abcd2 = NormalizedABCD(a2, b2, c2, complete_d(a2, b2, c2))
    vin = zm.z0 * complex(dt.r1 * a1, dt.x1 * a1 + b1) * i1
    pin, p1, p2 = input_power(i1, dt, zm.z0)
    return SynthesisResult(
        abcd1=abcd1,
        abcd2=abcd2,
        loads1=reactances_from_abcd(abcd1, topology),
        loads2=reactances_from_abcd(abcd2, topology),
        theta=theta,
        s_param=s,
        i1=i1,
        i2=i2,
        vin=vin,
        pin=pin,
        p1=p1,
        p2=p2,
        eta=eta,
    )


def procedure1_solve(
    dt: DriveTerms,
    eta: complex,
    b1_free: float,
    c2_free: float,
    branch: int = 1,
) -> tuple[float, float, float, float, float, float]:
    """Two-free-parameter solve: pick b1 and c2, derive the rest.

    Kept as an independent verification route for the production path
    and for exploring the (b1, c2) design freedom.  The matched-input
    condition reduces to a quadratic constraint on a1,

        (r1^2 + x1^2) a1^2 + 2 x1 b1 a1 + b1^2 = r1 + w2,

    whose root is selected by ``branch`` (+1/-1).  b2 and a2 then
    follow from the equal-branch-voltage relations

        a1 = (w2*b2 - r2*b1) / det,   a2 = (w1*b2 - r1*b1) / det,

    c1 from the remaining matched-input row, and d1, d2 from
    reciprocity.

    Returns (a1, a2, b2, c1, d1, d2).
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    coeff = dt.input_coeff()
    if coeff <= 0.0:
        raise NegativeInputPower(f"input power coefficient {coeff:g} <= 0")
    if abs(dt.cross_det) <= EPSILON_DIV:
        raise Degenerate(
            f"cross determinant {dt.cross_det:.3e} vanishes (symmetric excitation)"
        )
    if abs(dt.eta_dot_v2) <= EPSILON_DIV:
        raise SingularOmega(
            f"branch-2 power coefficient {dt.eta_dot_v2:.3e} too small"
        )
    if abs(dt.r1) <= EPSILON_DIV:
        raise SingularDelta(f"|r1| = {abs(dt.r1):.3e} below {EPSILON_DIV:g}")
    mag_sq = dt.r1 * dt.r1 + dt.x1 * dt.x1
    disc = mag_sq * coeff - dt.r1 * dt.r1 * b1_free * b1_free
    if disc < 0.0:
        raise RadicandError(
            f"|b1| = {abs(b1_free):g} exceeds the realizable bound "
            f"{math.sqrt(mag_sq * coeff) / abs(dt.r1):g}"
        )
    a1 = (-dt.x1 * b1_free + branch * math.sqrt(disc)) / mag_sq
    b2 = (dt.cross_det * a1 + dt.r2 * b1_free) / dt.eta_dot_v2
    a2 = (dt.eta_dot_v1 * b2 - dt.r1 * b1_free) / dt.cross_det
    if abs(a2) <= EPSILON_DIV:
        raise Degenerate(f"|a2| = {abs(a2):.3e}: shunt row unsolvable")
    c1 = (
        dt.x1 * a1
        + b1_free
        - eta.imag / a2
        - (dt.r2 - eta.imag * b2 / a2) * c2_free
    ) / dt.r1
    d1 = complete_d(a1, b1_free, c1)
    d2 = complete_d(a2, b2, c2_free)
    return a1, a2, b2, c1, d1, d2
