"""Independent linear solve of the fully loaded two-branch network.

Ground truth for the closed-form synthesis: given two concrete load
tuples, the antenna Z matrix, and a feed voltage, solve the network by
direct Kirchhoff elimination and report currents, node voltages, input
impedance, and powers.  Nothing from the synthesis formulas is reused;
only the chain-matrix propagation and the antenna terminal relation
V = Z*I enter, so agreement between the two paths is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .antenna import AntennaZMatrix
from .errors import SingularNetwork
from .twoport import ReactanceTuple, abcd_from_reactances

SINGULARITY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class OracleSolution:
    """Solved state of the loaded network for one feed voltage."""

    vin: complex
    iin: complex
    i1: complex
    i2: complex
    v1: complex
    v2: complex
    zin: complex
    p1: float
    p2: float
    pin: float
    prad: float


def solve_network(
    loads1: ReactanceTuple,
    loads2: ReactanceTuple,
    zm: AntennaZMatrix,
    vin: complex,
) -> OracleSolution:
    """Solve the two-branch network driven by a fixed feed voltage.

    Both modulator inputs sit on the feed node, so each branch gives
    one equation in the antenna port currents:

        a_i*V_i + j*Z0*b_i*I_i = Vin,   V = Z*I.

    That is a 2x2 complex system in (I1, I2), solved in closed form.
    The feed current is recovered by propagating each branch back
    through its chain matrix and summing at the node.

    Raises SingularNetwork when the system determinant is numerically
    zero relative to the entry scale.
    """
    n1 = abcd_from_reactances(loads1)
    n2 = abcd_from_reactances(loads2)
    z0 = zm.z0

    m11 = n1.a * zm.z11 + 1j * z0 * n1.b
    m12 = n1.a * zm.z12
    m21 = n2.a * zm.z21
    m22 = n2.a * zm.z22 + 1j * z0 * n2.b

    det = m11 * m22 - m12 * m21
    scale = max(abs(m11) * abs(m22), abs(m12) * abs(m21), 1e-300)
    if abs(det) < SINGULARITY_THRESHOLD * scale:
        raise SingularNetwork(f"branch system determinant {abs(det):.3e} ~ 0")

    i1 = vin * (m22 - m12) / det
    i2 = vin * (m11 - m21) / det

    v1 = zm.z11 * i1 + zm.z12 * i2
    v2 = zm.z21 * i1 + zm.z22 * i2
    iin_1 = 1j * (n1.c / z0) * v1 + n1.d * i1
    iin_2 = 1j * (n2.c / z0) * v2 + n2.d * i2
    iin = iin_1 + iin_2
    if iin == 0:
        zin = complex(float("inf"), 0.0)
    else:
        zin = vin / iin

    p1 = (v1 * i1.conjugate()).real
    p2 = (v2 * i2.conjugate()).real
    pin = (vin * iin.conjugate()).real
    return OracleSolution(
        vin=vin,
        iin=iin,
        i1=i1,
        i2=i2,
        v1=v1,
        v2=v2,
        zin=zin,
        p1=p1,
        p2=p2,
        pin=pin,
        prad=p1 + p2,
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance


@dataclass(frozen=True)
class VerificationReport:
    """Per-check residuals of a synthesized solution against the solver."""

    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok" if c.passed else "FAIL"
            lines.append(f"{c.name}: {c.residual:.3e} (tol {c.tolerance:g}) {status}")
        return "\n".join(lines)


def verify(result, zm: AntennaZMatrix, tol_z: float = 1e-6, tol_rel: float = 1e-9) -> VerificationReport:
    """Re-solve a SynthesisResult's network and grade it.

    Checks: input impedance against Z0 (absolute, ohms), both port
    currents against the synthesis targets (relative), feed-voltage
    phase, and power conservation Pin = P1 + P2 (relative).  Failures
    are reported, not raised.
    """
    sol = solve_network(result.loads1, result.loads2, zm, result.vin)
    i_scale = max(abs(result.i1), abs(result.i2))
    vin_mag = max(abs(result.vin), 1e-300)
    pin_mag = max(abs(sol.pin), 1e-300)
    checks = (
        CheckResult("zin_ohm", abs(sol.zin - zm.z0), tol_z),
        CheckResult("i1_rel", abs(sol.i1 - result.i1) / i_scale, tol_rel),
        CheckResult("i2_rel", abs(sol.i2 - result.i2) / i_scale, tol_rel),
        CheckResult("vin_phase", abs(result.vin.imag) / vin_mag, tol_rel),
        CheckResult("power_residual", abs(sol.pin - sol.prad) / pin_mag, tol_rel),
    )
    return VerificationReport(checks=checks)
