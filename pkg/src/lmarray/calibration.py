"""Reference operating table and the enumeration/spacing calibration.

The published operating table for the default antenna fixture lists the
feed voltage, port currents, phase, and branch powers of the first 16
entries of a 256-pair sweep, printed to three decimals.  Neither the
exact pair ordering behind those rows nor the numeric spacing argument
b is stated anywhere, so both are recovered empirically: candidate
orderings of the 16-QAM grid are scored against the table and b is
swept on a grid around pi/4 (the value implied by the lambda/8
spacing).  The winner is frozen below and re-derivable at any time via
``calibrate``.

Outcome (for the shipped fixture): the table rows keep the first
stream fixed at -1+3j and sweep the second stream over the grid in
real-ascending, imag-descending order; b = pi/4 reproduces every row
to well inside print precision (max deviation ~7e-4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .antenna import AntennaZMatrix, reference_fixture
from .beamspace import (
    BasisConfig,
    QAM16,
    SymbolPair,
    currents_from_symbols,
    feeding_voltage,
    power_norm_factor,
)
from .synthesis import compute_drive_terms, input_power

#: Published reference rows for the default fixture: (Vin, I1, I2,
#: phase shift in degrees, P1, P2), three printed decimals each.
REFERENCE_TABLE = (
    (6.236, 0.060 - 0.043j, -0.079 + 0.113j, -10.0, 0.173, 0.605),
    (5.270, 0.072 + 0.012j, -0.095 + 0.051j, -10.0, 0.280, 0.275),
    (5.270, 0.073 + 0.061j, -0.094 - 0.014j, -10.0, 0.421, 0.135),
    (6.236, 0.071 + 0.098j, -0.091 - 0.064j, -10.0, 0.569, 0.209),
    (5.270, 0.006 - 0.039j, -0.018 + 0.118j, -10.0, -0.015, 0.571),
    (4.082, 0.022 + 0.032j, -0.040 + 0.057j, -10.0, 0.166, 0.167),
    (4.082, 0.026 + 0.082j, -0.041 - 0.029j, -10.0, 0.360, -0.026),
    (5.270, 0.028 + 0.107j, -0.040 - 0.074j, -10.0, 0.461, 0.095),
    (5.270, -0.055 - 0.026j, 0.054 + 0.100j, -10.0, -0.053, 0.609),
    (4.082, -0.053 + 0.041j, 0.050 + 0.035j, -10.0, 0.068, 0.266),
    (4.082, -0.031 + 0.086j, 0.027 - 0.038j, -10.0, 0.276, 0.058),
    (5.270, -0.017 + 0.111j, 0.012 - 0.081j, -10.0, 0.416, 0.140),
    (6.236, -0.096 - 0.013j, 0.104 + 0.073j, -10.0, 0.063, 0.715),
    (5.270, -0.088 + 0.038j, 0.094 + 0.014j, -10.0, 0.135, 0.421),
    (5.270, -0.072 + 0.080j, 0.076 - 0.041j, -10.0, 0.276, 0.279),
    (6.236, -0.058 + 0.114j, 0.061 - 0.086j, -10.0, 0.452, 0.326),
)

_LEVELS = (-3, -1, 1, 3)


def grid_order(re_major: bool = True, re_asc: bool = True, im_asc: bool = False):
    """One of the eight sweep orders of the 16-QAM grid."""
    res = _LEVELS if re_asc else _LEVELS[::-1]
    ims = _LEVELS[::-1] if not im_asc else _LEVELS
    if re_major:
        return tuple(complex(r, i) for r in res for i in ims)
    return tuple(complex(r, i) for i in ims for r in res)


#: Calibrated ordering: first stream fixed at -1+3j for the leading
#: block, second stream sweeping the grid real-ascending/imag-descending.
CALIBRATED_FIRST_S1 = complex(-1, 3)
CALIBRATED_S2_ORDER = grid_order(re_major=True, re_asc=True, im_asc=False)


def enumerate_pairs(
    first_s1: complex = CALIBRATED_FIRST_S1,
    order: tuple = CALIBRATED_S2_ORDER,
) -> list[SymbolPair]:
    """All 256 pairs, leading with the calibrated 16-row block.

    The first 16 pairs hold s1 = first_s1 and sweep s2 through
    ``order`` (these are the rows the reference table prints); the
    remaining 240 continue with the other s1 values in the same grid
    order, s2 innermost.
    """
    firsts = [first_s1] + [s for s in order if s != first_s1]
    return [SymbolPair(s1, s2) for s1 in firsts for s2 in order]


def _predict_row(pair: SymbolPair, zm: AntennaZMatrix, cfg: BasisConfig):
    """(Vin, I1, I2, P1, P2) for one pair without the load solve."""
    q = power_norm_factor(pair, zm, cfg)
    i1, i2 = currents_from_symbols(pair, cfg, q)
    dt = compute_drive_terms(zm, i2 / i1)
    _, p1, p2 = input_power(i1, dt, zm.z0)
    return feeding_voltage(pair, cfg), i1, i2, p1, p2


def table_residual(
    rows: list[SymbolPair], zm: AntennaZMatrix, cfg: BasisConfig
) -> float:
    """Worst absolute deviation of 16 predicted rows from the table."""
    worst = 0.0
    for pair, ref in zip(rows, REFERENCE_TABLE):
        vin, i1, i2, p1, p2 = _predict_row(pair, zm, cfg)
        worst = max(
            worst,
            abs(vin - ref[0]),
            abs(i1 - ref[1]),
            abs(i2 - ref[2]),
            abs(p1 - ref[4]),
            abs(p2 - ref[5]),
        )
    return worst


def vin_residual(rows: list[SymbolPair], cfg: BasisConfig) -> float:
    """Worst feed-voltage deviation only (b-independent)."""
    return max(
        abs(feeding_voltage(pair, cfg) - ref[0])
        for pair, ref in zip(rows, REFERENCE_TABLE)
    )


@dataclass
class CalibrationReport:
    """Outcome of the empirical enumeration + spacing search."""

    first_s1: complex
    order_desc: str
    order: tuple
    b_best: float
    residual_best: float
    residual_default_b: float
    default_b_consistent: bool
    vin_only: bool = False
    candidates_scored: int = 0
    notes: list[str] = field(default_factory=list)

    def enumeration(self) -> list[SymbolPair]:
        return enumerate_pairs(self.first_s1, self.order)


def _order_variants():
    for re_major in (True, False):
        for re_asc in (True, False):
            for im_asc in (True, False):
                desc = (
                    f"{'re' if re_major else 'im'}-major, "
                    f"re {'asc' if re_asc else 'desc'}, "
                    f"im {'asc' if im_asc else 'desc'}"
                )
                yield desc, grid_order(re_major, re_asc, im_asc)


def calibrate(
    zm: AntennaZMatrix | None = None,
    b_grid=None,
    phi_rad: float = math.radians(-10.0),
    full_match_threshold: float = 5e-3,
) -> CalibrationReport:
    """Search pair orderings and the spacing argument against the table.

    Candidate enumerations are the fixed-s1 blocks (every grid symbol
    as the held value, every grid sweep order for the varying one) plus
    the nested 4x4 row-block family.  For each candidate the worst
    deviation over (Vin, I1, I2, P1, P2) of all 16 rows is minimized
    over the b grid; the global winner is refined and reported.

    For a Z matrix other than the shipped fixture the current and
    power columns are meaningless, so scoring degenerates to the
    feed-voltage column alone and the report says so.
    """
    notes = []
    vin_only = False
    if zm is None:
        zm = reference_fixture()
    else:
        fix = reference_fixture()
        if (
            zm.z11 != fix.z11
            or zm.z12 != fix.z12
            or zm.z22 != fix.z22
            or zm.z0 != fix.z0
        ):
            vin_only = True
            notes.append(
                "non-default Z matrix: table currents/powers do not apply, "
                "matched the feed-voltage column only"
            )
    if b_grid is None:
        b_grid = [0.70 + 0.005 * k for k in range(41)]  # 0.70 .. 0.90
        if math.pi / 4.0 not in b_grid:
            b_grid.append(math.pi / 4.0)

    candidates = []
    # fixed-s1 family: hold one symbol, sweep the other over the grid
    for held in QAM16:
        for desc, order in _order_variants():
            rows = [SymbolPair(held, s2) for s2 in order]
            candidates.append((f"s1={held} fixed; s2 {desc}", held, order, rows))
    # nested 4x4 family: one grid row of s1 against one grid row of s2
    for im1 in _LEVELS:
        for im2 in _LEVELS:
            for flip1 in (False, True):
                for flip2 in (False, True):
                    row1 = [complex(r, im1) for r in (_LEVELS[::-1] if flip1 else _LEVELS)]
                    row2 = [complex(r, im2) for r in (_LEVELS[::-1] if flip2 else _LEVELS)]
                    rows = [SymbolPair(a, b) for a in row1 for b in row2]
                    candidates.append(
                        (f"4x4 block im(s1)={im1} im(s2)={im2} "
                         f"flips=({flip1},{flip2})", row1[0], None, rows)
                    )

    cfg_any_b = BasisConfig(phase_shift_rad=phi_rad, z0=zm.z0)

    if vin_only:
        best = min(
            candidates, key=lambda cand: vin_residual(cand[3], cfg_any_b)
        )
        desc, held, order, rows = best
        res = vin_residual(rows, cfg_any_b)
        if order is None:
            order = CALIBRATED_S2_ORDER
        return CalibrationReport(
            first_s1=held,
            order_desc=desc,
            order=order,
            b_best=math.pi / 4.0,
            residual_best=res,
            residual_default_b=res,
            default_b_consistent=True,
            vin_only=True,
            candidates_scored=len(candidates),
            notes=notes,
        )

    # Cheap pre-filter on the b-independent feed-voltage column.
    viable = [c for c in candidates if vin_residual(c[3], cfg_any_b) < 5e-3]
    if not viable:
        viable = candidates
        notes.append("no candidate matched the feed-voltage column; scored all")

    best_tuple = None
    for desc, held, order, rows in viable:
        for b in b_grid:
            cfg = BasisConfig(b=b, phase_shift_rad=phi_rad, z0=zm.z0)
            res = table_residual(rows, zm, cfg)
            if best_tuple is None or res < best_tuple[0]:
                best_tuple = (res, b, desc, held, order, rows)

    res, b_best, desc, held, order, rows = best_tuple

    # local golden-section refinement of b around the grid winner
    lo, hi = b_best - 0.01, b_best + 0.01
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    for _ in range(40):
        m1 = hi - inv_phi * (hi - lo)
        m2 = lo + inv_phi * (hi - lo)
        f1 = table_residual(rows, zm, BasisConfig(b=m1, phase_shift_rad=phi_rad, z0=zm.z0))
        f2 = table_residual(rows, zm, BasisConfig(b=m2, phase_shift_rad=phi_rad, z0=zm.z0))
        if f1 <= f2:
            hi = m2
        else:
            lo = m1
    b_ref = 0.5 * (lo + hi)
    res_ref = table_residual(rows, zm, BasisConfig(b=b_ref, phase_shift_rad=phi_rad, z0=zm.z0))
    if res_ref < res:
        res, b_best = res_ref, b_ref

    res_default = table_residual(
        rows, zm, BasisConfig(b=math.pi / 4.0, phase_shift_rad=phi_rad, z0=zm.z0)
    )
    consistent = res_default <= max(2.0 * res, 1e-3)
    if consistent:
        notes.append(
            f"pi/4 is within tolerance of the optimum "
            f"(residual {res_default:.2e} vs {res:.2e}); defaulting to pi/4"
        )
        b_best = math.pi / 4.0
        res = res_default
    if order is None:
        order = CALIBRATED_S2_ORDER
        notes.append("winning candidate is a 4x4 block; full-sweep order left at default")
    if res > full_match_threshold:
        notes.append(
            f"warning: best residual {res:.2e} exceeds {full_match_threshold:g}"
        )
    return CalibrationReport(
        first_s1=held,
        order_desc=desc,
        order=order,
        b_best=b_best,
        residual_best=res,
        residual_default_b=res_default,
        default_b_consistent=consistent,
        candidates_scored=len(candidates),
        notes=notes,
    )
