import cmath
import math

import numpy as np
import pytest

from lmarray import (
    AntennaZMatrix,
    BasisConfig,
    SymbolPair,
    compute_drive_terms,
    enumerate_pairs,
    input_power,
    power_norm_factor,
    currents_from_symbols,
    procedure1_solve,
    propagate,
    solve_ab,
    solve_c,
    solve_network,
    synthesize,
    target_theta,
)
from lmarray.calibration import REFERENCE_TABLE
from lmarray.errors import (
    Degenerate,
    EtaUndefined,
    NegativeInputPower,
    RadicandError,
    ThetaNearPole,
)


def random_passive_zm(rng) -> AntennaZMatrix:
    """Reciprocal Z matrix with positive-semidefinite real part."""
    r11 = rng.uniform(0.2, 2.0)
    r22 = rng.uniform(0.2, 2.0)
    rho = rng.uniform(-0.95, 0.95)
    r12 = rho * math.sqrt(r11 * r22)
    x11, x12, x22 = rng.uniform(-1.0, 1.0, 3)
    z0 = 50.0
    return AntennaZMatrix(
        z11=z0 * complex(r11, x11),
        z12=z0 * complex(r12, x12),
        z21=z0 * complex(r12, x12),
        z22=z0 * complex(r22, x22),
        z0=z0,
    )


def random_eta(rng) -> complex:
    return complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))


# --- drive terms -----------------------------------------------------------

def test_drive_terms_zero_eta(zm):
    dt = compute_drive_terms(zm, 0j)
    zn = zm.normalized()
    assert dt.r1 == zn[0][0].real
    assert dt.x1 == zn[0][0].imag
    assert dt.r2 == zn[1][0].real
    assert dt.x2 == zn[1][0].imag
    assert dt.eta_dot_v1 == 0.0
    assert dt.eta_dot_v2 == 0.0


def test_drive_terms_symmetric_unit_eta(zm):
    # symmetric array driven in phase: both ports look identical and
    # the cross determinant collapses
    dt = compute_drive_terms(zm, 1 + 0j)
    assert dt.r1 == pytest.approx(dt.r2, rel=1e-14)
    assert dt.x1 == pytest.approx(dt.x2, rel=1e-14)
    assert dt.cross_det == pytest.approx(0.0, abs=1e-15)


def test_drive_terms_reference_row_powers(zm, cfg):
    # recompute the branch powers of the first reference row from eta
    pair = SymbolPair(-1 + 3j, -3 + 3j)
    q = power_norm_factor(pair, zm, cfg)
    i1, i2 = currents_from_symbols(pair, cfg, q)
    dt = compute_drive_terms(zm, i2 / i1)
    pin, p1, p2 = input_power(i1, dt, zm.z0)
    assert pin == pytest.approx(28.0 / 36.0, rel=1e-9)
    assert p1 == pytest.approx(0.173, abs=1e-3)
    assert p2 == pytest.approx(0.605, abs=1e-3)


def test_drive_terms_recomputable_identities(zm):
    rng = np.random.default_rng(7)
    for _ in range(50):
        eta = random_eta(rng)
        dt = compute_drive_terms(zm, eta)
        assert dt.cross_det == pytest.approx(
            dt.x1 * dt.r2 - dt.r1 * dt.x2, rel=1e-12, abs=1e-15
        )
        assert dt.eta_dot_v1 == pytest.approx(
            eta.real * dt.r1 + eta.imag * dt.x1, rel=1e-12, abs=1e-15
        )
        assert dt.eta_dot_v2 == pytest.approx(
            eta.real * dt.r2 + eta.imag * dt.x2, rel=1e-12, abs=1e-15
        )


# --- feed phase ------------------------------------------------------------

def test_theta_real_eta():
    t = target_theta(math.radians(-10), math.radians(45), 1 + 0j)
    assert math.degrees(t) == pytest.approx(35.0, abs=1e-12)


def test_theta_imag_eta():
    t = target_theta(0.0, 0.0, 1j)
    assert math.degrees(t) == pytest.approx(-90.0, abs=1e-12)


def test_theta_matches_current_angle(zm, cfg):
    pair = SymbolPair(-1 + 3j, -3 + 3j)
    res = synthesize(pair, zm, cfg)
    assert res.theta == pytest.approx(cmath.phase(res.i1), abs=1e-12)
    # printed row 1 current angle, 3-decimal data
    assert res.theta == pytest.approx(math.atan2(-0.043, 0.060), abs=2e-2)


def test_theta_wraps():
    t = target_theta(3.0, 3.0, cmath.exp(-1j * 1.0))
    assert -math.pi < t <= math.pi
    assert t == pytest.approx(7.0 - 2 * math.pi, abs=1e-12)


def test_eta_undefined():
    with pytest.raises(EtaUndefined):
        target_theta(0.0, 0.0, 0j)


# --- coefficient solve -----------------------------------------------------

def test_solve_ab_theta_zero_reduction(zm):
    eta = 0.8 + 0j
    dt = compute_drive_terms(zm, eta)
    root = math.sqrt(dt.r1 + dt.eta_dot_v2)
    a1, b1, a2, b2 = solve_ab(dt, 0.0, eta)
    assert a1 == pytest.approx(root / dt.r1, rel=1e-14)
    assert b1 == pytest.approx(-dt.x1 * root / dt.r1, rel=1e-14)
    assert a2 == pytest.approx(eta.real * root / dt.eta_dot_v2, rel=1e-14)
    assert b2 == pytest.approx(-dt.x2 * root / dt.eta_dot_v2, rel=1e-14)


def test_solve_ab_branch_voltage_identities():
    # both branch input voltages are the same node voltage, which gives
    # two real relations the coefficients must satisfy:
    #   r1 a1 - r2 a2 = -eta_i b2
    #   x1 a1 - x2 a2 = eta_r b2 - b1
    rng = np.random.default_rng(11)
    for _ in range(200):
        zm = random_passive_zm(rng)
        eta = random_eta(rng)
        dt = compute_drive_terms(zm, eta)
        if abs(dt.r1) < 1e-3 or abs(dt.eta_dot_v2) < 1e-3:
            continue
        theta = rng.uniform(-math.pi, math.pi)
        a1, b1, a2, b2 = solve_ab(dt, theta, eta)
        lhs1 = dt.r1 * a1 - dt.r2 * a2
        lhs2 = dt.x1 * a1 - dt.x2 * a2
        scale = max(abs(a1), abs(b1), abs(a2), abs(b2), 1.0)
        assert lhs1 == pytest.approx(-eta.imag * b2, abs=1e-11 * scale)
        assert lhs2 == pytest.approx(eta.real * b2 - b1, abs=1e-11 * scale)


def test_solve_c_zero_s(zm, cfg):
    pair = SymbolPair(1 + 3j, 3 - 1j)
    q = power_norm_factor(pair, zm, cfg)
    i1, i2 = currents_from_symbols(pair, cfg, q)
    eta = i2 / i1
    dt = compute_drive_terms(zm, eta)
    theta = target_theta(cfg.phase_shift_rad, cmath.phase(pair.s2), eta)
    root = math.sqrt(dt.r1 + dt.eta_dot_v2)
    c1, c2 = solve_c(dt, theta, eta, 0.0)
    assert c1 == pytest.approx(-math.sin(theta) / root, rel=1e-13)
    assert c2 == pytest.approx(
        -(eta.imag * math.cos(theta) + eta.real * math.sin(theta)) / root,
        rel=1e-13,
    )


def test_solve_c_matched_row_identity():
    # second matched-input row: r1 c1 + (r2 - eta_i b2/a2) c2
    #                            = x1 a1 + b1 - eta_i/a2
    rng = np.random.default_rng(23)
    for _ in range(200):
        zm = random_passive_zm(rng)
        eta = random_eta(rng)
        dt = compute_drive_terms(zm, eta)
        if abs(dt.r1) < 1e-3 or abs(dt.eta_dot_v2) < 1e-3:
            continue
        theta = rng.uniform(-math.pi, math.pi)
        if abs(math.cos(theta)) < 1e-3:
            continue
        s = rng.uniform(-2.0, 2.0)
        a1, b1, a2, b2 = solve_ab(dt, theta, eta)
        if abs(a2) < 1e-6:
            continue
        c1, c2 = solve_c(dt, theta, eta, s)
        lhs = dt.r1 * c1 + (dt.r2 - eta.imag * b2 / a2) * c2
        rhs = dt.x1 * a1 + b1 - eta.imag / a2
        scale = max(abs(lhs), abs(rhs), 1.0)
        assert lhs == pytest.approx(rhs, abs=1e-9 * scale)


def test_theta_pole_guard(zm):
    eta = 0.5 + 0.5j
    dt = compute_drive_terms(zm, eta)
    theta = math.pi / 2.0  # cos is ~6e-17
    with pytest.raises(ThetaNearPole):
        solve_c(dt, theta, eta, 1.0)
    c1, c2 = solve_c(dt, theta, eta, 0.0)  # s = 0 stays regular
    assert math.isfinite(c1) and math.isfinite(c2)


def test_negative_input_power_guard():
    # non-passive matrix: Re part indefinite
    zm = AntennaZMatrix(
        z11=complex(5.0, 0.0), z12=complex(200.0, 0.0),
        z21=complex(200.0, 0.0), z22=complex(5.0, 0.0), z0=50.0,
    )
    eta = -1 + 0j
    dt = compute_drive_terms(zm, eta)
    assert dt.input_coeff() < 0
    with pytest.raises(NegativeInputPower):
        solve_ab(dt, 0.3, eta)
    with pytest.raises(NegativeInputPower):
        input_power(0.1 + 0j, dt, 50.0)


# --- input power -----------------------------------------------------------

def test_input_power_reference_rows(zm, cfg):
    # rows 1 and 5: branch powers incl. a negative one
    for idx, pair in ((0, SymbolPair(-1 + 3j, -3 + 3j)),
                      (4, SymbolPair(-1 + 3j, -1 + 3j))):
        q = power_norm_factor(pair, zm, cfg)
        i1, i2 = currents_from_symbols(pair, cfg, q)
        dt = compute_drive_terms(zm, i2 / i1)
        pin, p1, p2 = input_power(i1, dt, zm.z0)
        ref = REFERENCE_TABLE[idx]
        assert p1 == pytest.approx(ref[4], abs=1e-3)
        assert p2 == pytest.approx(ref[5], abs=1e-3)
        assert pin == pytest.approx(p1 + p2, rel=1e-12)
        assert pin > 0


def test_input_power_single_branch(zm):
    dt = compute_drive_terms(zm, 0j)
    pin, p1, p2 = input_power(0.05 + 0.01j, dt, zm.z0)
    assert p2 == 0.0
    assert p1 == pytest.approx(pin, rel=1e-14)


# --- full synthesis --------------------------------------------------------

def test_synthesize_reference_row_1(zm, cfg):
    res = synthesize(SymbolPair(-1 + 3j, -3 + 3j), zm, cfg)
    assert abs(res.vin) == pytest.approx(6.236, abs=5e-4)
    assert math.degrees(cfg.phase_shift_rad) == -10.0
    assert res.p1 == pytest.approx(0.173, abs=1e-3)
    assert res.p2 == pytest.approx(0.605, abs=1e-3)
    assert abs(res.vin.imag) < 1e-9 * abs(res.vin)


def test_synthesize_reference_row_7(zm, cfg):
    res = synthesize(SymbolPair(-1 + 3j, -1 - 1j), zm, cfg)
    assert res.p2 == pytest.approx(-0.026, abs=1e-3)
    assert res.p1 == pytest.approx(0.360, abs=1e-3)
    assert res.p1 + res.p2 == pytest.approx(12.0 / 36.0, rel=1e-9)
    assert res.p1 + res.p2 > 0


def test_synthesize_matches_feed_voltage(zm, cfg):
    from lmarray import feeding_voltage

    for pair in enumerate_pairs()[:24]:
        res = synthesize(pair, zm, cfg)
        assert abs(res.vin) == pytest.approx(
            feeding_voltage(pair, cfg), rel=1e-9
        )


def test_synthesize_reciprocity(zm, cfg):
    for pair in enumerate_pairs()[:24]:
        res = synthesize(pair, zm, cfg)
        assert abs(res.abcd1.reciprocity_residual()) < 1e-12
        assert abs(res.abcd2.reciprocity_residual()) < 1e-12


def test_synthesize_branch_voltages_equal(zm, cfg):
    # propagate each branch from the antenna side with its own chain
    # matrix: both must land on the same feed voltage
    for pair in enumerate_pairs()[:24]:
        res = synthesize(pair, zm, cfg)
        v1 = zm.z11 * res.i1 + zm.z12 * res.i2
        v2 = zm.z21 * res.i1 + zm.z22 * res.i2
        vin1, _ = propagate(res.abcd1, v1, res.i1, zm.z0)
        vin2, _ = propagate(res.abcd2, v2, res.i2, zm.z0)
        assert vin1 == pytest.approx(res.vin, rel=1e-12)
        assert vin2 == pytest.approx(res.vin, rel=1e-11)


def test_sign_rule_consistency(zm, cfg):
    # the angle recovered from (r1*a1, -(x1*a1 + b1)) must equal theta
    # itself, not theta + pi
    for pair in enumerate_pairs()[:24]:
        res = synthesize(pair, zm, cfg)
        dt = compute_drive_terms(zm, res.eta)
        a1, b1 = res.abcd1.a, res.abcd1.b
        norm = math.hypot(dt.r1 * a1, dt.x1 * a1 + b1)
        assert dt.r1 * a1 / norm == pytest.approx(math.cos(res.theta), abs=1e-12)
        assert -(dt.x1 * a1 + b1) / norm == pytest.approx(
            math.sin(res.theta), abs=1e-12
        )


def test_free_parameter_sweep_keeps_matching(zm, cfg):
    pair = SymbolPair(3 + 1j, -1 + 3j)
    zins = []
    loads = []
    for s in (-1.0, 0.0, 1.0):
        res = synthesize(pair, zm, cfg, s=s)
        sol = solve_network(res.loads1, res.loads2, zm, res.vin)
        zins.append(sol.zin)
        loads.append((res.loads1.v1, res.loads1.v2, res.loads1.v3))
    for zin in zins:
        assert abs(zin - 50.0) < 1e-9
    assert max(abs(loads[0][i] - loads[1][i]) for i in range(3)) > 1e-3


# --- two-free-parameter route ----------------------------------------------

def _procedure2_six(zm, eta, theta, s):
    dt = compute_drive_terms(zm, eta)
    a1, b1, a2, b2 = solve_ab(dt, theta, eta)
    c1, c2 = solve_c(dt, theta, eta, s)
    return dt, (a1, b1, a2, b2, c1, c2)


def test_procedures_agree_on_fixture(zm, cfg):
    for pair in enumerate_pairs()[:16]:
        res = synthesize(pair, zm, cfg)
        dt = compute_drive_terms(zm, res.eta)
        b1 = res.abcd1.b
        c2 = res.abcd2.c
        best = None
        for branch in (1, -1):
            a1, a2, b2, c1, d1, d2 = procedure1_solve(dt, res.eta, b1, c2, branch)
            err = max(
                abs(a1 - res.abcd1.a), abs(a2 - res.abcd2.a),
                abs(b2 - res.abcd2.b), abs(c1 - res.abcd1.c),
                abs(d1 - res.abcd1.d), abs(d2 - res.abcd2.d),
            )
            best = err if best is None else min(best, err)
        scale = max(abs(res.abcd1.a), abs(res.abcd2.d), 1.0)
        assert best < 1e-9 * scale


def test_procedure1_radicand_boundary(zm):
    rng = np.random.default_rng(3)
    eta = random_eta(rng)
    dt = compute_drive_terms(zm, eta)
    b1_max = math.sqrt((dt.r1**2 + dt.x1**2) * dt.input_coeff()) / abs(dt.r1)
    plus = procedure1_solve(dt, eta, b1_max, 0.1, branch=1)
    minus = procedure1_solve(dt, eta, b1_max, 0.1, branch=-1)
    # double root: float noise in the radicand is sqrt-amplified
    assert plus == pytest.approx(minus, rel=1e-5, abs=1e-7)
    with pytest.raises(RadicandError):
        procedure1_solve(dt, eta, b1_max * 1.01, 0.1)


def test_procedure1_degenerate_cross_det(zm):
    dt = compute_drive_terms(zm, 1 + 0j)  # symmetric excitation
    with pytest.raises(Degenerate):
        procedure1_solve(dt, 1 + 0j, 0.5, 0.5)


def test_procedure1_solution_is_matched(zm):
    # any procedure-1 output must satisfy the same network conditions;
    # check with the independent solver through a reactance realization
    from lmarray import NormalizedABCD, Topology, reactances_from_abcd

    rng = np.random.default_rng(17)
    count = 0
    while count < 20:
        eta = random_eta(rng)
        if abs(eta) < 0.2:
            continue
        dt = compute_drive_terms(zm, eta)
        if abs(dt.eta_dot_v2) < 1e-2 or abs(dt.cross_det) < 1e-2:
            continue
        theta = rng.uniform(-math.pi, math.pi)
        if abs(math.cos(theta)) < 0.1:
            continue
        _, (a1, b1, a2, b2, c1, c2) = _procedure2_six(zm, eta, theta, 0.0)
        got = procedure1_solve(dt, eta, b1, c2, branch=1)
        alt = procedure1_solve(dt, eta, b1, c2, branch=-1)
        err1 = abs(got[0] - a1)
        err2 = abs(alt[0] - a1)
        six = got if err1 <= err2 else alt
        assert six[0] == pytest.approx(a1, rel=1e-9, abs=1e-12)
        assert six[1] == pytest.approx(a2, rel=1e-9, abs=1e-12)
        assert six[2] == pytest.approx(b2, rel=1e-9, abs=1e-12)
        assert six[3] == pytest.approx(c1, rel=1e-9, abs=1e-12)
        count += 1
