import math

import pytest
from hypothesis import given, strategies as st

from lmarray import (
    NormalizedABCD,
    ReactanceTuple,
    Topology,
    abcd_from_pi_no_tl,
    abcd_from_t_with_tl,
    complete_d,
    propagate,
    reactances_from_abcd,
)
from lmarray.errors import DegenerateTopology

T = Topology.T_WITH_TL
PI = Topology.PI_NO_TL


@pytest.mark.parametrize(
    "triple,expected",
    [
        ((-1.0, -1.0, -1.0), (1.0, 0.0, 0.0, 1.0)),  # identity network
        ((0.5, 2.0, -1.0), (-2.0, 3.0, 0.0, -0.5)),
        ((0.0, 1.0, 0.0), (-1.0, 1.0, 1.0, 0.0)),
    ],
)
def test_t_with_tl_entries(triple, expected):
    abcd = abcd_from_t_with_tl(ReactanceTuple(T, *triple))
    assert (abcd.a, abcd.b, abcd.c, abcd.d) == pytest.approx(expected, abs=1e-15)
    assert abcd.reciprocity_residual() == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize(
    "triple,expected",
    [
        ((-1.0, -1.0, -1.0), (1.0, 0.0, 0.0, 1.0)),
        ((0.0, -2.0, 0.0), (0.0, 1.0, 1.0, 2.0)),
        ((1.0, 0.0, 0.0), (-1.0, 1.0, 1.0, 0.0)),
    ],
)
def test_pi_no_tl_entries(triple, expected):
    abcd = abcd_from_pi_no_tl(ReactanceTuple(PI, *triple))
    assert (abcd.a, abcd.b, abcd.c, abcd.d) == pytest.approx(expected, abs=1e-15)


def test_topology_mismatch_rejected():
    with pytest.raises(ValueError):
        abcd_from_t_with_tl(ReactanceTuple(PI, 1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        abcd_from_pi_no_tl(ReactanceTuple(T, 1.0, 1.0, 1.0))


def test_inversion_identity_case():
    t = reactances_from_abcd(NormalizedABCD(1.0, 0.0, 0.0, 1.0), T)
    assert (t.v1, t.v2, t.v3) == (-1.0, -1.0, -1.0)


def test_inversion_roundtrip_example():
    t = reactances_from_abcd(NormalizedABCD(-2.0, 3.0, 0.0, -0.5), T)
    assert (t.v1, t.v2, t.v3) == pytest.approx((0.5, 2.0, -1.0), rel=1e-14)


def test_inversion_pivot_zero_raises():
    with pytest.raises(DegenerateTopology):
        reactances_from_abcd(NormalizedABCD(0.0, 1.0, 1.0, 2.0), T)
    with pytest.raises(DegenerateTopology):
        reactances_from_abcd(NormalizedABCD(2.0, 1.0, 1.0, 0.0), PI)


@pytest.mark.parametrize(
    "abc,expected",
    [((1.0, 0.0, 0.0), 1.0), ((-2.0, 3.0, 0.0), -0.5), ((2.0, 1.0, 1.0), 0.0)],
)
def test_complete_d(abc, expected):
    assert complete_d(*abc) == pytest.approx(expected, abs=1e-15)


def test_complete_d_degenerate():
    with pytest.raises(DegenerateTopology):
        complete_d(0.0, 1.0, 1.0)


def test_propagate_identity():
    eye = NormalizedABCD(1.0, 0.0, 0.0, 1.0)
    assert propagate(eye, 1 + 0j, 0.02 + 0j, 50.0) == (1 + 0j, 0.02 + 0j)
    assert propagate(eye, 0j, 0j, 50.0) == (0j, 0j)


def test_propagate_matrix_application():
    abcd = NormalizedABCD(-1.0, 1.0, 1.0, 0.0)
    v, i = propagate(abcd, 1 + 0j, 0j, 50.0)
    assert v == pytest.approx(-1 + 0j)
    assert i == pytest.approx(0.02j)


finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


@given(finite, finite, finite)
def test_reciprocity_t(v1, v2, v3):
    abcd = abcd_from_t_with_tl(ReactanceTuple(T, v1, v2, v3))
    assert abs(abcd.reciprocity_residual()) < 1e-12


@given(finite, finite, finite)
def test_reciprocity_pi(v1, v2, v3):
    abcd = abcd_from_pi_no_tl(ReactanceTuple(PI, v1, v2, v3))
    assert abs(abcd.reciprocity_residual()) < 1e-12


pivot = st.floats(min_value=1e-3, max_value=10.0).flatmap(
    lambda m: st.sampled_from([m, -m])
)


@given(finite, pivot, finite)
def test_roundtrip_t(v1, v2, v3):
    t = ReactanceTuple(T, v1, v2, v3)
    back = reactances_from_abcd(abcd_from_t_with_tl(t), T)
    for orig, rec in zip((v1, v2, v3), (back.v1, back.v2, back.v3)):
        assert rec == pytest.approx(orig, rel=1e-10, abs=1e-12)


@given(finite, pivot, finite)
def test_roundtrip_pi(v1, v2, v3):
    t = ReactanceTuple(PI, v1, v2, v3)
    back = reactances_from_abcd(abcd_from_pi_no_tl(t), PI)
    for orig, rec in zip((v1, v2, v3), (back.v1, back.v2, back.v3)):
        assert rec == pytest.approx(orig, rel=1e-10, abs=1e-12)


@given(
    finite, finite, finite,
    st.floats(min_value=0.1, max_value=10.0),     # load resistance
    st.floats(min_value=-10.0, max_value=10.0),   # load reactance
    st.floats(min_value=0.01, max_value=2.0),     # |I|
    st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_propagate_preserves_real_power(v1, v2, v3, rl, xl, imag, phase):
    # lossless two-port: real power in equals real power out for any
    # passive termination
    abcd = abcd_from_t_with_tl(ReactanceTuple(T, v1, v2, v3))
    i = imag * complex(math.cos(phase), math.sin(phase))
    v = complex(rl, xl) * i
    v_out, i_out = propagate(abcd, v, i, 50.0)
    p_in = (v * i.conjugate()).real
    p_out = (v_out * i_out.conjugate()).real
    assert p_out == pytest.approx(p_in, rel=1e-10, abs=1e-12 * abs(v) * abs(i))


def test_denormalized_units():
    t = ReactanceTuple(T, 0.5, 2.0, -1.0)
    assert t.denormalized(50.0) == (25.0, 0.04, -50.0)
    p = ReactanceTuple(PI, 0.5, 2.0, -1.0)
    assert p.denormalized(50.0) == (0.01, 100.0, -0.02)


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        NormalizedABCD(float("nan"), 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        ReactanceTuple(T, float("inf"), 0.0, 0.0)
