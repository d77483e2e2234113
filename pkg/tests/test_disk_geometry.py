import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_interp.disk_geometry import (
    BlaschkeProduct,
    MobiusMap,
    blaschke_eval_jet,
    mobius_apply,
    pochhammer,
    pseudo_distance,
)
from bergman_interp.errors import DomainError


def disk_points(max_r=0.999):
    return st.builds(
        lambda r, t: r * cmath.exp(1j * t),
        st.floats(0, max_r),
        st.floats(0, 2 * np.pi),
    )


def test_pseudo_distance_examples():
    assert pseudo_distance(0, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert pseudo_distance(0.3 + 0.2j, 0.3 + 0.2j) == 0
    expected = abs(0.5 - 0.5j) / abs(1 - 0.25j)
    assert pseudo_distance(0.5, 0.5j) == pytest.approx(expected, rel=1e-14)
    assert pseudo_distance(0.5, 0.5j) == pytest.approx(0.68599, abs=1e-5)


def test_pseudo_distance_rejects_boundary():
    with pytest.raises(DomainError):
        pseudo_distance(1.0, 0)
    with pytest.raises(DomainError):
        pseudo_distance(0, 1.2j)


def test_mobius_examples():
    m = MobiusMap(0.3)
    assert abs(mobius_apply(m, 0.3)) < 1e-16
    assert mobius_apply(m, 0) == pytest.approx(0.3, abs=1e-16)
    np.testing.assert_allclose(
        pseudo_distance(mobius_apply(m, 0.2), mobius_apply(m, 0.5j)), pseudo_distance(0.2, 0.5j), rtol=1e-12
    )


def test_mobius_rejects_outside():
    with pytest.raises(DomainError):
        mobius_apply(MobiusMap(0.3), 1.5)


@settings(max_examples=200, deadline=None)
@given(disk_points(0.95), disk_points(), disk_points(), st.floats(0, 2 * np.pi))
def test_pseudo_distance_is_mobius_invariant(a, z, w, theta):
    m = MobiusMap(a, cmath.exp(1j * theta))
    d = pseudo_distance(z, w)
    assert 0 <= d < 1
    assert pseudo_distance(w, z) == pytest.approx(d, abs=1e-12)
    assert pseudo_distance(mobius_apply(m, z), mobius_apply(m, w)) == pytest.approx(d, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(disk_points(0.95), disk_points(0.999), st.floats(0, 2 * np.pi))
def test_mobius_inverse_roundtrip(a, z, theta):
    m = MobiusMap(a, cmath.exp(1j * theta))
    assert abs(mobius_apply(m.inverse(), mobius_apply(m, z)) - z) < 1e-14 / (1 - abs(a)) ** 2


def test_mobius_maps_circle_to_circle():
    m = MobiusMap(0.4 - 0.3j)
    for t in np.linspace(0, 2 * np.pi, 17):
        assert abs(mobius_apply(m, cmath.exp(1j * t))) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=300, deadline=None)
@given(disk_points(0.99), st.floats(0, 2 * np.pi), st.floats(0, 1))
def test_small_pseudo_distance_geometry(z, theta, u):
    # rho(z, w) < r < sqrt(1/2) gives the linear comparisons of 1 - |z| and 1 - |w|
    r = 0.7 * u
    rho = r * 0.999
    t = rho * cmath.exp(1j * theta)
    w = (z + t) / (1 + np.conj(z) * t)
    if r == 0:
        return
    assert abs(z - w) < 8 * r * (1 - abs(z)) + 1e-15
    assert (1 - 8 * r) * (1 - abs(z)) < 1 - abs(w) + 1e-15
    assert 1 - abs(w) < (1 + 8 * r) * (1 - abs(z)) + 1e-15


def test_blaschke_examples():
    B = BlaschkeProduct(((0.0, 1),))
    np.testing.assert_allclose(blaschke_eval_jet(B, 0.3 + 0.1j, 3), [0.3 + 0.1j, 1, 0, 0], atol=1e-15)
    a = 0.4 - 0.2j
    assert abs(blaschke_eval_jet(BlaschkeProduct(((a, 1),)), a, 0)[0]) < 1e-16
    assert blaschke_eval_jet(BlaschkeProduct(((0.5, 2),)), 0, 0)[0] == pytest.approx(0.25, abs=1e-15)


def _blaschke_oracle(zeros, z):
    out = mpmath.mpc(1)
    for a, m in zeros:
        a = mpmath.mpc(a)
        f = z if a == 0 else (abs(a) / a) * (a - z) / (1 - mpmath.conj(a) * z)
        out *= f**m
    return out


def test_blaschke_jet_matches_mpmath_derivatives():
    zeros = ((0.5, 2), (-0.3 + 0.6j, 1), (0.0, 1))
    B = BlaschkeProduct(zeros)
    z = 0.2 - 0.35j
    jet = blaschke_eval_jet(B, z, 4)
    with mpmath.workdps(30):
        for k in range(5):
            ref = complex(mpmath.diff(lambda x: _blaschke_oracle(zeros, x), mpmath.mpc(z), k))
            assert abs(jet[k] - ref) <= 1e-12 * max(1, abs(ref))


@pytest.mark.parametrize("mult", [1, 2, 3, 4])
def test_blaschke_zero_multiplicity(mult):
    a = 0.6 + 0.1j
    B = BlaschkeProduct(((a, mult), (-0.2, 1)))
    jet = blaschke_eval_jet(B, a, mult + 1)
    for k in range(mult):
        assert abs(jet[k]) < 1e-13
    assert abs(jet[mult]) > 1e-3


@settings(max_examples=100, deadline=None)
@given(st.lists(disk_points(0.95), min_size=1, max_size=4), disk_points(0.999))
def test_blaschke_bounded_by_one(zeros, z):
    B = BlaschkeProduct(tuple((a, 1) for a in zeros))
    assert abs(blaschke_eval_jet(B, z, 0)[0]) <= 1 + 1e-15


def test_pochhammer_examples():
    assert pochhammer(4, 0) == 1
    assert pochhammer(3, 2) == 12
    assert pochhammer(2.5, 3) == pytest.approx(39.375, rel=1e-15)
