from __future__ import annotations

from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from knotcalc.errors import InputError
from knotcalc.lattice import (
    ExtendedLatticeElement,
    LatticeVector,
    find_zeta,
    is_primitive,
    phi_zeta,
    quotient_image,
    solve_diophantine,
)

V = LatticeVector


@pytest.mark.parametrize("v,expected", [((2, 3), True), ((2, 4), False), ((1, 0), True)])
def test_is_primitive(v, expected):
    assert is_primitive(V(*v)) is expected


def test_zero_vector_rejected():
    with pytest.raises(InputError):
        is_primitive(V(0, 0))


@pytest.mark.parametrize("a,b,expected", [(2, 3, (-1, 1)), (1, 0, (1, 0)), (5, 7, (3, -2))])
def test_solve_diophantine_examples(a, b, expected):
    assert solve_diophantine(a, b) == expected


def test_solve_diophantine_rejects_non_coprime():
    with pytest.raises(InputError):
        solve_diophantine(4, 6)


coprime = st.tuples(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6)).filter(
    lambda v: v != (0, 0) and gcd(*v) == 1)


@given(coprime)
def test_solve_diophantine_minimal(v):
    a, b = v
    x, y = solve_diophantine(a, b)
    assert a * x + b * y == 1
    if b:
        # no other solution x + k*b has smaller |x|
        assert all(abs(x) <= abs(x + k * b) for k in (-1, 1))


@pytest.mark.parametrize("omega,m,t,zeta", [
    ((2, 3), 3, 0, (1, 0)),
    ((2, 3), 3, 1, (-5, -9)),
    ((1, 0), 2, 0, (-1, -2)),
])
def test_find_zeta_examples(omega, m, t, zeta):
    z = find_zeta(V(*omega), m, t)
    assert tuple(z.zeta) == zeta


def test_find_zeta_rejects_bad_input():
    with pytest.raises(InputError):
        find_zeta(V(2, 4), 3)
    with pytest.raises(InputError):
        find_zeta(V(2, 3), 1)


def test_quotient_image_examples():
    assert quotient_image(V(1, 1), V(1, 0)) == 1
    assert quotient_image(V(0, 1), V(1, 0)) == 1
    assert quotient_image(V(1, 0), V(0, 1)) == -1
    assert quotient_image(V(3, -7), V(3, -7)) == 0


def test_phi_zeta_examples():
    omega = V(2, 3)
    z = find_zeta(omega, 3, 0)
    assert phi_zeta(ExtendedLatticeElement.fraction(omega, 3), z) == 1
    assert phi_zeta(ExtendedLatticeElement.lattice(omega, omega, 3), z) == 3
    assert phi_zeta(ExtendedLatticeElement.lattice(V(1, 0), omega, 3), z) == 0


def test_extended_element_normalizes_k():
    e = ExtendedLatticeElement(V(0, 0), V(2, 3), 3, 4)
    assert (e.base, e.k) == (V(2, 3), 1)


@given(coprime, st.integers(2, 9), st.integers(-20, 20),
       st.tuples(st.integers(-50, 50), st.integers(-50, 50)), st.integers(0, 20),
       st.tuples(st.integers(-50, 50), st.integers(-50, 50)), st.integers(0, 20))
def test_phi_zeta_is_additive(omega, m, t, b1, k1, b2, k2):
    omega = V(*omega)
    z = find_zeta(omega, m, t)
    e1 = ExtendedLatticeElement(V(*b1), omega, m, k1)
    e2 = ExtendedLatticeElement(V(*b2), omega, m, k2)
    assert phi_zeta(e1 + e2, z) == phi_zeta(e1, z) + phi_zeta(e2, z)
    assert phi_zeta(ExtendedLatticeElement.lattice(z.zeta, omega, m), z) == 0


@given(coprime, st.integers(2, 9))
def test_zeta_family_injective(omega, m):
    omega = V(*omega)
    zetas = {tuple(find_zeta(omega, m, t).zeta) for t in range(-5, 6)}
    assert len(zetas) == 11


@given(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), coprime)
def test_quotient_kernel_is_zeta_line(v, zeta):
    v, zeta = V(*v), V(*zeta)
    assume(not v.is_zero)
    # v is a multiple of primitive zeta exactly when its image vanishes
    multiple = v.x * zeta.y == v.y * zeta.x
    assert (quotient_image(v, zeta) == 0) == multiple
