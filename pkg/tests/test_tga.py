import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdouble.errors import ActionMismatch, InputError
from qdouble.groups import centralizer, dihedral, from_name, subgroup, symmetric
from qdouble.tga import (
    AlgElement, based_ring_mismatches, basis_element, basis_product, basis_star, conjugation_action,
    coset_action, group_element, inner_product, make_action, multiply, natural_action, norm1, orbits,
    point_projection, random_element, regular_action, stabilizer, star, unit, zero,
)

ACTIONS = [
    ("S3", "conjugation"), ("D4", "conjugation"), ("Q8", "conjugation"),
    ("S3", "natural"), ("D4", "natural"), ("Z4", "regular"),
]


def make(name, kind):
    G = from_name(name)
    return {"conjugation": conjugation_action, "natural": natural_action, "regular": regular_action}[kind](G)


def naive_product(F1, F2):
    """(F1 F2)(xi, y) = sum_z F1(xi, z) F2(z^-1 . xi, z^-1 y), straight from the definition."""
    a = F1.action
    G = a.group
    out = np.zeros(a.shape, dtype=complex)
    for xi in range(a.set_size):
        for y in range(G.order):
            for z in range(G.order):
                zi = G.inv(z)
                out[xi, y] += F1.coeffs[xi, z] * F2.coeffs[a.act[zi, xi], G.mul(zi, y)]
    return out


def naive_star(F):
    a = F.action
    G = a.group
    out = np.zeros(a.shape, dtype=complex)
    for xi in range(a.set_size):
        for y in range(G.order):
            yi = G.inv(y)
            out[xi, y] = np.conj(F.coeffs[a.act[yi, xi], yi])
    return out


@pytest.mark.parametrize("name,kind", ACTIONS)
def test_product_and_star_match_definition(name, kind):
    a = make(name, kind)
    rng = np.random.default_rng(3)
    for _ in range(5):
        F1, F2 = random_element(a, rng), random_element(a, rng)
        np.testing.assert_allclose(multiply(F1, F2).coeffs, naive_product(F1, F2), atol=1e-12)
        np.testing.assert_allclose(star(F1).coeffs, naive_star(F1), atol=1e-14)


@pytest.mark.parametrize("name,kind", ACTIONS)
def test_algebra_axioms(name, kind):
    a = make(name, kind)
    rng = np.random.default_rng(11)
    F1, F2, F3 = (random_element(a, rng) for _ in range(3))
    one = unit(a)
    np.testing.assert_allclose(multiply(multiply(F1, F2), F3).coeffs, multiply(F1, multiply(F2, F3)).coeffs,
                               atol=1e-11)
    np.testing.assert_allclose(multiply(one, F1).coeffs, F1.coeffs, atol=1e-14)
    np.testing.assert_allclose(multiply(F1, one).coeffs, F1.coeffs, atol=1e-14)
    np.testing.assert_allclose(star(star(F1)).coeffs, F1.coeffs, atol=1e-14)
    np.testing.assert_allclose(star(multiply(F1, F2)).coeffs, multiply(star(F2), star(F1)).coeffs, atol=1e-12)
    assert norm1(multiply(F1, F2)) <= norm1(F1) * norm1(F2) + 1e-12
    assert abs(norm1(star(F1)) - norm1(F1)) < 1e-12


@pytest.mark.parametrize("name,kind", ACTIONS)
def test_inner_product_adjoint(name, kind):
    a = make(name, kind)
    rng = np.random.default_rng(5)
    for _ in range(10):
        F, F1, F2 = (random_element(a, rng) for _ in range(3))
        lhs = inner_product(multiply(F, F1), F2)
        rhs = inner_product(F1, multiply(star(F), F2))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@pytest.mark.parametrize("name,kind", ACTIONS + [("S4", "natural"), ("Z16", "conjugation")])
def test_based_ring(name, kind):
    assert based_ring_mismatches(make(name, kind)) == {"product": 0, "star": 0}


def test_basis_rules():
    a = conjugation_action(symmetric(3))
    G = a.group
    for xi in range(6):
        for g in range(6):
            s = basis_star(a, xi, g)
            assert s == (a.act[G.inv(g), xi], G.inv(g))
            np.testing.assert_array_equal(star(basis_element(a, xi, g)).coeffs, basis_element(a, *s).coeffs)
            for eta in range(6):
                for h in range(6):
                    p = basis_product(a, (xi, g), (eta, h))
                    dense = multiply(basis_element(a, xi, g), basis_element(a, eta, h)).coeffs
                    if p is None:
                        assert not dense.any()
                    else:
                        np.testing.assert_array_equal(dense, basis_element(a, *p).coeffs)


def test_group_elements_and_projections():
    a = natural_action(dihedral(4))
    G = a.group
    for g in range(G.order):
        for h in range(G.order):
            np.testing.assert_allclose(multiply(group_element(a, g), group_element(a, h)).coeffs,
                                       group_element(a, G.mul(g, h)).coeffs)
    total = zero(a)
    for xi in range(a.set_size):
        P = point_projection(a, xi)
        np.testing.assert_allclose(multiply(P, P).coeffs, P.coeffs)
        np.testing.assert_allclose(star(P).coeffs, P.coeffs)
        total = total + P
    np.testing.assert_allclose(total.coeffs, unit(a).coeffs)


def test_orbits_and_stabilizers():
    a = natural_action(symmetric(4))
    orbs = orbits(a)
    assert len(orbs) == 1 and len(orbs[0]) == 4
    assert stabilizer(a, 0).order == 6
    c = conjugation_action(symmetric(4))
    assert sorted(len(o) for o in orbits(c)) == [1, 3, 6, 6, 8]
    for o in orbits(c):
        assert len(o) * o.stabilizer.order == 24
        for xi, s in zip(o.members, o.section):
            assert c.act[s, o.base_point] == xi


def test_coset_action_matches_natural_size():
    G = symmetric(3)
    H = centralizer(G, 1)
    a = coset_action(G, H)
    assert a.set_size == 3
    assert len(orbits(a)) == 1


def test_invalid_inputs():
    G = symmetric(3)
    with pytest.raises(InputError):
        make_action(G, np.zeros((6, 2), dtype=int) + 1)
    with pytest.raises(InputError):
        AlgElement(conjugation_action(G), np.zeros((2, 2)))
    a1 = conjugation_action(G)
    a2 = natural_action(G)
    with pytest.raises(ActionMismatch):
        multiply(unit(a1), unit(a2))


def test_elements_are_read_only():
    a = conjugation_action(from_name("Z2"))
    F = unit(a)
    with pytest.raises(ValueError):
        F.coeffs[0, 0] = 5


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from(ACTIONS))
def test_star_is_conjugate_linear_and_antimultiplicative(seed, which):
    a = make(*which)
    rng = np.random.default_rng(seed)
    F1, F2 = random_element(a, rng), random_element(a, rng)
    c = complex(*rng.normal(size=2))
    np.testing.assert_allclose(star(F1 * c + F2).coeffs, (star(F1) * np.conj(c) + star(F2)).coeffs, atol=1e-12)
    np.testing.assert_allclose(star(F1 @ F2).coeffs, (star(F2) @ star(F1)).coeffs, atol=1e-11)
