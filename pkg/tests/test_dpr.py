import numpy as np
import pytest

from qdouble.dpr import (
    dpr_irreps, dpr_rep, equivariant_extension, full_function_action, intertwiner, intertwiner_residual,
    inverse_intertwiner, matching_induced, verify_dpr,
)
from qdouble.errors import InputError, NotCentralizerIrrep
from qdouble.groups import centralizer, coset_decomposition, from_name, irreps, whole_group
from qdouble.reps import all_irreps, commutant_dimension, representation_errors
from qdouble.tga import basis_element, conjugation_action, random_element

GROUPS = ["S3", "Z4", "Q8", "D4"]


@pytest.mark.parametrize("name", GROUPS)
def test_intertwiner_on_all_basis_elements(name):
    G = from_name(name)
    for rep in dpr_irreps(G):
        target = matching_induced(rep)
        assert intertwiner_residual(rep, target) <= 1e-12
        Phi, Psi = intertwiner(rep, target), inverse_intertwiner(rep, target)
        np.testing.assert_allclose(Psi @ Phi, np.eye(rep.dimension), atol=1e-12)
        np.testing.assert_allclose(Phi @ Psi, np.eye(rep.dimension), atol=1e-12)


@pytest.mark.parametrize("name", GROUPS)
def test_dpr_irreps_are_star_irreps(name):
    G = from_name(name)
    reps = dpr_irreps(G)
    assert sum(r.dimension ** 2 for r in reps) == G.order ** 2
    assert [r.label for r in reps] == [r.label for r in all_irreps(conjugation_action(G))]
    rng = np.random.default_rng(0)
    elements = [random_element(reps[0].action, rng) for _ in range(10)]
    for r in reps:
        assert commutant_dimension(r) == 1
        e = representation_errors(r, elements)
        assert e["homomorphism"] < 1e-10 and e["star"] < 1e-12


def test_other_coset_representatives():
    G = from_name("S3")
    N = centralizer(G, 1)
    reps, _ = coset_decomposition(G, N)
    n = N.members[-1]
    other = [G.mul(r, n) for r in reps]
    for alpha in irreps(N):
        rep = dpr_rep(G, 1, alpha, other)
        assert intertwiner_residual(rep) <= 1e-12


def test_full_function_route_matches_matrices():
    G = from_name("Q8")
    rng = np.random.default_rng(4)
    for rep in dpr_irreps(G):
        target = matching_induced(rep)
        N = target.orbit.stabilizer
        F = random_element(rep.action, rng)
        coords = rng.normal(size=target.dimension) + 1j * rng.normal(size=target.dimension)
        values = equivariant_extension(G, N, target.section, rep.alpha, coords)
        moved = full_function_action(G, rep.class_rep, rep.alpha, F, values)
        d = rep.alpha.degree
        read_off = np.concatenate([moved[s] for s in target.section])
        np.testing.assert_allclose(read_off, target.apply(F) @ coords, atol=1e-12)
        assert d * len(target.section) == target.dimension


def test_phi_is_scaled_identity_for_shared_representatives():
    G = from_name("S3")
    rep = dpr_irreps(G)[3]
    Phi = intertwiner(rep)
    N = rep.centralizer
    np.testing.assert_allclose(Phi, np.eye(rep.dimension) / N.order, atol=1e-15)


def test_rejects_wrong_inputs():
    G = from_name("S3")
    alpha = irreps(whole_group(G))[0]
    with pytest.raises(NotCentralizerIrrep):
        dpr_rep(G, 1, alpha)
    N = centralizer(G, 1)
    with pytest.raises(InputError):
        dpr_rep(G, 1, irreps(N)[0], [0, 0, 0])


def test_delta_action_is_diagonal():
    G = from_name("D4")
    a = conjugation_action(G)
    for rep in dpr_irreps(G):
        for xi in range(G.order):
            M = rep.apply(basis_element(a, xi, G.identity))
            np.testing.assert_allclose(M, np.diag(np.diag(M)), atol=1e-14)


@pytest.mark.parametrize("name", ["S3", "Z4", "Q8"])
def test_report(name):
    r = verify_dpr(from_name(name))
    assert r.passed and r.suite == "dpr"
