import numpy as np
import pytest

from qdouble.errors import NotStabilizerIrrep, UnknownLabel
from qdouble.groups import from_name, irreps, symmetric, whole_group
from qdouble.reps import (
    MatrixRep, all_irreps, are_equivalent, commutant_dimension, find_irrep, induce, representation_errors,
    section_form, section_intertwiner, verify_tga,
)
from qdouble.tga import conjugation_action, natural_action, orbits, random_element

# number of irreps of D(G) = (number of pairwise commuting triples) / |G|, frozen
IRREP_COUNTS = {"Z2": 4, "Z4": 16, "S3": 8, "D4": 22, "Q8": 22, "S4": 21}


def commuting_triples(G):
    c = G.cayley
    comm = (c == c.T).astype(np.int64)
    return int(np.einsum("ab,bc,ac->", comm, comm, comm))


@pytest.mark.parametrize("name", IRREP_COUNTS)
def test_irrep_count_and_completeness(name):
    G = from_name(name)
    irr = all_irreps(conjugation_action(G))
    assert len(irr) == IRREP_COUNTS[name] == commuting_triples(G) // G.order
    assert sum(r.dimension ** 2 for r in irr) == G.order ** 2


def test_s3_double_dimensions():
    irr = all_irreps(conjugation_action(symmetric(3)))
    assert sorted(r.dimension for r in irr) == [1, 1, 2, 2, 2, 2, 3, 3]
    assert [r.label for r in irr] == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (3, 0), (3, 1), (3, 2)]


@pytest.mark.parametrize("name,size", [("S3", 3), ("D4", 4), ("S4", 4)])
def test_natural_action_completeness(name, size):
    a = natural_action(from_name(name))
    assert a.set_size == size
    irr = all_irreps(a)
    assert sum(r.dimension ** 2 for r in irr) == a.set_size * a.group.order


@pytest.mark.parametrize("name", ["S3", "Q8", "D4"])
def test_irreducible_and_inequivalent(name):
    irr = all_irreps(conjugation_action(from_name(name)))
    assert all(commutant_dimension(r) == 1 for r in irr)
    for i, r in enumerate(irr):
        for q in irr[i + 1:]:
            assert are_equivalent(r, q) is None


def test_commutant_of_reducible_sums():
    irr = all_irreps(conjugation_action(symmetric(3)))
    r1, r2 = irr[2], irr[5]
    pair = [block_diag(a, b) for a, b in zip(_generator_images(r1), _generator_images(r2))]
    same = [block_diag(a, a) for a in _generator_images(r1)]
    assert commutant_dimension(pair) == 2
    assert commutant_dimension(same) == 4


def block_diag(a, b):
    out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=complex)
    out[:a.shape[0], :a.shape[0]] = a
    out[a.shape[0]:, a.shape[0]:] = b
    return out


def _generator_images(rep):
    from qdouble.tga import generating_elements
    return [rep.apply(F) for F in generating_elements(rep.action)]


def test_equivalence_recovers_conjugated_rep():
    a = conjugation_action(from_name("D4"))
    r = all_irreps(a)[-1]
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.normal(size=(r.dimension,) * 2) + 1j * rng.normal(size=(r.dimension,) * 2))
    B = np.einsum("ij,xgjk,lk->xgil", Q, r.basis_matrices, Q.conj())
    other = MatrixRep(a, B)
    U = are_equivalent(r, other)
    assert U is not None
    F = random_element(a, rng)
    np.testing.assert_allclose(U @ r.apply(F), other.apply(F) @ U, atol=1e-10)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(r.dimension), atol=1e-10)


@pytest.mark.parametrize("name,kind", [("S3", "conj"), ("Q8", "conj"), ("D4", "nat"), ("S4", "nat")])
def test_star_representation_contract(name, kind):
    G = from_name(name)
    a = conjugation_action(G) if kind == "conj" else natural_action(G)
    rng = np.random.default_rng(7)
    elements = [random_element(a, rng) for _ in range(20)]
    for r in all_irreps(a):
        errs = representation_errors(r, elements)
        assert errs["homomorphism"] < 1e-10
        assert errs["star"] < 1e-12
        assert errs["unit"] < 1e-12
        assert errs["norm_ratio"] <= 1 + 1e-12


def test_section_form_agrees_and_intertwines():
    a = conjugation_action(from_name("S3"))
    G = a.group
    for orb in orbits(a):
        for alpha in irreps(orb.stabilizer):
            base = induce(a, orb, alpha)
            np.testing.assert_allclose(section_form(a, orb, alpha).basis_matrices, base.basis_matrices, atol=1e-14)
            # a different section: right-multiply each section element by a stabilizer element
            n = orb.stabilizer.members[-1]
            other = [G.mul(s, n) for s in orb.section]
            alt = section_form(a, orb, alpha, other)
            T = section_intertwiner(orb, alpha, orb.section, other)
            lhs = np.einsum("ij,xgjk->xgik", T, base.basis_matrices)
            rhs = np.einsum("xgij,jk->xgik", alt.basis_matrices, T)
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_label_errors():
    a = conjugation_action(symmetric(3))
    irr = all_irreps(a)
    with pytest.raises(UnknownLabel):
        find_irrep(irr, (2, 0))
    orb = orbits(a)[1]
    wrong = irreps(whole_group(a.group))[0]
    with pytest.raises(NotStabilizerIrrep):
        induce(a, orb, wrong)


@pytest.mark.parametrize("name", ["Z2", "S3", "Q8"])
def test_tga_report_passes(name):
    report = verify_tga(conjugation_action(from_name(name)), samples=20)
    assert report.passed, report.to_dict()
    ids = [c.id for c in report.checks]
    assert "based_ring" in ids and "completeness" in ids
