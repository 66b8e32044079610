"""The eight acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.
"""

import math
import warnings

import numpy as np
import pytest

from qdouble.compact.sl2r import (
    ParabolicOrientationWarning, SL2Matrix, canonical_representative, classify_sl2r, conjugate, n,
    random_conjugator, sample_labels,
)
from qdouble.compact.su2 import character_function, haar_quadrature, required_su2_order, su2_report, tau_theta_l, two_spin
from qdouble.double import antipode_table, flip, r_matrix, verify_hopf, verify_quasitriangular, verify_star
from qdouble.dpr import verify_dpr
from qdouble.groups import from_name
from qdouble.reps import all_irreps, are_equivalent, commutant_dimension, representation_errors
from qdouble.tga import based_ring_mismatches, conjugation_action, inner_product, multiply, natural_action, random_element, star

SMALL = ["Z2", "Z4", "S3", "D4", "Q8"]


def actions():
    out = [conjugation_action(from_name(g)) for g in SMALL]
    out += [natural_action(from_name("S3")), natural_action(from_name("D4"))]
    return out


def _label(a):
    return f"{a.group.name}/{'conj' if a.is_conjugation else 'nat'}"


def test_1_completeness(criterion):
    with criterion(1, "sum of dim^2 equals |X||G| exactly") as notes:
        for a in actions():
            total = sum(r.dimension ** 2 for r in all_irreps(a))
            notes.append(f"{_label(a)} {total}")
            assert total == a.set_size * a.group.order


def test_2_irreducible_and_inequivalent(criterion):
    with criterion(2, "commutant dimension 1, no intertwiner between distinct irreps") as notes:
        count = 0
        for a in actions():
            irr = all_irreps(a)
            assert all(commutant_dimension(r) == 1 for r in irr)
            for i, r in enumerate(irr):
                for q in irr[i + 1:]:
                    assert are_equivalent(r, q) is None
            count += len(irr)
        notes.append(f"{count} irreps")


def test_3_star_representation_contract(criterion):
    with criterion(3, "homomorphism/star <= 1e-10, ||tau(F)|| <= ||F||_1, 100 samples") as notes:
        worst = {"homomorphism": 0.0, "star": 0.0, "norm_ratio": 0.0}
        for a in actions():
            rng = np.random.default_rng(3)
            elements = [random_element(a, rng) for _ in range(100)]
            for r in all_irreps(a):
                e = representation_errors(r, elements)
                worst = {k: max(worst[k], e[k]) for k in worst}
        notes.append(", ".join(f"{k}={v:.2e}" for k, v in worst.items()))
        assert worst["homomorphism"] <= 1e-10 and worst["star"] <= 1e-10
        assert worst["norm_ratio"] <= 1.0 + 1e-12


def test_4_hopf_and_quasitriangular(criterion):
    with criterion(4, "Hopf, R-matrix and star axioms <= 1e-12; negative controls fail") as notes:
        runs = [(g, "exhaustive") for g in SMALL] + [("D6", "randomized"), ("S4", "randomized")]
        worst = 0.0
        for name, mode in runs:
            G = from_name(name)
            for rep in (verify_hopf(G, mode=mode, tol=1e-12), verify_quasitriangular(G, mode=mode, tol=1e-12),
                        verify_star(G, mode=mode, tol=1e-12)):
                assert rep.passed, rep.to_dict()
                worst = max(worst, max(c.max_deviation for c in rep.checks))
        notes.append(f"worst {worst:.2e}")
        G = from_name("S3")
        t = antipode_table(G).copy()
        t[1, 0], t[2, 0] = t[2, 0].copy(), t[1, 0].copy()
        for mode in ("exhaustive", "randomized"):
            assert not verify_hopf(G, t, mode=mode).passed
            assert not verify_quasitriangular(G, flip(r_matrix(G)), mode=mode).passed
        notes.append("corrupted S and flipped R rejected")


def test_5_dpr_equivalence(criterion):
    with criterion(5, "DPR intertwiner residual <= 1e-12 on all basis elements") as notes:
        for name in ("S3", "Z4", "Q8"):
            rep = verify_dpr(from_name(name), tol=1e-12)
            dev = rep.check("intertwiner").max_deviation
            notes.append(f"{name} {dev:.1e}")
            assert rep.passed


def test_6_based_ring_and_adjointness(criterion):
    with criterion(6, "basis products are 0 or a basis element; <FF1,F2> = <F1,F*F2> <= 1e-12") as notes:
        cases = actions() + [conjugation_action(from_name("D8")), natural_action(from_name("S4"))]
        worst = 0.0
        for a in cases:
            assert a.set_size * a.group.order <= 256
            mism = based_ring_mismatches(a)
            assert mism["product"] == 0 and mism["star"] == 0
            rng = np.random.default_rng(6)
            for _ in range(100):
                F, F1, F2 = (random_element(a, rng) for _ in range(3))
                lhs = inner_product(multiply(F, F1), F2)
                rhs = inner_product(F1, multiply(star(F), F2))
                worst = max(worst, abs(lhs - rhs))
        notes.append(f"{len(cases)} algebras, adjointness {worst:.2e}")
        assert worst <= 1e-12


SU2_CASES = [(0, 1), (0, 2), (1, 0.5), (1, 1.5), (2, 1), (2, 2)]


def test_7_su2(criterion):
    with criterion(7, "D(SU(2)) truncations: hom/star <= 1e-8, saturation < 1e-10, Schur projector <= 1e-10") as notes:
        band = 1
        worst = 0.0
        for n_, L in SU2_CASES:
            order = max(2 * (two_spin(L) // 2 + band + 1), required_su2_order(n_, L, band))
            r = su2_report(n_, L, order, band=band, tol=1e-8)
            assert r["pass"], r
            worst = max(worst, max(c["maxDeviation"] for c in r["checks"]))
        notes.append(f"{len(SU2_CASES)} (n, L) cases, worst {worst:.1e}")
        q = haar_quadrature(6)
        proj = 0.0
        for theta in (0.0, math.pi):
            for l in (0, 0.5, 1, 1.5, 2):
                F = character_function(l)
                for lp in (0, 0.5, 1, 1.5, 2):
                    d = two_spin(lp) + 1
                    expected = np.eye(d) / d if lp == l else np.zeros((d, d))
                    proj = max(proj, np.abs(tau_theta_l(F, theta, lp, q) - expected).max())
        notes.append(f"projector {proj:.1e}")
        assert proj <= 1e-10


def test_8_sl2r(criterion):
    with criterion(8, "SL(2,R) labels: round trip, conjugation invariance, trace separation, warning") as notes:
        rng = np.random.default_rng(8)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParabolicOrientationWarning)
            for lab in sample_labels():
                rep = canonical_representative(lab)
                assert classify_sl2r(rep).matches(lab, 1e-12)
                for _ in range(1000):
                    assert classify_sl2r(conjugate(random_conjugator(rng), rep)).matches(lab, 1e-9)
            notes.append(f"{len(sample_labels())} families x 1000 conjugations")
            mats = []
            while len(mats) < 200:
                M = rng.normal(size=(2, 2))
                det = np.linalg.det(M)
                if det > 1e-3:
                    mats.append(SL2Matrix.from_array(M / math.sqrt(det)))
            labels = [classify_sl2r(g) for g in mats]
            for i in range(len(mats)):
                for j in range(i + 1, len(mats)):
                    if abs(mats[i].trace - mats[j].trace) > 1e-9:
                        assert not labels[i].matches(labels[j], 1e-9)
        notes.append("distinct traces give distinct labels")
        with pytest.warns(ParabolicOrientationWarning):
            classify_sl2r(n(1.0))
        notes.append("parabolic orientation warning emitted")
