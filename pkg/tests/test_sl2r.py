import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdouble.compact.sl2r import (
    IDENTITY, ConjClassLabel, ParabolicOrientationWarning, SL2Matrix, a, canonical_representative, classify_sl2r,
    conjugate, n, random_conjugator, sample_labels, separation_residual, u,
)
from qdouble.errors import InputError, NotUnimodular

pytestmark = pytest.mark.filterwarnings("ignore::qdouble.compact.sl2r.ParabolicOrientationWarning")


def test_examples():
    lab = classify_sl2r(u(math.pi / 3))
    assert lab.family == "EllipticPlus" and abs(lab.parameter - math.pi / 3) < 1e-12
    assert lab.centralizer == "U(1)"
    lab = classify_sl2r(a(1.0))
    assert lab.family == "HyperbolicPos" and abs(lab.parameter - 1.0) < 1e-12
    assert lab.centralizer == "RxZ2"
    lab = classify_sl2r(n(1.0))
    assert lab == ConjClassLabel("ParabolicPos", orientation=1)
    assert classify_sl2r(IDENTITY) == ConjClassLabel("Identity")
    assert classify_sl2r(-IDENTITY).centralizer == "SL(2,R)"
    assert canonical_representative(ConjClassLabel("Identity")) == IDENTITY
    np.testing.assert_allclose(canonical_representative(ConjClassLabel("EllipticPlus", math.pi / 2)).array,
                               u(math.pi / 2).array)


def test_orientation_rule_on_nilpotent_part():
    # orientation + iff q > 0, or q == 0 and r < 0, for g - I = [[p, q], [r, s]]
    assert classify_sl2r(SL2Matrix(1, 0, -1, 1)).orientation == 1
    assert classify_sl2r(SL2Matrix(1, 0, 1, 1)).orientation == -1
    assert classify_sl2r(SL2Matrix(1, -2, 0, 1)).orientation == -1
    # -g rule for trace -2
    assert classify_sl2r(-n(1.0)) == ConjClassLabel("ParabolicNeg", orientation=1)
    assert classify_sl2r(-n(-1.0)) == ConjClassLabel("ParabolicNeg", orientation=-1)


def test_parabolic_warns_but_does_not_fail():
    with pytest.warns(ParabolicOrientationWarning):
        classify_sl2r(n(2.5))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        classify_sl2r(u(1.0))
        classify_sl2r(n(2.5), warn=False)


@pytest.mark.parametrize("label", sample_labels(), ids=str)
def test_round_trip_and_invariance(label):
    rep = canonical_representative(label)
    assert classify_sl2r(rep) == label or classify_sl2r(rep).matches(label, 1e-12)
    rng = np.random.default_rng(hash(str(label)) % 2**32)
    for _ in range(1000):
        h = random_conjugator(rng)
        assert classify_sl2r(conjugate(h, rep)).matches(label, 1e-9)


def test_disjointness_of_representatives():
    rng = np.random.default_rng(0)
    hs = [random_conjugator(rng) for _ in range(1000)]
    labels = sample_labels()
    for l1 in labels:
        for l2 in labels:
            if l1 != l2:
                r = separation_residual(canonical_representative(l1), canonical_representative(l2), hs)
                assert r >= 0.1, (l1, l2, r)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_trace_determines_label_off_the_boundary(x, y, z):
    # random unimodular matrix from three parameters
    g = SL2Matrix.from_array(u(x).array @ a(y / 3).array @ n(z).array)
    lab = classify_sl2r(g)
    assert abs(lab.trace - g.trace) < 1e-9 or abs(abs(g.trace) - 2) <= 1e-9
    assert lab.centralizer in ("U(1)", "RxZ2", "SL(2,R)")
    assert classify_sl2r(canonical_representative(lab)).matches(lab, 1e-9)


def test_distinct_traces_distinct_labels():
    rng = np.random.default_rng(1)
    mats = []
    for _ in range(300):
        M = rng.normal(size=(2, 2))
        det = np.linalg.det(M)
        if det < 0:
            M[0] *= -1
            det = -det
        mats.append(SL2Matrix.from_array(M / math.sqrt(det)))
    labels = [classify_sl2r(g) for g in mats]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if abs(mats[i].trace - mats[j].trace) > 1e-6:
                assert not labels[i].matches(labels[j], 1e-9)


def test_elliptic_sign_is_invariant_and_distinguishes():
    rng = np.random.default_rng(2)
    for theta in (0.3, 1.2, 2.9):
        plus, minus = u(theta), u(-theta)
        for _ in range(50):
            h = random_conjugator(rng, spread=2.0)
            assert classify_sl2r(conjugate(h, plus)).family == "EllipticPlus"
            assert classify_sl2r(conjugate(h, minus)).family == "EllipticMinus"


def test_boundary_tolerance_routes_to_parabolic():
    eps = 5e-10
    g = SL2Matrix.from_array(np.array([[1 + eps, 1.0], [0.0, 1 / (1 + eps)]]))
    assert classify_sl2r(g).family == "ParabolicPos"
    g = SL2Matrix.from_array(np.diag([1 + 1e-12, 1 / (1 + 1e-12)]))
    assert classify_sl2r(g).family == "Identity"


def test_errors():
    with pytest.raises(NotUnimodular):
        SL2Matrix(1, 1, 1, 1)
    with pytest.raises(InputError):
        ConjClassLabel("EllipticPlus", 4.0)
    with pytest.raises(InputError):
        ConjClassLabel("ParabolicPos")
    with pytest.raises(InputError):
        ConjClassLabel("Loxodromic")


def test_label_dict_round_trip():
    for lab in sample_labels():
        assert ConjClassLabel.from_dict(lab.to_dict()) == lab
