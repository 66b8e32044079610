"""Irreducible *-representations of transformation group algebras.

Every irreducible *-representation comes from an orbit ``O`` with base point
``xi_A``, stabilizer ``N`` and an irrep ``alpha`` of ``N``. It acts on
equivariant functions ``phi(x n) = alpha(n)^-1 phi(x)`` by

    (pi(F) phi)(x) = sum_g F(x . xi_A, g) phi(g^-1 x),

and we store ``phi`` through its values on a fixed set of coset
representatives. Representations are kept as the stack of matrices of all
basis elements ``delta_xi (x) delta_g``, so ``pi(F) = sum F(xi, g) B[xi, g]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ActionMismatch, InputError, NotStabilizerIrrep, UnknownLabel
from .groups import GroupIrrep, coset_decomposition, irreps
from .report import Check, Report
from .tga import (AlgElement, GAction, Orbit, based_ring_mismatches, generating_elements, inner_product, multiply,
                  norm1, orbits, random_element, star, unit)

NULLSPACE_TOL = 1e-8
BASED_RING_MAX_SIZE = 256  # exhaustive pair check is quadratic in |X||G|


@dataclass(frozen=True, eq=False)
class MatrixRep:
    """A finite-dimensional representation given by the matrices of all basis elements."""

    action: GAction
    basis_matrices: np.ndarray  # (|X|, |G|, D, D)

    @property
    def dimension(self) -> int:
        return self.basis_matrices.shape[-1]

    def apply(self, F: AlgElement) -> np.ndarray:
        if not self.action.same_as(F.action):
            raise ActionMismatch("element and representation belong to different algebras")
        return np.tensordot(F.coeffs, self.basis_matrices, axes=2)

    def __call__(self, F: AlgElement) -> np.ndarray:
        return self.apply(F)

    def character(self) -> np.ndarray:
        """Traces of the basis matrices, shape (|X|, |G|)."""
        return np.trace(self.basis_matrices, axis1=2, axis2=3)


@dataclass(frozen=True, eq=False)
class InducedIrrep(MatrixRep):
    orbit: Orbit = None
    alpha: GroupIrrep = None
    section: tuple[int, ...] = ()

    @property
    def label(self) -> tuple[int, int]:
        """``(base point of the orbit, label of alpha)``."""
        return self.orbit.base_point, self.alpha.label

    def __repr__(self) -> str:
        return f"InducedIrrep(label={self.label}, dimension={self.dimension})"


def _check_pair(action: GAction, orbit: Orbit, alpha: GroupIrrep) -> None:
    if not action.same_as(orbit.action):
        raise ActionMismatch("orbit belongs to a different action")
    group = getattr(alpha.group, "members", None)
    if group is None or tuple(group) != orbit.stabilizer.members:
        raise NotStabilizerIrrep(
            f"alpha must be an irrep of the stabilizer of {orbit.base_point} (order {orbit.stabilizer.order})"
        )


def induce(action: GAction, orbit: Orbit, alpha: GroupIrrep) -> InducedIrrep:
    """The induced irrep for ``(orbit, alpha)`` in the coset-representative basis."""
    _check_pair(action, orbit, alpha)
    G = action.group
    N = orbit.stabilizer
    reps, coset_of = coset_decomposition(G, N)
    if reps != orbit.section:
        raise InputError("orbit section does not match the canonical coset section")
    k, d = len(reps), alpha.degree
    B = np.zeros(action.shape + (k * d, k * d), dtype=complex)
    for i, s_i in enumerate(reps):
        xi_i = orbit.members[i]
        for g in range(G.order):
            # g^-1 s_i = s_j n with n in N
            h = G.mul(G.inv(g), s_i)
            j = int(coset_of[h])
            n = G.mul(G.inv(reps[j]), h)
            B[xi_i, g, i * d:(i + 1) * d, j * d:(j + 1) * d] = alpha.matrix(G.inv(n))
    B.setflags(write=False)
    return InducedIrrep(action, B, orbit, alpha, tuple(reps))


def _validate_section(orbit: Orbit, section: Mapping[int, int] | Sequence[int]) -> tuple[int, ...]:
    act = orbit.action.act
    if isinstance(section, Mapping):
        section = [section[xi] for xi in orbit.members]
    section = tuple(int(s) for s in section)
    if len(section) != len(orbit):
        raise InputError("section must give one group element per orbit point")
    for xi, s in zip(orbit.members, section):
        if act[s, orbit.base_point] != xi:
            raise InputError(f"section element {s} does not map the base point to {xi}")
    return section


def section_form(action: GAction, orbit: Orbit, alpha: GroupIrrep,
                 section: Mapping[int, int] | Sequence[int] | None = None) -> InducedIrrep:
    """The same irrep realised on functions ``v: O -> V_alpha`` through a section ``s``.

    ``delta_eta (x) delta_g`` has the single nonzero block
    ``(eta, g^-1 eta) -> alpha(s(eta)^-1 g s(g^-1 eta))``.
    """
    _check_pair(action, orbit, alpha)
    sec = _validate_section(orbit, orbit.section if section is None else section)
    G = action.group
    d = alpha.degree
    k = len(orbit)
    pos = orbit.position
    B = np.zeros(action.shape + (k * d, k * d), dtype=complex)
    for a, eta in enumerate(orbit.members):
        for g in range(G.order):
            b = pos[int(action.act[G.inv(g), eta])]
            m = G.mul(G.mul(G.inv(sec[a]), g), sec[b])
            B[eta, g, a * d:(a + 1) * d, b * d:(b + 1) * d] = alpha.matrix(m)
    B.setflags(write=False)
    return InducedIrrep(action, B, orbit, alpha, sec)


def section_intertwiner(orbit: Orbit, alpha: GroupIrrep, section_from: Sequence[int],
                        section_to: Sequence[int]) -> np.ndarray:
    """Unitary ``T`` with ``T pi_from(F) = pi_to(F) T``: block-diagonal ``alpha(s_to(eta)^-1 s_from(eta))``."""
    s1 = _validate_section(orbit, section_from)
    s2 = _validate_section(orbit, section_to)
    G = orbit.action.group
    d = alpha.degree
    T = np.zeros((len(orbit) * d,) * 2, dtype=complex)
    for a in range(len(orbit)):
        T[a * d:(a + 1) * d, a * d:(a + 1) * d] = alpha.matrix(G.mul(G.inv(s2[a]), s1[a]))
    return T


def all_irreps(action: GAction, seed: int = 0) -> list[InducedIrrep]:
    """One irrep per pair (orbit, irrep of its stabilizer), ordered by base point then alpha label."""
    out = []
    for orb in orbits(action):
        for alpha in irreps(orb.stabilizer, seed):
            out.append(induce(action, orb, alpha))
    return out


def find_irrep(reps: Sequence[InducedIrrep], label: tuple[int, int]) -> InducedIrrep:
    for r in reps:
        if r.label == tuple(label):
            return r
    raise UnknownLabel(f"no irrep with label {tuple(label)}; known labels {[r.label for r in reps]}")


# ---------------------------------------------------------------------------
# commutants and equivalence

def _as_matrices(rep_or_mats) -> list[np.ndarray]:
    if isinstance(rep_or_mats, MatrixRep):
        return [rep_or_mats.apply(F) for F in generating_elements(rep_or_mats.action)]
    return [np.asarray(M) for M in rep_or_mats]


def _commutation_system(left: list[np.ndarray], right: list[np.ndarray]) -> np.ndarray:
    """Stacked linear system for ``T L = R T`` with ``T`` row-major vectorised."""
    d_out, d_in = right[0].shape[0], left[0].shape[0]
    I_out, I_in = np.eye(d_out), np.eye(d_in)
    blocks = [np.kron(I_out, L.T) - np.kron(R, I_in) for L, R in zip(left, right)]
    return np.vstack(blocks)


def _nullspace(K: np.ndarray, tol: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(K)
    smax = s.max() if s.size else 0.0
    if smax == 0.0:
        return np.eye(K.shape[1], dtype=complex)
    rank = int(np.sum(s > tol * smax))
    return vh[rank:].conj().T


def commutant_dimension(rep_or_mats, tol: float = NULLSPACE_TOL) -> int:
    """Dimension of ``{T : T M = M T for all M}``.

    For a representation the matrices are the images of :func:`generating_elements`,
    which determine the full commutant.
    """
    mats = _as_matrices(rep_or_mats)
    return _nullspace(_commutation_system(mats, mats), tol).shape[1]


def are_equivalent(rep1: MatrixRep, rep2: MatrixRep, tol: float = NULLSPACE_TOL,
                   seed: int = 0) -> np.ndarray | None:
    """A unitary ``U`` with ``U rep1(F) = rep2(F) U`` for all F, or None."""
    if not rep1.action.same_as(rep2.action):
        raise ActionMismatch("representations of different algebras")
    if rep1.dimension != rep2.dimension:
        return None
    gens = generating_elements(rep1.action)
    m1 = [rep1.apply(F) for F in gens]
    m2 = [rep2.apply(F) for F in gens]
    null = _nullspace(_commutation_system(m1, m2), tol)
    if null.shape[1] == 0:
        return None
    rng = np.random.default_rng(seed)
    c = rng.normal(size=null.shape[1]) + 1j * rng.normal(size=null.shape[1])
    D = rep1.dimension
    T = (null @ c).reshape(D, D)
    u, s, vh = np.linalg.svd(T)
    if s[-1] <= tol * s[0]:
        return None
    U = u @ vh
    scale = max(1.0, max(np.abs(M).max() for M in m1))
    resid = max(np.abs(U @ a - b @ U).max() for a, b in zip(m1, m2))
    if resid > 1e3 * tol * scale:
        return None
    return U


# ---------------------------------------------------------------------------
# numerical checks on sampled elements

def representation_errors(rep: MatrixRep, elements: Sequence[AlgElement]) -> dict[str, float]:
    """Max deviations of homomorphism, star and unit, plus the worst ratio
    ``||rep(F)||_op / ||F||_1`` (at most 1 for a *-representation)."""
    imgs = [rep.apply(F) for F in elements]
    hom = 0.0
    k = len(elements)
    for i in range(k):
        # consecutive pairs, wrapping around
        j = (i + 1) % k
        prod = rep.apply(multiply(elements[i], elements[j]))
        hom = max(hom, np.abs(prod - imgs[i] @ imgs[j]).max())
    st = max(np.abs(rep.apply(star(F)) - M.conj().T).max() for F, M in zip(elements, imgs))
    un = np.abs(rep.apply(unit(rep.action)) - np.eye(rep.dimension)).max()
    ratio = max(np.linalg.norm(M, 2) / norm1(F) for F, M in zip(elements, imgs))
    return {"homomorphism": float(hom), "star": float(st), "unit": float(un), "norm_ratio": float(ratio)}


def verify_tga(action: GAction, *, tol: float = 1e-10, seed: int = 0, samples: int = 100) -> Report:
    """Structure of ``C(X x G)`` and its irreps: completeness, irreducibility, inequivalence,
    the *-representation contract on random elements, the based-ring property and
    the adjointness ``<F F1, F2> = <F1, F* F2>``. The based-ring check runs only
    when ``|X||G| <= BASED_RING_MAX_SIZE``."""
    rng = np.random.default_rng(seed)
    irr = all_irreps(action, seed)
    checks = []
    total = sum(r.dimension ** 2 for r in irr)
    checks.append(Check("completeness", abs(total - action.set_size * action.group.order), total == action.set_size * action.group.order))
    worst = max(abs(commutant_dimension(r) - 1) for r in irr)
    checks.append(Check("commutant", worst, worst == 0))
    pairs = sum(1 for i, r in enumerate(irr) for q in irr[i + 1:]
                if r.dimension == q.dimension and are_equivalent(r, q) is not None)
    checks.append(Check("inequivalence", pairs, pairs == 0))
    elements = [random_element(action, rng) for _ in range(samples)]
    errs = {"homomorphism": 0.0, "star": 0.0, "unit": 0.0, "norm_ratio": 0.0}
    for r in irr:
        e = representation_errors(r, elements)
        errs = {k: max(errs[k], e[k]) for k in errs}
    for k in ("homomorphism", "star", "unit"):
        checks.append(Check(k, errs[k], errs[k] <= tol))
    excess = max(errs["norm_ratio"] - 1.0, 0.0)
    checks.append(Check("norm_decreasing", excess, excess <= tol))
    if action.set_size * action.group.order <= BASED_RING_MAX_SIZE:
        mism = based_ring_mismatches(action)
        bad = mism["product"] + mism["star"]
        checks.append(Check("based_ring", bad, bad == 0))
    adj = 0.0
    for _ in range(samples):
        F, F1, F2 = (random_element(action, rng) for _ in range(3))
        lhs = inner_product(multiply(F, F1), F2)
        rhs = inner_product(F1, multiply(star(F), F2))
        adj = max(adj, abs(lhs - rhs) / max(1.0, abs(lhs)))
    checks.append(Check("inner_product_adjoint", adj, adj <= tol))
    return Report("tga", action.name or action.group.name, f"sampled:{samples}", checks)
