"""Irreps of ``D(G)`` realised on ``C[G] (x)_{N_A} V_alpha``.

For a class representative ``g_A`` with centralizer ``N_A`` and an irrep
``alpha`` of ``N_A``, the carrier has basis ``x_i (x) e_k`` for left coset
representatives ``x_i`` of ``N_A``. Group elements act by left multiplication,
rewriting ``g x_i = x_j n`` as ``x_j (x) alpha(n)``, and
``delta_xi (x) delta_e`` multiplies ``x_j (x) v`` by ``[xi = x_j g_A x_j^-1]``.

:func:`intertwiner` maps this realisation onto the induced one of
:mod:`qdouble.reps`, built from the formula
``x (x) v -> |N_A|^-1 sum_n delta_{x n^-1} alpha(n) v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NotCentralizerIrrep
from .groups import FiniteGroup, GroupIrrep, Subgroup, centralizer, coset_decomposition, irreps
from .report import Check, Report
from .reps import InducedIrrep, MatrixRep, induce
from .tga import AlgElement, conjugation_action, orbit_of


@dataclass(frozen=True, eq=False)
class DprRep(MatrixRep):
    class_rep: int = 0
    alpha: GroupIrrep = None
    coset_reps: tuple[int, ...] = ()

    @property
    def centralizer(self) -> Subgroup:
        return self.alpha.group

    @property
    def label(self) -> tuple[int, int]:
        return self.class_rep, self.alpha.label

    def __repr__(self) -> str:
        return f"DprRep(label={self.label}, dimension={self.dimension})"


def _coset_split(G: FiniteGroup, N: Subgroup, reps: Sequence[int], x: int) -> tuple[int, int]:
    """Write ``x = reps[i] n`` with ``n`` in ``N``; returns ``(i, n)``."""
    for i, r in enumerate(reps):
        n = G.mul(G.inv(r), x)
        if n in N:
            return i, n
    raise InputError(f"element {x} lies in no listed coset")


def _check_coset_reps(G: FiniteGroup, N: Subgroup, coset_reps: Sequence[int] | None) -> tuple[int, ...]:
    if coset_reps is None:
        return coset_decomposition(G, N)[0]
    reps = tuple(int(r) for r in coset_reps)
    if len(reps) * N.order != G.order:
        raise InputError(f"need {G.order // N.order} coset representatives, got {len(reps)}")
    seen = set()
    for r in reps:
        key = frozenset(G.mul(r, n) for n in N.members)
        if key in seen:
            raise InputError(f"coset representatives {reps} repeat a coset")
        seen.add(key)
    return reps


def dpr_rep(G: FiniteGroup, class_rep: int, alpha: GroupIrrep,
            coset_reps: Sequence[int] | None = None) -> DprRep:
    """Matrices of ``delta_xi (x) delta_g`` on ``C[G] (x)_{N_A} V_alpha``."""
    N = centralizer(G, class_rep)
    if not isinstance(alpha.group, Subgroup) or alpha.group.members != N.members:
        raise NotCentralizerIrrep(f"alpha must be an irrep of the centralizer of {class_rep}")
    reps = _check_coset_reps(G, N, coset_reps)
    action = conjugation_action(G)
    k, d = len(reps), alpha.degree
    n = G.order
    # u_g: g x_i = x_j m  ->  block (j, i) = alpha(m)
    U = np.zeros((n, k * d, k * d), dtype=complex)
    for g in range(n):
        for i, x in enumerate(reps):
            j, m = _coset_split(G, N, reps, G.mul(g, x))
            U[g, j * d:(j + 1) * d, i * d:(i + 1) * d] = alpha.matrix(m)
    # delta_xi (x) delta_e is diagonal: block j survives iff xi = x_j g_A x_j^-1
    points = [int(G.conjugation[x, class_rep]) for x in reps]
    B = np.zeros((n, n, k * d, k * d), dtype=complex)
    for j, xi in enumerate(points):
        B[xi, :, j * d:(j + 1) * d, :] = U[:, j * d:(j + 1) * d, :]
    B.setflags(write=False)
    return DprRep(action, B, class_rep, alpha, reps)


def dpr_irreps(G: FiniteGroup, seed: int = 0) -> list[DprRep]:
    """One DPR irrep per (class representative, irrep of its centralizer)."""
    action = conjugation_action(G)
    out = []
    seen = set()
    for x in range(G.order):
        orb = orbit_of(action, x)
        if orb.base_point in seen:
            continue
        seen.add(orb.base_point)
        N = centralizer(G, orb.base_point)
        for alpha in irreps(N, seed):
            out.append(dpr_rep(G, orb.base_point, alpha))
    return out


def matching_induced(rep: DprRep) -> InducedIrrep:
    """The induced irrep with the same ``(g_A, alpha)`` label."""
    action = rep.action
    orb = orbit_of(action, rep.class_rep)
    if orb.base_point != rep.class_rep:
        raise InputError("class_rep must be the base point (smallest element) of its class")
    return induce(action, orb, rep.alpha)


def intertwiner(rep: DprRep, target: InducedIrrep | None = None) -> np.ndarray:
    """``Phi`` with ``Phi rep(F) = target(F) Phi``.

    ``x (x) v`` is sent to the equivariant function ``|N|^-1 sum_n delta_{x n^-1} alpha(n) v``,
    which is then read off at the coset representatives of ``target``.
    """
    target = matching_induced(rep) if target is None else target
    G = rep.action.group
    N = rep.centralizer
    alpha = rep.alpha
    d = alpha.degree
    src, dst = rep.coset_reps, target.section
    pos = {s: j for j, s in enumerate(dst)}
    Phi = np.zeros((len(dst) * d, len(src) * d), dtype=complex)
    for i, x in enumerate(src):
        for nn in N.members:
            y = G.mul(x, G.inv(nn))
            if y in pos:
                j = pos[y]
                Phi[j * d:(j + 1) * d, i * d:(i + 1) * d] += alpha.matrix(nn) / N.order
    return Phi


def inverse_intertwiner(rep: DprRep, target: InducedIrrep | None = None) -> np.ndarray:
    """``Psi``: an equivariant function ``w`` goes to ``sum_{x in G} x (x) w(x)``."""
    target = matching_induced(rep) if target is None else target
    G = rep.action.group
    N = rep.centralizer
    alpha = rep.alpha
    d = alpha.degree
    src, dst = rep.coset_reps, target.section
    Psi = np.zeros((len(src) * d, len(dst) * d), dtype=complex)
    for x in range(G.order):
        # w(x) = alpha(m^-1) w(s_j) where x = s_j m
        j, m = _coset_split(G, N, dst, x)
        # x (x) u = x_i (x) alpha(m') u where x = x_i m'
        i, m2 = _coset_split(G, N, src, x)
        Psi[i * d:(i + 1) * d, j * d:(j + 1) * d] += alpha.matrix(m2) @ alpha.matrix(G.inv(m))
    return Psi


def intertwiner_residual(rep: DprRep, target: InducedIrrep | None = None,
                         elements: Sequence[AlgElement] | None = None) -> float:
    """Max of ``|Phi rep(F) - target(F) Phi|`` over all basis elements (or ``elements``)."""
    target = matching_induced(rep) if target is None else target
    Phi = intertwiner(rep, target)
    if elements is None:
        lhs = np.einsum("ij,xgjk->xgik", Phi, rep.basis_matrices)
        rhs = np.einsum("xgij,jk->xgik", target.basis_matrices, Phi)
        return float(np.abs(lhs - rhs).max())
    return float(max(np.abs(Phi @ rep.apply(F) - target.apply(F) @ Phi).max() for F in elements))


def full_function_action(G: FiniteGroup, class_rep: int, alpha: GroupIrrep, F: AlgElement,
                         values: np.ndarray) -> np.ndarray:
    """Apply ``F`` to an equivariant function given by all its values ``values[x]``:

        (pi(F) v)(x) = sum_y F(x g_A x^-1, y) v(y^-1 x).
    """
    n = G.order
    out = np.zeros_like(values, dtype=complex)
    for x in range(n):
        xi = G.conjugation[x, class_rep]
        for y in range(n):
            out[x] += F.coeffs[xi, y] * values[G.mul(G.inv(y), x)]
    return out


def equivariant_extension(G: FiniteGroup, N: Subgroup, reps: Sequence[int], alpha: GroupIrrep,
                          coords: np.ndarray) -> np.ndarray:
    """Values ``v(x)`` on all of G from coordinates at coset representatives, ``v(s n) = alpha(n)^-1 v(s)``."""
    d = alpha.degree
    vals = np.zeros((G.order, d), dtype=complex)
    for x in range(G.order):
        j, m = _coset_split(G, N, reps, x)
        vals[x] = alpha.matrix(G.inv(m)) @ coords[j * d:(j + 1) * d]
    return vals


def verify_dpr(G: FiniteGroup, *, tol: float = 1e-12, seed: int = 0) -> Report:
    """Intertwiner residual and ``Psi Phi = I`` for every (class, centralizer irrep) pair, on all basis elements."""
    resid = 0.0
    inv = 0.0
    for rep in dpr_irreps(G, seed):
        target = matching_induced(rep)
        resid = max(resid, intertwiner_residual(rep, target))
        Phi, Psi = intertwiner(rep, target), inverse_intertwiner(rep, target)
        inv = max(inv, float(np.abs(Psi @ Phi - np.eye(rep.dimension)).max()))
    checks = [Check("intertwiner", resid, resid <= tol), Check("inverse", inv, inv <= tol)]
    return Report("dpr", G.name, "exhaustive", checks)
