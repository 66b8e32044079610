"""The quantum double ``D(G)`` of a finite group as a quasitriangular Hopf *-algebra.

``D(G)`` is the transformation group algebra of ``G`` acting on itself by
conjugation. Its coalgebra structure, antipode and universal R-matrix are

    (Delta F)(a1, b1, a2, b2) = F(a1 a2, b1) [b1 = b2]
    eps(F)                    = sum_b F(e, b)
    (S F)(a, b)               = F(b^-1 a^-1 b, b^-1)
    R(a1, b1, a2, b2)         = [b1 = e] [a1 = b2]

Tensors in ``D(G)^{(x) r}`` are stored densely as arrays with ``2r`` axes
``(a1, b1, ..., ar, br)`` (:class:`TensorElement`), or exactly as sparse
dictionaries over basis tuples (:class:`BasisTensor`) for exhaustive checks.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ActionMismatch, DecompositionResidual, InputError, MathFailure, RankMismatch, UnsupportedParams
from .groups import FiniteGroup
from .report import Check, Report
from .reps import InducedIrrep, MatrixRep, all_irreps
from .tga import AlgElement, GAction, conjugation_action, multiply, random_element, star, unit

DENSE_RANK3_MAX_ORDER = 12
EXHAUSTIVE_MAX_ORDER = 8
RANDOMIZED_MAX_ORDER = 24


def quantum_double(G: FiniteGroup) -> GAction:
    """The action underlying ``D(G)``: conjugation of G on itself."""
    a = conjugation_action(G)
    return GAction(a.group, a.act, f"D({G.name})")


def _require_double(action: GAction) -> None:
    if not action.is_conjugation:
        raise ActionMismatch("Hopf structure is only defined for the conjugation action")


# ---------------------------------------------------------------------------
# structure maps on D(G)

def antipode_table(G: FiniteGroup) -> np.ndarray:
    """``table[a, b] = (b^-1 a^-1 b, b^-1)`` so that ``(S F)(a, b) = F(*table[a, b])``."""
    a = np.arange(G.order)[:, None]
    b = np.arange(G.order)[None, :]
    bi = G.inverse[b]
    first = G.conjugation[bi, G.inverse[a]]
    out = np.stack(np.broadcast_arrays(first, bi), axis=-1)
    return out


def _check_antipode_table(G: FiniteGroup, table: np.ndarray | None) -> np.ndarray:
    if table is None:
        return antipode_table(G)
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (G.order, G.order, 2):
        raise InputError(f"antipode table must have shape ({G.order}, {G.order}, 2)")
    return table


def coproduct(F: AlgElement) -> "TensorElement":
    _require_double(F.action)
    G = F.action.group
    n = G.order
    out = np.zeros((n,) * 4, dtype=complex)
    for b in range(n):
        out[:, b, :, b] = F.coeffs[G.cayley, b]
    return TensorElement(G, out)


def counit(F: AlgElement) -> complex:
    _require_double(F.action)
    return complex(F.coeffs[F.action.group.identity].sum())


def antipode(F: AlgElement, table: np.ndarray | None = None) -> AlgElement:
    _require_double(F.action)
    t = _check_antipode_table(F.action.group, table)
    return AlgElement(F.action, F.coeffs[t[..., 0], t[..., 1]])


# ---------------------------------------------------------------------------
# dense tensors

@dataclass(frozen=True, eq=False)
class TensorElement:
    group: FiniteGroup
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        n = self.group.order
        if c.ndim % 2 or c.ndim == 0 or any(s != n for s in c.shape):
            raise RankMismatch(f"tensor coefficients must have an even number of axes of length {n}")
        object.__setattr__(self, "coeffs", c)

    @property
    def rank(self) -> int:
        return self.coeffs.ndim // 2

    def __repr__(self) -> str:
        return f"TensorElement(rank={self.rank}, nnz={np.count_nonzero(self.coeffs)})"

    def _check(self, other: "TensorElement") -> None:
        if other.group.order != self.group.order or not np.array_equal(other.group.cayley, self.group.cayley):
            raise ActionMismatch("tensors over different groups")
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other):
        self._check(other)
        return TensorElement(self.group, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return TensorElement(self.group, self.coeffs - other.coeffs)

    def __neg__(self):
        return TensorElement(self.group, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_multiply(self, other)
        return TensorElement(self.group, self.coeffs * other)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return tensor_multiply(self, other)

    def max_deviation(self, other: "TensorElement") -> float:
        self._check(other)
        return float(np.abs(self.coeffs - other.coeffs).max())


def tensor(*elements: AlgElement) -> TensorElement:
    """Simple tensor ``F1 (x) F2 (x) ...``."""
    if not elements:
        raise RankMismatch("need at least one factor")
    for F in elements:
        _require_double(F.action)
    G = elements[0].action.group
    out = elements[0].coeffs
    for F in elements[1:]:
        out = np.multiply.outer(out, F.coeffs)
    return TensorElement(G, out)


def unit_tensor(G: FiniteGroup, rank: int) -> TensorElement:
    one = np.zeros((G.order, G.order), dtype=complex)
    one[:, G.identity] = 1.0
    out = one
    for _ in range(rank - 1):
        out = np.multiply.outer(out, one)
    return TensorElement(G, out)


def _twisted_product(a: np.ndarray, b: np.ndarray, G: FiniteGroup, rank: int) -> np.ndarray:
    """Legwise product on raw arrays; leading batch axes broadcast."""
    n = G.order
    conj_inv = G.conjugation[G.inverse]        # [z, x] = z^-1 x z
    left_inv = G.cayley[G.inverse]             # [z, y] = z^-1 y
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=complex)
    expand = (Ellipsis,) + (slice(None), None) * rank
    for zs in itertools.product(range(n), repeat=rank):
        sel = (Ellipsis,) + tuple(x for z in zs for x in (slice(None), z))
        a_part = a[sel][expand]
        ix = np.ix_(*[arr for z in zs for arr in (conj_inv[z], left_inv[z])])
        out += a_part * b[(Ellipsis,) + ix]
    return out


def tensor_multiply(A: TensorElement, B: TensorElement) -> TensorElement:
    A._check(B)
    if A.rank >= 3 and A.group.order > DENSE_RANK3_MAX_ORDER:
        raise UnsupportedParams(f"dense rank-{A.rank} products limited to |G| <= {DENSE_RANK3_MAX_ORDER}")
    return TensorElement(A.group, _twisted_product(A.coeffs, B.coeffs, A.group, A.rank))


def _leg_front(c: np.ndarray, leg: int) -> np.ndarray:
    return np.moveaxis(c, (2 * leg, 2 * leg + 1), (0, 1))


def _leg_back(c: np.ndarray, leg: int) -> np.ndarray:
    return np.moveaxis(c, (0, 1), (2 * leg, 2 * leg + 1))


def _check_leg(T: TensorElement, leg: int) -> None:
    if not 0 <= leg < T.rank:
        raise RankMismatch(f"leg {leg} out of range for a rank-{T.rank} tensor")


def coproduct_leg(T: TensorElement, leg: int) -> TensorElement:
    """Apply Delta to one leg, producing a tensor of rank ``T.rank + 1``."""
    _check_leg(T, leg)
    G = T.group
    n = G.order
    if T.rank + 1 >= 3 and n > DENSE_RANK3_MAX_ORDER:
        raise UnsupportedParams(f"dense rank-3 tensors limited to |G| <= {DENSE_RANK3_MAX_ORDER}")
    c = _leg_front(T.coeffs, leg)
    out = np.zeros((n,) * 4 + c.shape[2:], dtype=complex)
    for b in range(n):
        out[:, b, :, b] = c[G.cayley, b]
    return TensorElement(G, np.moveaxis(out, (0, 1, 2, 3), tuple(range(2 * leg, 2 * leg + 4))))


def counit_leg(T: TensorElement, leg: int) -> TensorElement | complex:
    _check_leg(T, leg)
    c = _leg_front(T.coeffs, leg)[T.group.identity].sum(axis=0)
    if T.rank == 1:
        return complex(c)
    return TensorElement(T.group, c)


def antipode_leg(T: TensorElement, leg: int, table: np.ndarray | None = None) -> TensorElement:
    _check_leg(T, leg)
    t = _check_antipode_table(T.group, table)
    c = _leg_front(T.coeffs, leg)
    return TensorElement(T.group, _leg_back(c[t[..., 0], t[..., 1]], leg))


def star_tensor(T: TensorElement) -> TensorElement:
    """Componentwise star on every leg."""
    G = T.group
    inv = G.inverse
    rows = G.conjugation[inv].T      # (x, y) -> y^-1 x y
    c = T.coeffs
    for leg in range(T.rank):
        c = _leg_back(_leg_front(c, leg)[rows, inv[None, :]], leg)
    return TensorElement(G, c.conj())


def flip(T: TensorElement) -> TensorElement:
    if T.rank != 2:
        raise RankMismatch("flip needs a rank-2 tensor")
    return TensorElement(T.group, T.coeffs.transpose(2, 3, 0, 1))


def opposite_coproduct(F: AlgElement) -> TensorElement:
    return flip(coproduct(F))


def r_matrix(G: FiniteGroup) -> TensorElement:
    """``R = sum_x (delta_x (x) delta_e) (x) u_x``."""
    n = G.order
    R = np.zeros((n,) * 4, dtype=complex)
    for x in range(n):
        R[x, G.identity, :, x] = 1.0
    return TensorElement(G, R)


def embed(T: TensorElement, slots: Sequence[int], rank: int) -> TensorElement:
    """Place the legs of ``T`` into ``slots`` of a rank-``rank`` tensor, unit elsewhere."""
    slots = tuple(slots)
    if len(slots) != T.rank or len(set(slots)) != len(slots) or not all(0 <= s < rank for s in slots):
        raise RankMismatch(f"cannot embed a rank-{T.rank} tensor into slots {slots} of rank {rank}")
    G = T.group
    one = np.zeros((G.order, G.order), dtype=complex)
    one[:, G.identity] = 1.0
    out = T.coeffs
    for _ in range(rank - T.rank):
        out = np.multiply.outer(out, one)
    others = [s for s in range(rank) if s not in slots]
    order = list(slots) + others
    src = [ax for s in range(rank) for ax in (2 * s, 2 * s + 1)]
    dst = [ax for s in order for ax in (2 * s, 2 * s + 1)]
    return TensorElement(G, np.moveaxis(out, src, dst))


def multiply_legs(T: TensorElement) -> AlgElement:
    """Multiplication map ``m: D(G) (x) D(G) -> D(G)``."""
    if T.rank != 2:
        raise RankMismatch("multiplication map needs a rank-2 tensor")
    G = T.group
    n = G.order
    action = conjugation_action(G)
    out = np.zeros((n, n), dtype=complex)
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    for b in range(n):
        bi = G.inverse[b]
        # m(T)(x, y) = sum_b T(x, b, b^-1 x b, b^-1 y)
        out += T.coeffs[x, b, G.conjugation[bi, x], G.cayley[bi, y]]
    return AlgElement(action, out)


def as_element(T: TensorElement) -> AlgElement:
    if T.rank != 1:
        raise RankMismatch("only rank-1 tensors are algebra elements")
    return AlgElement(conjugation_action(T.group), T.coeffs)


# ---------------------------------------------------------------------------
# exact sparse basis tensors

Key = tuple  # (a1, b1, a2, b2, ...)


@dataclass(eq=False)
class BasisTensor:
    """Sparse tensor: ``terms[(a1, b1, ..., ar, br)] = coefficient``."""

    group: FiniteGroup
    rank: int
    terms: dict = field(default_factory=dict)

    def clean(self) -> "BasisTensor":
        self.terms = {k: v for k, v in self.terms.items() if v != 0}
        return self

    def to_dense(self) -> TensorElement:
        n = self.group.order
        c = np.zeros((n,) * (2 * self.rank), dtype=complex)
        for k, v in self.terms.items():
            c[k] += v
        return TensorElement(self.group, c)

    @classmethod
    def from_dense(cls, T: TensorElement) -> "BasisTensor":
        idx = np.argwhere(T.coeffs != 0)
        terms = {tuple(int(i) for i in k): complex(T.coeffs[tuple(k)]) for k in idx}
        for k, v in terms.items():
            if v.imag == 0 and v.real == int(v.real):
                terms[k] = int(v.real)
        return cls(T.group, T.rank, terms)

    def max_deviation(self, other: "BasisTensor") -> float:
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(k, 0) - other.terms.get(k, 0)) for k in keys), default=0.0)


class BasisCalculus:
    """Exact structure maps on basis tensors of ``D(G)^{(x) r}``."""

    def __init__(self, G: FiniteGroup, antipode_table: np.ndarray | None = None):
        self.G = G
        n = G.order
        self.n = n
        self.e = G.identity
        self.mul = G.cayley.tolist()
        self.inv = G.inverse.tolist()
        # conj_inv[b][a] = b^-1 a b
        self.conj_inv = G.conjugation[G.inverse].tolist()
        t = _check_antipode_table(G, antipode_table)
        self.sigma = {(a, b): (int(t[a, b, 0]), int(t[a, b, 1])) for a in range(n) for b in range(n)}
        # preimages, so S(delta_p) = sum over q with sigma(q) = p
        self.sigma_pre = defaultdict(list)
        for q, p in self.sigma.items():
            self.sigma_pre[p].append(q)

    def basis(self, *pairs: tuple[int, int]) -> BasisTensor:
        return BasisTensor(self.G, len(pairs), {tuple(x for p in pairs for x in p): 1})

    def unit(self, rank: int) -> BasisTensor:
        terms = {}
        for a_s in itertools.product(range(self.n), repeat=rank):
            terms[tuple(x for a in a_s for x in (a, self.e))] = 1
        return BasisTensor(self.G, rank, terms)

    def product(self, A: BasisTensor, B: BasisTensor) -> BasisTensor:
        if A.rank != B.rank:
            raise RankMismatch(f"rank {A.rank} vs rank {B.rank}")
        r = A.rank
        by_a = defaultdict(list)
        for kb, vb in B.terms.items():
            by_a[kb[0::2]].append((kb[1::2], vb))
        out: dict = defaultdict(int)
        ci, mul = self.conj_inv, self.mul
        for ka, va in A.terms.items():
            need = tuple(ci[ka[2 * i + 1]][ka[2 * i]] for i in range(r))
            for bs, vb in by_a.get(need, ()):
                key = tuple(x for i in range(r) for x in (ka[2 * i], mul[ka[2 * i + 1]][bs[i]]))
                out[key] += va * vb
        return BasisTensor(self.G, r, dict(out)).clean()

    def coproduct_leg(self, T: BasisTensor, leg: int) -> BasisTensor:
        out: dict = defaultdict(int)
        mul, inv = self.mul, self.inv
        for k, v in T.terms.items():
            a, b = k[2 * leg], k[2 * leg + 1]
            head, tail = k[:2 * leg], k[2 * leg + 2:]
            for a1 in range(self.n):
                a2 = mul[inv[a1]][a]
                out[head + (a1, b, a2, b) + tail] += v
        return BasisTensor(self.G, T.rank + 1, dict(out)).clean()

    def counit_leg(self, T: BasisTensor, leg: int) -> BasisTensor:
        out: dict = defaultdict(int)
        for k, v in T.terms.items():
            if k[2 * leg] == self.e:
                out[k[:2 * leg] + k[2 * leg + 2:]] += v
        return BasisTensor(self.G, T.rank - 1, dict(out)).clean()

    def antipode_leg(self, T: BasisTensor, leg: int) -> BasisTensor:
        out: dict = defaultdict(int)
        for k, v in T.terms.items():
            for q in self.sigma_pre[(k[2 * leg], k[2 * leg + 1])]:
                out[k[:2 * leg] + q + k[2 * leg + 2:]] += v
        return BasisTensor(self.G, T.rank, dict(out)).clean()

    def star(self, T: BasisTensor) -> BasisTensor:
        out: dict = defaultdict(int)
        ci, inv = self.conj_inv, self.inv
        for k, v in T.terms.items():
            # (delta_x (x) delta_g)* = delta_{g^-1 x g} (x) delta_{g^-1}
            key = tuple(y for i in range(T.rank) for y in (ci[k[2 * i + 1]][k[2 * i]], inv[k[2 * i + 1]]))
            out[key] += np.conj(v) if isinstance(v, complex) else v
        return BasisTensor(self.G, T.rank, dict(out)).clean()

    def flip(self, T: BasisTensor) -> BasisTensor:
        return BasisTensor(self.G, 2, {k[2:] + k[:2]: v for k, v in T.terms.items()})

    def embed(self, T: BasisTensor, slots: Sequence[int], rank: int) -> BasisTensor:
        others = [s for s in range(rank) if s not in slots]
        out: dict = defaultdict(int)
        for k, v in T.terms.items():
            for a_s in itertools.product(range(self.n), repeat=len(others)):
                key = [None] * (2 * rank)
                for i, s in enumerate(slots):
                    key[2 * s], key[2 * s + 1] = k[2 * i], k[2 * i + 1]
                for a, s in zip(a_s, others):
                    key[2 * s], key[2 * s + 1] = a, self.e
                out[tuple(key)] += v
        return BasisTensor(self.G, rank, dict(out)).clean()

    def multiply_legs(self, T: BasisTensor) -> BasisTensor:
        out: dict = defaultdict(int)
        for (a1, b1, a2, b2), v in T.terms.items():
            if self.conj_inv[b1][a1] == a2:
                out[(a1, self.mul[b1][b2])] += v
        return BasisTensor(self.G, 1, dict(out)).clean()

    def r_matrix(self) -> BasisTensor:
        return BasisTensor(self.G, 2, {(x, self.e, a, x): 1 for x in range(self.n) for a in range(self.n)})

    def scalar(self, c, rank: int = 1) -> BasisTensor:
        u = self.unit(rank)
        return BasisTensor(self.G, rank, {k: c * v for k, v in u.terms.items()}).clean()

    def all_basis(self):
        for a in range(self.n):
            for b in range(self.n):
                yield self.basis((a, b))


# ---------------------------------------------------------------------------
# verification reports

def _mode(G: FiniteGroup, mode: str) -> str:
    if mode == "auto":
        if G.order <= EXHAUSTIVE_MAX_ORDER:
            return "exhaustive"
        if G.order <= RANDOMIZED_MAX_ORDER:
            return "randomized"
        raise UnsupportedParams(f"Hopf verification supports |G| <= {RANDOMIZED_MAX_ORDER}")
    if mode == "exhaustive" and G.order > EXHAUSTIVE_MAX_ORDER:
        raise UnsupportedParams(f"exhaustive verification supports |G| <= {EXHAUSTIVE_MAX_ORDER}")
    if mode == "randomized" and G.order > RANDOMIZED_MAX_ORDER:
        raise UnsupportedParams(f"randomized verification supports |G| <= {RANDOMIZED_MAX_ORDER}")
    if mode not in ("exhaustive", "randomized"):
        raise InputError(f"unknown verification mode {mode!r}")
    return mode


class _Tracker:
    def __init__(self, tol: float):
        self.tol = tol
        self.dev: dict[str, float] = {}

    def add(self, check_id: str, value: float) -> None:
        self.dev[check_id] = max(self.dev.get(check_id, 0.0), float(value))

    def report(self, suite: str, G: FiniteGroup, mode: str) -> Report:
        checks = [Check(k, v, v <= self.tol) for k, v in self.dev.items()]
        return Report(suite, G.name, mode, checks)


def verify_hopf(G: FiniteGroup, antipode_table: np.ndarray | None = None, *, mode: str = "auto",
                tol: float = 1e-12, seed: int = 0, samples: int = 8) -> Report:
    """Check the Hopf algebra axioms of ``D(G)``.

    Exhaustive mode runs over all basis elements (and all basis pairs for
    multiplicativity) in exact arithmetic; randomized mode compares images of
    random elements in tensor products of irreps. ``antipode_table`` replaces
    the antipode, which is how negative controls are run.
    """
    mode = _mode(G, mode)
    tr = _Tracker(tol)
    if mode == "exhaustive":
        _hopf_exhaustive(G, BasisCalculus(G, antipode_table), tr)
    else:
        _hopf_randomized(G, _check_antipode_table(G, antipode_table), tr, np.random.default_rng(seed), samples)
    return tr.report("hopf", G, mode)


def _hopf_exhaustive(G: FiniteGroup, bc: BasisCalculus, tr: _Tracker) -> None:
    basis = list(bc.all_basis())
    deltas = [bc.coproduct_leg(F, 0) for F in basis]
    for F, D in zip(basis, deltas):
        tr.add("coassociativity", bc.coproduct_leg(D, 0).max_deviation(bc.coproduct_leg(D, 1)))
        tr.add("counit_left", bc.counit_leg(D, 0).max_deviation(F))
        tr.add("counit_right", bc.counit_leg(D, 1).max_deviation(F))
        eps = bc.counit_leg(F, 0).terms.get((), 0)
        target = bc.scalar(eps)
        tr.add("antipode_left", bc.multiply_legs(bc.antipode_leg(D, 0)).max_deviation(target))
        tr.add("antipode_right", bc.multiply_legs(bc.antipode_leg(D, 1)).max_deviation(target))
        SS = bc.antipode_leg(bc.antipode_leg(F, 0), 0)
        tr.add("antipode_involutive", SS.max_deviation(F))
    tr.add("coproduct_unit", bc.coproduct_leg(bc.unit(1), 0).max_deviation(bc.unit(2)))
    tr.add("counit_unit", abs(bc.counit_leg(bc.unit(1), 0).terms.get((), 0) - 1))
    for F1, D1 in zip(basis, deltas):
        for F2, D2 in zip(basis, deltas):
            P = bc.product(F1, F2)
            tr.add("coproduct_multiplicative", bc.coproduct_leg(P, 0).max_deviation(bc.product(D1, D2)))
            e12 = bc.counit_leg(P, 0).terms.get((), 0)
            e1 = bc.counit_leg(F1, 0).terms.get((), 0)
            e2 = bc.counit_leg(F2, 0).terms.get((), 0)
            tr.add("counit_multiplicative", abs(e12 - e1 * e2))
            tr.add("antipode_antimultiplicative",
                   bc.antipode_leg(P, 0).max_deviation(bc.product(bc.antipode_leg(F2, 0), bc.antipode_leg(F1, 0))))


def verify_quasitriangular(G: FiniteGroup, r_override: TensorElement | None = None, *, mode: str = "auto",
                           tol: float = 1e-12, seed: int = 0, samples: int = 8) -> Report:
    """Check that ``R`` is an invertible solution of the quasitriangularity axioms.

    ``r_override`` replaces R (negative controls, e.g. the flipped R-matrix).
    """
    mode = _mode(G, mode)
    tr = _Tracker(tol)
    if mode == "exhaustive":
        bc = BasisCalculus(G)
        R = bc.r_matrix() if r_override is None else BasisTensor.from_dense(r_override)
        _qt_exhaustive(bc, R, tr)
    else:
        R = r_matrix(G) if r_override is None else r_override
        _qt_randomized(G, R, tr, np.random.default_rng(seed), samples)
    return tr.report("quasitriangular", G, mode)


def _qt_exhaustive(bc: BasisCalculus, R: BasisTensor, tr: _Tracker) -> None:
    for F in bc.all_basis():
        D = bc.coproduct_leg(F, 0)
        tr.add("intertwines_coproduct", bc.product(R, D).max_deviation(bc.product(bc.flip(D), R)))
    R12, R13, R23 = (bc.embed(R, s, 3) for s in ((0, 1), (0, 2), (1, 2)))
    tr.add("coproduct_first_leg", bc.coproduct_leg(R, 0).max_deviation(bc.product(R13, R23)))
    tr.add("coproduct_second_leg", bc.coproduct_leg(R, 1).max_deviation(bc.product(R13, R12)))
    lhs = bc.product(bc.product(R12, R13), R23)
    rhs = bc.product(bc.product(R23, R13), R12)
    tr.add("yang_baxter", lhs.max_deviation(rhs))
    Rinv = bc.antipode_leg(R, 0)
    tr.add("invertible", max(bc.product(R, Rinv).max_deviation(bc.unit(2)),
                             bc.product(Rinv, R).max_deviation(bc.unit(2))))
    tr.add("unitary", bc.product(R, bc.star(R)).max_deviation(bc.unit(2)))
    tr.add("counit_legs", max(bc.counit_leg(R, 0).max_deviation(bc.unit(1)),
                              bc.counit_leg(R, 1).max_deviation(bc.unit(1))))


def verify_star(G: FiniteGroup, *, mode: str = "auto", tol: float = 1e-12, seed: int = 0,
                samples: int = 8) -> Report:
    """Star axioms of ``D(G)`` and compatibility of the star with Delta, eps and S."""
    mode = _mode(G, mode)
    tr = _Tracker(tol)
    action = quantum_double(G)
    if mode == "exhaustive":
        bc = BasisCalculus(G)
        basis = list(bc.all_basis())
        for F1 in basis:
            s1 = bc.star(F1)
            tr.add("involutive", bc.star(s1).max_deviation(F1))
            tr.add("coproduct_star", bc.coproduct_leg(s1, 0).max_deviation(bc.star(bc.coproduct_leg(F1, 0))))
            tr.add("counit_star", abs(bc.counit_leg(s1, 0).terms.get((), 0)
                                      - np.conj(bc.counit_leg(F1, 0).terms.get((), 0))))
            tr.add("antipode_star", bc.star(bc.antipode_leg(bc.star(bc.antipode_leg(F1, 0)), 0)).max_deviation(F1))
            for F2 in basis:
                lhs = bc.star(bc.product(F1, F2))
                tr.add("antimultiplicative", lhs.max_deviation(bc.product(bc.star(F2), s1)))
    else:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            F1, F2 = random_element(action, rng), random_element(action, rng)
            tr.add("involutive", _rel(star(star(F1)).coeffs, F1.coeffs))
            tr.add("antimultiplicative", _rel(star(multiply(F1, F2)).coeffs, multiply(star(F2), star(F1)).coeffs))
            tr.add("coproduct_star", _rel(coproduct(star(F1)).coeffs, star_tensor(coproduct(F1)).coeffs))
            tr.add("counit_star", _rel(counit(star(F1)), np.conj(counit(F1))))
            tr.add("antipode_star", _rel(star(antipode(star(antipode(F1)))).coeffs, F1.coeffs))
    return tr.report("star", G, mode)


# ---------------------------------------------------------------------------
# representation images of tensors

def counit_rep(G: FiniteGroup) -> MatrixRep:
    """The one-dimensional representation ``F -> eps(F)``."""
    n = G.order
    B = np.zeros((n, n, 1, 1), dtype=complex)
    B[G.identity, :, 0, 0] = 1.0
    return MatrixRep(conjugation_action(G), B)


def tensor_product_rep(rep1: MatrixRep, rep2: MatrixRep) -> MatrixRep:
    """``(rep1 (x) rep2) o Delta`` on ``V1 (x) V2``."""
    if not rep1.action.same_as(rep2.action):
        raise ActionMismatch("representations of different algebras")
    _require_double(rep1.action)
    G = rep1.action.group
    n = G.order
    B1, B2 = rep1.basis_matrices, rep2.basis_matrices
    d1, d2 = rep1.dimension, rep2.dimension
    P = np.zeros((n, n, d1 * d2, d1 * d2), dtype=complex)
    for a1 in range(n):
        # P[a1 a2, b] += B1[a1, b] (x) B2[a2, b]
        K = np.einsum("bij,ybkl->ybikjl", B1[a1], B2).reshape(n, n, d1 * d2, d1 * d2)
        P[G.cayley[a1]] += K
    return MatrixRep(rep1.action, P)


def tensor_image(T: TensorElement, reps: Sequence[MatrixRep]) -> np.ndarray:
    """Image of a rank-2 tensor under ``reps[0] (x) reps[1]``."""
    if T.rank != 2 or len(reps) != 2:
        raise RankMismatch("tensor_image handles rank-2 tensors")
    B1, B2 = reps[0].basis_matrices, reps[1].basis_matrices
    half = np.tensordot(T.coeffs, B2, axes=([2, 3], [0, 1]))      # (a1, b1, k, l)
    M = np.einsum("abkl,abij->ikjl", half, B1, optimize=True)
    d1, d2 = B1.shape[-1], B2.shape[-1]
    return M.reshape(d1 * d2, d1 * d2)


def _embed_operator(M: np.ndarray, slots: tuple[int, int], dims: Sequence[int]) -> np.ndarray:
    """Operator on ``V_s0 (x) V_s1`` extended by the identity to ``V_0 (x) V_1 (x) V_2``."""
    i, j = slots
    (k,) = [s for s in range(3) if s not in slots]
    di, dj, dk = dims[i], dims[j], dims[k]
    M4 = M.reshape(di, dj, di, dj)
    full = np.einsum("pqrs,tu->pqtrsu", M4, np.eye(dk))   # axes (i, j, k | i, j, k)
    order = [i, j, k]
    perm = [order.index(s) for s in range(3)]
    full = full.transpose(perm + [3 + p for p in perm])
    D = dims[0] * dims[1] * dims[2]
    return full.reshape(D, D)


def _random_irreps(irr: Sequence[InducedIrrep], rng, count: int, max_total: int) -> list[InducedIrrep]:
    """Uniformly chosen irreps whose tensor product has dimension at most ``max_total``."""
    while True:
        picks = [irr[int(i)] for i in rng.integers(0, len(irr), size=count)]
        if np.prod([r.dimension for r in picks]) <= max_total:
            return picks


def _antipode_image(rep: MatrixRep, table: np.ndarray) -> np.ndarray:
    """Matrices of ``S(delta_p)`` for every basis element p."""
    n = rep.action.group.order
    out = np.zeros_like(rep.basis_matrices)
    flat = table[..., 0] * n + table[..., 1]
    np.add.at(out.reshape(n * n, *out.shape[2:]), flat.ravel(), rep.basis_matrices.reshape(n * n, *out.shape[2:]))
    return out


def _rel(lhs, rhs) -> float:
    """Max deviation relative to the size of the compared quantities."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    return float(np.abs(lhs - rhs).max() / max(1.0, np.abs(lhs).max(), np.abs(rhs).max()))


def _sparse_random(action: GAction, rng) -> AlgElement:
    """Random element supported on a few basis elements, so local defects stay visible."""
    return random_element(action, rng, density=min(1.0, 4.0 / action.set_size))


def _hopf_randomized(G: FiniteGroup, table: np.ndarray, tr: _Tracker, rng, samples: int) -> None:
    action = quantum_double(G)
    irr = all_irreps(action)
    eps = counit_rep(G)
    n = G.order
    for _ in range(samples):
        t1, t2, t3 = _random_irreps(irr, rng, 3, max_total=128)
        F1, F2 = _sparse_random(action, rng), _sparse_random(action, rng)
        D1 = coproduct(F1)
        lhs = tensor_image(D1, [tensor_product_rep(t1, t2), t3])
        rhs = tensor_image(D1, [t1, tensor_product_rep(t2, t3)])
        tr.add("coassociativity", _rel(lhs, rhs))
        Dm = D1.coeffs.reshape(n * n, n * n)
        # the irreps together are faithful, so these identities are checked on F1 itself
        for t in irr:
            tr.add("counit_left", _rel(tensor_image(D1, [eps, t]), t.apply(F1)))
            tr.add("counit_right", _rel(tensor_image(D1, [t, eps]), t.apply(F1)))
            d = t.dimension
            B = t.basis_matrices.reshape(n * n, d, d)
            BS = _antipode_image(t, table).reshape(n * n, d, d)
            eps_F = counit(F1) * np.eye(d)
            left = np.einsum("pq,pij,qjk->ik", Dm, BS, B, optimize=True)
            right = np.einsum("pq,pij,qjk->ik", Dm, B, BS, optimize=True)
            tr.add("antipode_left", _rel(left, eps_F))
            tr.add("antipode_right", _rel(right, eps_F))
        t1, t2 = _random_irreps(irr, rng, 2, max_total=64)
        prod = tensor_image(coproduct(multiply(F1, F2)), [t1, t2])
        split = tensor_image(D1, [t1, t2]) @ tensor_image(coproduct(F2), [t1, t2])
        tr.add("coproduct_multiplicative", _rel(prod, split))
        tr.add("counit_multiplicative", _rel(counit(multiply(F1, F2)), counit(F1) * counit(F2)))
        SP = antipode(multiply(F1, F2), table)
        tr.add("antipode_antimultiplicative", _rel(SP.coeffs, multiply(antipode(F2, table), antipode(F1, table)).coeffs))
    tr.add("coproduct_unit", coproduct(unit(action)).max_deviation(unit_tensor(G, 2)))
    tr.add("counit_unit", abs(counit(unit(action)) - 1))
    ident = np.stack(np.meshgrid(np.arange(n), np.arange(n), indexing="ij"), axis=-1)
    tr.add("antipode_involutive", float(np.any(table[table[..., 0], table[..., 1]] != ident)))


def _qt_randomized(G: FiniteGroup, R: TensorElement, tr: _Tracker, rng, samples: int) -> None:
    action = quantum_double(G)
    irr = all_irreps(action)
    eps = counit_rep(G)
    for _ in range(samples):
        F = _sparse_random(action, rng)
        D = coproduct(F)
        t1, t2 = _random_irreps(irr, rng, 2, max_total=64)
        R12 = tensor_image(R, [t1, t2])
        tr.add("intertwines_coproduct",
               _rel(R12 @ tensor_image(D, [t1, t2]), tensor_image(flip(D), [t1, t2]) @ R12))
        t1, t2, t3 = _random_irreps(irr, rng, 3, max_total=128)
        dims = (t1.dimension, t2.dimension, t3.dimension)
        R12 = tensor_image(R, [t1, t2])
        E12 = _embed_operator(R12, (0, 1), dims)
        E13 = _embed_operator(tensor_image(R, [t1, t3]), (0, 2), dims)
        E23 = _embed_operator(tensor_image(R, [t2, t3]), (1, 2), dims)
        tr.add("coproduct_first_leg", _rel(tensor_image(R, [tensor_product_rep(t1, t2), t3]), E13 @ E23))
        tr.add("coproduct_second_leg", _rel(tensor_image(R, [t1, tensor_product_rep(t2, t3)]), E13 @ E12))
        tr.add("yang_baxter", _rel(E12 @ E13 @ E23, E23 @ E13 @ E12))
        Ri = tensor_image(antipode_leg(R, 0), [t1, t2])
        eye = np.eye(R12.shape[0])
        tr.add("invertible", max(_rel(R12 @ Ri, eye), _rel(Ri @ R12, eye)))
        tr.add("unitary", _rel(R12 @ R12.conj().T, eye))
        tr.add("counit_legs", max(_rel(tensor_image(R, [eps, t1]), np.eye(t1.dimension)),
                                  _rel(tensor_image(R, [t1, eps]), np.eye(t1.dimension))))


# ---------------------------------------------------------------------------
# fusion rules

def character_support_violation(rep: InducedIrrep) -> float:
    """Largest |chi(x, g)| outside ``{x in class, g x = x g}``; zero for a correct irrep."""
    G = rep.action.group
    chi = rep.character()
    mask = np.zeros(chi.shape, dtype=bool)
    for x in rep.orbit.members:
        mask[x] = G.cayley[:, x] == G.cayley[x, :]
    return float(np.abs(chi[~mask]).max()) if (~mask).any() else 0.0


def tensor_character(rep1: MatrixRep, rep2: MatrixRep) -> np.ndarray:
    """Character of ``rep1 (x) rep2``: ``chi(x, g) = sum_{a1 a2 = x} chi1(a1, g) chi2(a2, g)``."""
    G = rep1.action.group
    c1, c2 = rep1.character(), rep2.character()
    out = np.zeros_like(c1)
    for a1 in range(G.order):
        out[G.cayley[a1]] += c1[a1][None, :] * c2
    return out


def decompose_character(chi: np.ndarray, irr: Sequence[InducedIrrep], tol: float = 1e-8) -> list[tuple[tuple[int, int], int]]:
    """Multiplicities of irreducible characters in ``chi`` (least squares, then integrality check)."""
    C = np.stack([r.character().ravel() for r in irr], axis=1)
    m, *_ = np.linalg.lstsq(C, chi.ravel(), rcond=None)
    mi = np.round(m.real).astype(int)
    frac = np.abs(m - mi).max()
    resid = np.abs(C @ mi - chi.ravel()).max()
    if frac > 1e-6 or resid > tol * max(1.0, np.abs(chi).max()) or (mi < 0).any():
        raise DecompositionResidual(f"multiplicities not integral: deviation {frac:.2e}, residual {resid:.2e}")
    return [(r.label, int(k)) for r, k in zip(irr, mi) if k]


def tensor_decompose(rep1: InducedIrrep, rep2: InducedIrrep,
                     irr: Sequence[InducedIrrep] | None = None) -> list[tuple[tuple[int, int], int]]:
    """Decompose ``rep1 (x) rep2`` into irreps; returns ``[(label, multiplicity), ...]``."""
    if not rep1.action.same_as(rep2.action):
        raise ActionMismatch("representations of different algebras")
    _require_double(rep1.action)
    irr = all_irreps(rep1.action) if irr is None else irr
    for r in (rep1, rep2):
        v = character_support_violation(r)
        if v > 1e-10:
            raise MathFailure(f"character of {r.label} does not vanish off its support ({v:.2e})")
    out = decompose_character(tensor_character(rep1, rep2), irr)
    dims = {r.label: r.dimension for r in irr}
    if sum(k * dims[l] for l, k in out) != rep1.dimension * rep2.dimension:
        raise DecompositionResidual("dimensions of the decomposition do not add up")
    return out
