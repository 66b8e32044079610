"""Finite groups given by Cayley tables.

Elements are the integers ``0..n-1``; ``cayley[g, h]`` is the index of ``g*h``.
The built-in families use fixed element orderings, which are part of the public
contract so that exported tables and irrep matrices are reproducible:

* ``cyclic(n)``: element ``k`` is ``k mod n``.
* ``dihedral(n)`` (order ``2n``): ``k < n`` is the rotation ``r^k``, ``n + k`` is
  the reflection ``r^k s``; ``s r s = r^-1``.
* ``symmetric(n)``: permutations of ``range(n)`` in lexicographic order, with
  ``(p*q)[i] = p[q[i]]`` (apply ``q`` first).
* ``quaternion8()``: ``1, -1, i, -i, j, -j, k, -k``.
* ``direct_product(G, H)``: ``(g, h)`` has index ``g*|H| + h``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import (
    ConvergenceFailure,
    InputError,
    MathFailure,
    NoIdentity,
    NoInverse,
    NonAssociative,
    SplittingFailure,
    UnsupportedParams,
)

ASSOCIATIVITY_EXHAUSTIVE_MAX = 64
ASSOCIATIVITY_SPOT_CHECKS = 20_000
CHARACTER_TABLE_MAX_ORDER = 200
SYMMETRIC_MAX_DEGREE = 6
# relative tolerance for clustering eigenvalues while splitting
SPLIT_TOL = 1e-8
MAX_SPLIT_RETRIES = 10


def _readonly(a, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group. Build with :func:`from_cayley_table` or :func:`builtin`."""

    cayley: np.ndarray
    inverse: np.ndarray
    identity: int
    name: str = ""

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup(name={self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[g, x] = g x g^-1``."""
        c = self.cayley
        return _readonly(c[c, self.inverse[:, None]], np.int64)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != self.identity:
            h = self.mul(h, g)
            k += 1
        return k

    @cached_property
    def key(self) -> bytes:
        return self.cayley.tobytes() + bytes([self.identity % 256])


GroupLike = Union[FiniteGroup, "Subgroup"]


def from_cayley_table(table, name: str = "", *, seed: int = 0) -> FiniteGroup:
    """Validate a multiplication table and derive identity and inverses."""
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InputError(f"Cayley table must be a non-empty square table, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise InputError("Cayley table entries must be integers")
    arr = arr.astype(np.int64)
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        raise InputError(f"Cayley table entries must lie in [0, {n})")

    rng_ = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(arr[e], rng_) and np.array_equal(arr[:, e], rng_)]
    if not ids:
        raise NoIdentity("no element acts as a two-sided identity")
    e = ids[0]

    inverse = np.empty(n, dtype=np.int64)
    for g in range(n):
        cand = np.nonzero((arr[g] == e) & (arr[:, g] == e))[0]
        if cand.size == 0:
            raise NoInverse(g)
        inverse[g] = cand[0]

    if n <= ASSOCIATIVITY_EXHAUSTIVE_MAX:
        left = arr[arr]                       # (ab)c
        right = arr[rng_[:, None, None], arr[None, :, :]]  # a(bc)
        bad = np.argwhere(left != right)
        if bad.size:
            raise NonAssociative(*map(int, bad[0]))
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, ASSOCIATIVITY_SPOT_CHECKS))
        bad = np.nonzero(arr[arr[a, b], c] != arr[a, arr[b, c]])[0]
        if bad.size:
            i = bad[0]
            raise NonAssociative(int(a[i]), int(b[i]), int(c[i]))

    return FiniteGroup(_readonly(arr, np.int64), _readonly(inverse, np.int64), e, name)


# ---------------------------------------------------------------------------
# built-in families

def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise UnsupportedParams(f"cyclic group needs n >= 1, got {n}")
    k = np.arange(n)
    return from_cayley_table((k[:, None] + k[None, :]) % n, "trivial" if n == 1 else f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetry group of the regular n-gon, order 2n."""
    if n < 1:
        raise UnsupportedParams(f"dihedral group needs n >= 1, got {n}")
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for i in range(2 * n):
        a, f = i % n, i // n
        for j in range(2 * n):
            b, g = j % n, j // n
            # (r^a s^f)(r^b s^g) = r^(a + (-1)^f b) s^(f+g)
            c = (a + (b if f == 0 else -b)) % n
            table[i, j] = c + n * ((f + g) % 2)
    return from_cayley_table(table, f"D{n}")


def symmetric_permutations(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= SYMMETRIC_MAX_DEGREE:
        raise UnsupportedParams(f"symmetric group supported for 1 <= n <= {SYMMETRIC_MAX_DEGREE}, got {n}")
    perms = symmetric_permutations(n)
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return from_cayley_table(table, f"S{n}")


def quaternion8() -> FiniteGroup:
    one = np.eye(2, dtype=complex)
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    qk = qi @ qj
    mats = [one, -one, qi, -qi, qj, -qj, qk, -qk]

    def find(m):
        return next(i for i, x in enumerate(mats) if np.allclose(x, m))

    return from_cayley_table([[find(a @ b) for b in mats] for a in mats], "Q8")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    m = H.order
    gi = np.arange(G.order)[:, None, None, None]
    hi = np.arange(m)[None, :, None, None]
    gj = np.arange(G.order)[None, None, :, None]
    hj = np.arange(m)[None, None, None, :]
    table = G.cayley[gi, gj] * m + H.cayley[hi, hj]
    n = G.order * m
    return from_cayley_table(table.reshape(n, n), f"{G.name}x{H.name}")


_FAMILIES = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "quaternion8": quaternion8,
    "direct_product": direct_product,
}


def builtin(name: str, *params) -> FiniteGroup:
    """``builtin("cyclic", 4)``, ``builtin("direct_product", G, H)``, ..."""
    try:
        family = _FAMILIES[name]
    except KeyError:
        raise UnsupportedParams(f"unknown group family {name!r}; expected one of {sorted(_FAMILIES)}")
    try:
        return family(*params)
    except TypeError as exc:
        raise UnsupportedParams(f"bad parameters for {name}: {exc}") from exc


_SHORT = re.compile(r"^(Z|C|D|S)(\d+)$")


def from_name(text: str) -> FiniteGroup:
    """Parse short names: ``trivial``, ``Z4``/``C4``, ``D4`` (order 8), ``S3``, ``Q8``,
    and direct products such as ``Z2xS3``."""
    text = text.strip()
    if "x" in text:
        parts = [from_name(p) for p in text.split("x")]
        G = parts[0]
        for H in parts[1:]:
            G = direct_product(G, H)
        return G
    if text.lower() == "trivial":
        return cyclic(1)
    if text.upper() == "Q8":
        return quaternion8()
    m = _SHORT.match(text)
    if not m:
        raise UnsupportedParams(f"cannot parse group name {text!r}")
    fam, k = m.group(1), int(m.group(2))
    return {"Z": cyclic, "C": cyclic, "D": dihedral, "S": symmetric}[fam](k)


# ---------------------------------------------------------------------------
# subgroups, classes, cosets

@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]
    cayley_local: np.ndarray
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g: int) -> bool:
        return g in self._index

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={self.members})"

    @cached_property
    def _index(self) -> dict[int, int]:
        return {g: i for i, g in enumerate(self.members)}

    def local_index(self, g: int) -> int:
        return self._index[g]

    @cached_property
    def local(self) -> FiniteGroup:
        """The subgroup as an abstract group on local indices ``0..|H|-1``."""
        return from_cayley_table(self.cayley_local, self.name)


def subgroup(G: FiniteGroup, members: Sequence[int], name: str = "") -> Subgroup:
    mem = tuple(sorted(set(int(g) for g in members)))
    idx = {g: i for i, g in enumerate(mem)}
    if G.identity not in idx:
        raise InputError("subgroup must contain the identity")
    local = np.empty((len(mem), len(mem)), dtype=np.int64)
    for i, a in enumerate(mem):
        if G.inv(a) not in idx:
            raise InputError(f"subgroup not closed under inverse at {a}")
        for j, b in enumerate(mem):
            ab = G.mul(a, b)
            if ab not in idx:
                raise InputError(f"subgroup not closed under product at ({a}, {b})")
            local[i, j] = idx[ab]
    local.setflags(write=False)
    return Subgroup(G, mem, local, name)


def whole_group(G: FiniteGroup) -> Subgroup:
    return subgroup(G, range(G.order), G.name)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    """Classes sorted by representative, which is the smallest index in the class."""
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for x in range(G.order):
        if seen[x]:
            continue
        members = np.unique(G.conjugation[:, x])
        seen[members] = True
        out.append(ConjugacyClass(x, tuple(int(m) for m in members)))
    return out


def class_index(G: FiniteGroup, classes: Sequence[ConjugacyClass] | None = None) -> np.ndarray:
    classes = conjugacy_classes(G) if classes is None else classes
    idx = np.empty(G.order, dtype=np.int64)
    for k, c in enumerate(classes):
        idx[list(c.members)] = k
    return idx


def centralizer(G: FiniteGroup, g: int) -> Subgroup:
    members = np.nonzero(G.cayley[:, g] == G.cayley[g, :])[0]
    H = subgroup(G, members, f"C({g})")
    class_size = np.unique(G.conjugation[:, g]).size
    assert class_size * H.order == G.order, "orbit-stabilizer violated"
    return H


def coset_decomposition(G: FiniteGroup, H: Subgroup) -> tuple[tuple[int, ...], np.ndarray]:
    """Left cosets ``gH``: representatives and ``coset_of[g]`` (position of g's coset).

    The coset ``H`` itself comes first with representative ``e``; the remaining
    cosets use their smallest element and are ordered by it.
    """
    hm = np.array(H.members)
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = [G.identity]
    coset_of[G.cayley[G.identity, hm]] = 0
    for g in range(G.order):
        if coset_of[g] >= 0:
            continue
        coset_of[G.cayley[g, hm]] = len(reps)
        reps.append(g)
    return tuple(reps), coset_of


def left_coset_section(G: FiniteGroup, H: Subgroup) -> tuple[int, ...]:
    return coset_decomposition(G, H)[0]


def generators(G: FiniteGroup) -> list[int]:
    """A small generating set, chosen greedily by element index."""
    span = {G.identity}
    gens: list[int] = []
    for g in range(G.order):
        if g in span:
            continue
        gens.append(g)
        span = _closure(G, span | {g})
    return gens


def _closure(G: FiniteGroup, elems: set[int]) -> set[int]:
    out = set(elems)
    frontier = list(out)
    while frontier:
        new = []
        for a in frontier:
            for b in list(out):
                for c in (G.mul(a, b), G.mul(b, a)):
                    if c not in out:
                        out.add(c)
                        new.append(c)
        frontier = new
    return out


# ---------------------------------------------------------------------------
# characters

@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    classes: tuple[ConjugacyClass, ...]
    values: np.ndarray  # (irreps, classes)

    @property
    def degrees(self) -> list[int]:
        e_class = self.class_of[self.group.identity]
        return [int(round(v.real)) for v in self.values[:, e_class]]

    @cached_property
    def class_of(self) -> np.ndarray:
        return class_index(self.group, self.classes)

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.classes])

    def element_values(self) -> np.ndarray:
        """Characters evaluated on every element, shape (irreps, |G|)."""
        return self.values[:, self.class_of]

    def inner_products(self) -> np.ndarray:
        w = self.class_sizes / self.group.order
        return (self.values * w) @ self.values.conj().T


def _abelian_log_characters(G: FiniteGroup) -> tuple[np.ndarray, int]:
    """All characters of an abelian group as integer exponents ``k`` with
    ``chi(g) = exp(2 pi i k(g) / m)``, ``m`` the exponent of ``G``.

    Characters are enumerated by their values on a greedy generating set, so for
    ``cyclic(n)`` row ``t`` is ``chi_t(k) = exp(2 pi i t k / n)``.
    """
    n = G.order
    m = math.lcm(*(G.element_order(g) for g in range(n)))
    gens = generators(G)
    partials: list[dict[int, int]] = [{G.identity: 0}]
    for g in gens:
        o = G.element_order(g)
        powers = [G.identity]
        for _ in range(o - 1):
            powers.append(G.mul(powers[-1], g))
        nxt = []
        for part in partials:
            for t in range(0, m, m // o):
                ext: dict[int, int] | None = {}
                for j, gj in enumerate(powers):
                    for s, ks in part.items():
                        h = G.mul(s, gj)
                        val = (ks + j * t) % m
                        if ext.setdefault(h, val) != val:
                            ext = None
                            break
                    if ext is None:
                        break
                if ext is not None:
                    nxt.append(ext)
        partials = nxt
    if len(partials) != n:
        raise MathFailure(f"found {len(partials)} characters for an abelian group of order {n}")
    logs = np.array([[p[g] for g in range(n)] for p in partials], dtype=np.int64)
    return logs, m


def _roots_of_unity(logs: np.ndarray, m: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    re, im = roots.real.copy(), roots.imag.copy()
    re[np.abs(re) < 1e-15] = 0.0
    im[np.abs(im) < 1e-15] = 0.0
    return (re + 1j * im)[logs]


def _character_sort_key(row: np.ndarray, degree: int):
    return (degree,) + tuple((-round(v.real, 6) + 0.0, -round(v.imag, 6) + 0.0) for v in row)


def character_table(G: FiniteGroup, seed: int = 0) -> CharacterTable:
    """Complete character table.

    Abelian groups get exact roots of unity. Otherwise the Burnside class-matrix
    method is used: characters are the common eigenvectors of the class
    multiplication matrices, separated with a random linear combination.
    """
    if G.order > CHARACTER_TABLE_MAX_ORDER:
        raise UnsupportedParams(f"character tables supported up to order {CHARACTER_TABLE_MAX_ORDER}")
    classes = conjugacy_classes(G)
    reps = [c.representative for c in classes]
    if G.is_abelian:
        logs, m = _abelian_log_characters(G)
        return CharacterTable(G, tuple(classes), _readonly(_roots_of_unity(logs[:, reps], m), complex))

    n, k = G.order, len(classes)
    cls = class_index(G, classes)
    sizes = np.array([len(c) for c in classes], dtype=float)
    e_class = cls[G.identity]
    # coef[r, s, t] = #{(x, y): x in C_r, y in C_s, xy = rep_t}
    coef = np.zeros((k, k, k))
    for t, z in enumerate(reps):
        x = np.arange(n)
        y = G.cayley[G.inverse[x], z]
        np.add.at(coef, (cls[x], cls[y], t), 1)

    rng = np.random.default_rng(seed)
    for _ in range(MAX_SPLIT_RETRIES):
        c = rng.normal(size=k) + 1j * rng.normal(size=k)
        M = np.einsum("r,rst->st", c, coef)
        lam, vecs = np.linalg.eig(M)
        gaps = np.abs(lam[:, None] - lam[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() <= SPLIT_TOL * max(1.0, np.abs(lam).max()):
            continue
        omega = vecs / vecs[e_class][None, :]          # central characters, columns
        norm = (np.abs(omega) ** 2 / sizes[:, None]).sum(axis=0)
        deg = np.sqrt(n / norm)
        if np.abs(deg - np.round(deg)).max() > 1e-6:
            continue
        deg = np.round(deg).astype(int)
        values = (omega * deg[None, :] / sizes[:, None]).T
        values[:, e_class] = deg
        order = sorted(range(k), key=lambda i: _character_sort_key(values[i], deg[i]))
        return CharacterTable(G, tuple(classes), _readonly(values[order], complex))
    raise ConvergenceFailure(f"class-matrix eigenvalues did not separate after {MAX_SPLIT_RETRIES} attempts")


# ---------------------------------------------------------------------------
# explicit irreducible representations

@dataclass(frozen=True, eq=False)
class GroupIrrep:
    """Unitary irrep of a group or subgroup.

    ``matrices[i]`` is the matrix of the i-th element of ``elements``; for a
    :class:`Subgroup` these are parent indices (``Subgroup.members``).
    """

    group: GroupLike
    label: int
    matrices: np.ndarray

    @property
    def degree(self) -> int:
        return self.matrices.shape[1]

    @property
    def elements(self) -> tuple[int, ...]:
        if isinstance(self.group, Subgroup):
            return self.group.members
        return tuple(range(self.group.order))

    def matrix(self, g: int) -> np.ndarray:
        if isinstance(self.group, Subgroup):
            return self.matrices[self.group.local_index(g)]
        return self.matrices[g]

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def __repr__(self) -> str:
        return f"GroupIrrep(label={self.label}, degree={self.degree}, order={len(self.matrices)})"


def irrep_errors(rep: GroupIrrep) -> dict[str, float]:
    """Max homomorphism and unitarity deviations."""
    G = rep.group.local if isinstance(rep.group, Subgroup) else rep.group
    M = rep.matrices
    prod = np.einsum("aij,bjk->abik", M, M)
    hom = np.abs(prod - M[G.cayley]).max()
    eye = np.eye(rep.degree)
    uni = np.abs(np.einsum("aij,akj->aik", M, M.conj()) - eye).max()
    return {"homomorphism": float(hom), "unitarity": float(uni)}


_IRREP_CACHE: dict[tuple[bytes, int], list[np.ndarray]] = {}


def irreps(group: GroupLike, seed: int = 0) -> list[GroupIrrep]:
    """One unitary representative per irrep class, labelled by character-table row."""
    G = group.local if isinstance(group, Subgroup) else group
    key = (G.key, seed)
    if key not in _IRREP_CACHE:
        _IRREP_CACHE[key] = _irrep_matrices(G, seed)
    return [GroupIrrep(group, label, mats) for label, mats in enumerate(_IRREP_CACHE[key])]


def _irrep_matrices(G: FiniteGroup, seed: int) -> list[np.ndarray]:
    table = character_table(G, seed)
    chars = table.element_values()
    n = G.order
    if G.is_abelian:
        out = []
        for row in chars:
            m = row.reshape(n, 1, 1).astype(complex)
            m.setflags(write=False)
            out.append(m)
        return out

    rng = np.random.default_rng(seed)
    # regular representation: L(g) e_h = e_{gh}
    L = np.zeros((n, n, n))
    g_idx, h_idx = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    L[g_idx, G.cayley, h_idx] = 1.0
    out = []
    for row, d in zip(chars, table.degrees):
        P = (d / n) * np.tensordot(row.conj(), L, axes=1)
        w, v = np.linalg.eigh((P + P.conj().T) / 2)
        Q = v[:, w > 0.5]
        if Q.shape[1] != d * d:
            raise SplittingFailure(f"isotypic component has dimension {Q.shape[1]}, expected {d * d}")
        # (L(g) Q)[k] = Q[g^-1 k]
        rho = Q.conj().T[None] @ Q[G.cayley[G.inverse]]
        W = _irreducible_block(rho, d, rng)
        mats = W.conj().T[None] @ rho @ W[None]
        if np.abs(np.trace(mats, axis1=1, axis2=2) - row).max() > 1e-8:
            raise SplittingFailure("extracted block does not reproduce its character")
        mats.setflags(write=False)
        out.append(mats)
    return out


def _irreducible_block(rho: np.ndarray, d: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal basis (columns) of one irreducible invariant subspace of dimension d.

    ``rho`` must be a unitary representation that is isotypic of degree d.
    Averaging a random Hermitian matrix over the group gives an operator in the
    commutant; its eigenspaces are invariant and we recurse into the smallest.
    """
    dim = rho.shape[1]
    basis = np.eye(dim, dtype=complex)
    retries = 0
    while basis.shape[1] > d:
        sigma = basis.conj().T[None] @ rho @ basis[None]
        k = basis.shape[1]
        A = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        A = A + A.conj().T
        H = (sigma @ A[None] @ sigma.conj().transpose(0, 2, 1)).sum(axis=0)
        w, v = np.linalg.eigh((H + H.conj().T) / 2)
        tol = SPLIT_TOL * max(1.0, np.abs(w).max())
        clusters = np.split(np.arange(k), np.nonzero(np.diff(w) > tol)[0] + 1)
        sizes = [len(c) for c in clusters]
        if len(clusters) == 1 or any(s % d for s in sizes):
            retries += 1
            if retries > MAX_SPLIT_RETRIES:
                raise SplittingFailure(f"invariant subspace splitting failed after {MAX_SPLIT_RETRIES} retries")
            continue
        smallest = clusters[int(np.argmin(sizes))]
        basis = basis @ v[:, smallest]
    return basis
