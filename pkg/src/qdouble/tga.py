"""Transformation group algebras of a finite group acting on a finite set.

An element is a complex function ``F(xi, g)`` on ``X x G``, stored as an
``(|X|, |G|)`` array. Measures are counting measures, so the modular function
and the Radon-Nikodym factors are identically 1 and drop out. Product, star and
unit are

    (F1 * F2)(xi, y) = sum_z F1(xi, z) F2(z^-1 xi, z^-1 y)
    F*(xi, y)        = conj F(y^-1 xi, y^-1)
    1(xi, y)         = [y = e]

The quantum double of ``G`` is the case ``X = G`` with the conjugation action.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ActionMismatch, InputError
from .groups import (
    FiniteGroup,
    Subgroup,
    coset_decomposition,
    dihedral,
    subgroup,
    symmetric,
    symmetric_permutations,
)


@dataclass(frozen=True, eq=False)
class GAction:
    """Left action ``act[g, xi] = g . xi`` of ``group`` on ``range(set_size)``."""

    group: FiniteGroup
    act: np.ndarray
    name: str = ""

    @property
    def set_size(self) -> int:
        return self.act.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.set_size, self.group.order

    def __repr__(self) -> str:
        return f"GAction(name={self.name!r}, group={self.group.name!r}, set_size={self.set_size})"

    @cached_property
    def key(self) -> bytes:
        return self.group.key + self.act.tobytes()

    def same_as(self, other: "GAction") -> bool:
        return self is other or (
            self.group.order == other.group.order
            and np.array_equal(self.group.cayley, other.group.cayley)
            and np.array_equal(self.act, other.act)
        )

    @cached_property
    def is_conjugation(self) -> bool:
        G = self.group
        return self.set_size == G.order and np.array_equal(self.act, G.conjugation)


def make_action(G: FiniteGroup, table, name: str = "") -> GAction:
    """Validate an action table of shape ``(|G|, |X|)``."""
    act = np.asarray(table)
    if act.ndim != 2 or act.shape[0] != G.order or act.shape[1] == 0:
        raise InputError(f"action table must have shape ({G.order}, |X|), got {act.shape}")
    act = act.astype(np.int64)
    m = act.shape[1]
    if act.min() < 0 or act.max() >= m:
        raise InputError(f"action table entries must lie in [0, {m})")
    if not np.array_equal(act[G.identity], np.arange(m)):
        raise InputError("identity does not act trivially")
    # (gh).xi == g.(h.xi)
    lhs = act[G.cayley]
    rhs = act[np.arange(G.order)[:, None, None], act[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        g, h, xi = map(int, bad[0])
        raise InputError(f"not an action: (g*h).xi != g.(h.xi) for g={g}, h={h}, xi={xi}")
    act.setflags(write=False)
    return GAction(G, act, name)


def conjugation_action(G: FiniteGroup) -> GAction:
    return make_action(G, G.conjugation, f"conj({G.name})")


def regular_action(G: FiniteGroup) -> GAction:
    return make_action(G, G.cayley, f"regular({G.name})")


def coset_action(G: FiniteGroup, H: Subgroup) -> GAction:
    """Action on left cosets ``G/H``, cosets numbered as in :func:`coset_decomposition`."""
    reps, coset_of = coset_decomposition(G, H)
    table = coset_of[G.cayley[:, list(reps)]]
    return make_action(G, table, f"{G.name}/H")


def natural_action(G: FiniteGroup) -> GAction:
    """Permutation action of a built-in symmetric or dihedral group on points/vertices."""
    name = G.name
    if name.startswith("S") and name[1:].isdigit():
        n = int(name[1:])
        if np.array_equal(G.cayley, symmetric(n).cayley):
            perms = np.array(symmetric_permutations(n), dtype=np.int64).reshape(-1, n)
            return make_action(G, perms, f"{name} on {n} points")
    if name.startswith("D") and name[1:].isdigit():
        n = int(name[1:])
        if np.array_equal(G.cayley, dihedral(n).cayley):
            table = np.empty((2 * n, n), dtype=np.int64)
            for g in range(2 * n):
                k, f = g % n, g // n
                for i in range(n):
                    # r^k s^f maps vertex i to k + (-1)^f i
                    table[g, i] = (k + (i if f == 0 else -i)) % n
            return make_action(G, table, f"{name} on {n} vertices")
    raise InputError(f"no natural action known for group {name!r}")


# ---------------------------------------------------------------------------
# orbits

@dataclass(frozen=True, eq=False)
class Orbit:
    """A G-orbit with base point, stabilizer and a section of ``G -> orbit``.

    ``members[i] = section[i] . base_point``; ``section[0]`` is the identity and
    ``members[0]`` the base point (the smallest index in the orbit).
    """

    action: GAction
    index: int
    members: tuple[int, ...]
    stabilizer: Subgroup
    section: tuple[int, ...]

    @property
    def base_point(self) -> int:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def position(self) -> dict[int, int]:
        return {xi: i for i, xi in enumerate(self.members)}

    def section_of(self, xi: int) -> int:
        return self.section[self.position[xi]]

    def __repr__(self) -> str:
        return f"Orbit(base_point={self.base_point}, size={len(self)}, stabilizer_order={self.stabilizer.order})"


def stabilizer(action: GAction, xi: int) -> Subgroup:
    members = np.nonzero(action.act[:, xi] == xi)[0]
    return subgroup(action.group, members, f"Stab({xi})")


def orbits(action: GAction) -> list[Orbit]:
    """Orbits ordered by base point."""
    seen = np.zeros(action.set_size, dtype=bool)
    out = []
    for xi in range(action.set_size):
        if seen[xi]:
            continue
        H = stabilizer(action, xi)
        reps, _ = coset_decomposition(action.group, H)
        members = tuple(int(action.act[s, xi]) for s in reps)
        seen[list(members)] = True
        assert len(members) * H.order == action.group.order
        out.append(Orbit(action, len(out), members, H, reps))
    return out


def orbit_of(action: GAction, xi: int) -> Orbit:
    for orb in orbits(action):
        if xi in orb.position:
            return orb
    raise InputError(f"point {xi} outside the set")


# ---------------------------------------------------------------------------
# algebra elements

@dataclass(frozen=True, eq=False)
class AlgElement:
    action: GAction
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != self.action.shape:
            raise InputError(f"coefficient array must have shape {self.action.shape}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __repr__(self) -> str:
        return f"AlgElement(action={self.action.name!r}, nnz={np.count_nonzero(self.coeffs)})"

    def _check(self, other: "AlgElement") -> None:
        if not self.action.same_as(other.action):
            raise ActionMismatch("elements belong to different algebras")

    def __add__(self, other: "AlgElement") -> "AlgElement":
        self._check(other)
        return AlgElement(self.action, self.coeffs + other.coeffs)

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        self._check(other)
        return AlgElement(self.action, self.coeffs - other.coeffs)

    def __neg__(self) -> "AlgElement":
        return AlgElement(self.action, -self.coeffs)

    def __mul__(self, scalar) -> "AlgElement":
        if isinstance(scalar, AlgElement):
            return multiply(self, scalar)
        return AlgElement(self.action, self.coeffs * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "AlgElement") -> "AlgElement":
        return multiply(self, other)

    def star(self) -> "AlgElement":
        return star(self)

    def norm1(self) -> float:
        return norm1(self)


def basis_element(action: GAction, xi: int, g: int) -> AlgElement:
    """``delta_xi (x) delta_g``."""
    c = np.zeros(action.shape, dtype=complex)
    c[xi, g] = 1.0
    return AlgElement(action, c)


def zero(action: GAction) -> AlgElement:
    return AlgElement(action, np.zeros(action.shape))


def unit(action: GAction) -> AlgElement:
    c = np.zeros(action.shape, dtype=complex)
    c[:, action.group.identity] = 1.0
    return AlgElement(action, c)


def group_element(action: GAction, g: int) -> AlgElement:
    """``u_g = sum_xi delta_xi (x) delta_g``, the image of ``g`` in the multiplier algebra."""
    c = np.zeros(action.shape, dtype=complex)
    c[:, g] = 1.0
    return AlgElement(action, c)


def point_projection(action: GAction, xi: int) -> AlgElement:
    """``delta_xi (x) delta_e``."""
    return basis_element(action, xi, action.group.identity)


def random_element(action: GAction, rng: np.random.Generator, density: float = 1.0) -> AlgElement:
    c = rng.normal(size=action.shape) + 1j * rng.normal(size=action.shape)
    if density < 1.0:
        c = c * (rng.random(action.shape) < density)
    return AlgElement(action, c)


def multiply_coeffs(a: np.ndarray, b: np.ndarray, action: GAction) -> np.ndarray:
    """Product on raw coefficient arrays; leading batch axes broadcast."""
    G = action.group
    act = action.act
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=complex)
    for z in range(G.order):
        zi = G.inverse[z]
        rows = act[zi]            # xi -> z^-1 xi
        cols = G.cayley[zi]       # y -> z^-1 y
        out += a[..., :, z, None] * b[..., rows[:, None], cols[None, :]]
    return out


def multiply(F1: AlgElement, F2: AlgElement) -> AlgElement:
    F1._check(F2)
    return AlgElement(F1.action, multiply_coeffs(F1.coeffs, F2.coeffs, F1.action))


def star_coeffs(a: np.ndarray, action: GAction) -> np.ndarray:
    G = action.group
    inv = G.inverse
    rows = action.act[inv].T      # (xi, y) -> y^-1 xi
    return np.conj(a[..., rows, inv[None, :]])


def star(F: AlgElement) -> AlgElement:
    return AlgElement(F.action, star_coeffs(F.coeffs, F.action))


def norm1(F: AlgElement) -> float:
    """``sum_z max_xi |F(xi, z)|``; submultiplicative and bounds every *-representation."""
    return float(np.abs(F.coeffs).max(axis=0).sum())


def inner_product(F1: AlgElement, F2: AlgElement) -> complex:
    """``<F1, F2> = sum F1 conj(F2)``, linear in the first slot."""
    F1._check(F2)
    return complex(np.sum(F1.coeffs * np.conj(F2.coeffs)))


def basis_product(action: GAction, left: tuple[int, int], right: tuple[int, int]) -> tuple[int, int] | None:
    """Product of basis elements: ``(xi, g) * (eta, h) = (xi, gh)`` if ``eta = g^-1 xi``, else 0."""
    xi, g = left
    eta, h = right
    G = action.group
    if action.act[G.inverse[g], xi] != eta:
        return None
    return xi, G.mul(g, h)


def basis_star(action: GAction, xi: int, g: int) -> tuple[int, int]:
    """``(delta_xi (x) delta_g)* = delta_{g^-1 xi} (x) delta_{g^-1}``."""
    gi = action.group.inv(g)
    return int(action.act[gi, xi]), gi


def generating_elements(action: GAction) -> list[AlgElement]:
    """Elements whose images generate the image of every *-representation.

    The first is ``sum_xi (xi + 1) delta_xi (x) delta_e``; its spectral projections
    are the ``delta_xi (x) delta_e``. The rest are ``u_g`` for a generating set of G.
    Since ``delta_xi (x) delta_g = (delta_xi (x) delta_e) u_g``, these span the algebra
    under products.
    """
    from .groups import generators

    c = np.zeros(action.shape, dtype=complex)
    c[:, action.group.identity] = np.arange(1, action.set_size + 1)
    out = [AlgElement(action, c)]
    out.extend(group_element(action, g) for g in generators(action.group))
    return out


def based_ring_mismatches(action: GAction) -> dict[str, int]:
    """Compare :func:`multiply` and :func:`star` with the basis rules on every basis pair.

    Returns the number of mismatching products and stars (both 0 when correct).
    """
    m, n = action.shape
    N = m * n
    eye = np.eye(N).reshape(N, m, n)
    bad_prod = 0
    for k in range(N):
        left = divmod(k, n)
        got = multiply_coeffs(eye[k][None], eye, action)
        expect = np.zeros((N, m, n))
        for j in range(N):
            r = basis_product(action, left, divmod(j, n))
            if r is not None:
                expect[j][r] = 1.0
        bad_prod += int(np.count_nonzero(np.any(got != expect, axis=(1, 2))))
    got = star_coeffs(eye, action)
    expect = np.zeros((N, m, n))
    for j in range(N):
        expect[j][basis_star(action, *divmod(j, n))] = 1.0
    bad_star = int(np.count_nonzero(np.any(got != expect, axis=(1, 2))))
    return {"product": bad_prod, "star": bad_star}
