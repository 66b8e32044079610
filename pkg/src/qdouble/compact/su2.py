"""Truncated representations of the quantum double of SU(2).

Conventions
-----------
``U = [[alpha, beta], [-conj(beta), conj(alpha)]]``. Euler angles are z-y-z,
``U = R_z(phi) R_y(theta) R_z(psi)`` with ``R_z(t) = diag(e^{-it/2}, e^{it/2})``,
so ``alpha = e^{-i(phi+psi)/2} cos(theta/2)`` and
``beta = -e^{-i(phi-psi)/2} sin(theta/2)``; ``phi`` in [0, 2pi), ``theta`` in
[0, pi], ``psi`` in [0, 4pi) covers SU(2) once.

Spin-l matrices act on homogeneous polynomials of degree 2l,
``e_m = x^{l+m} y^{l-m} / sqrt((l+m)! (l-m)!)`` with rows and columns ordered
``m = l, l-1, ..., -l`` and ``(pi(U) f)(x, y) = f((x, y) U)``. Then the spin-1/2
matrix is U itself and ``pi_l(g_theta) = diag(e^{2 i m theta})``.

Spins are passed as ints, floats or Fractions; internally ``two_l = 2l``.
Quadrature orders are in spin units: order K integrates every product of
matrix coefficients of total spin at most K exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import BandLimitExceeded, InputError

SPIN_TOL = 1e-12


def two_spin(l) -> int:
    """``2l`` as an int, validating that l is a non-negative half-integer."""
    t = 2 * Fraction(l).limit_denominator(1000) if not isinstance(l, float) else 2 * l
    r = int(round(float(t)))
    if abs(float(t) - r) > SPIN_TOL or r < 0:
        raise InputError(f"spin must be a non-negative half-integer, got {l}")
    return r


def spin_label(two_l: int) -> str:
    return str(two_l // 2) if two_l % 2 == 0 else f"{two_l}/2"


# ---------------------------------------------------------------------------
# group elements

@dataclass(frozen=True)
class SU2Element:
    """Unit quaternion ``(Re alpha, Im alpha, Re beta, Im beta)``."""

    a_re: float
    a_im: float
    b_re: float
    b_im: float

    def __post_init__(self):
        norm = math.sqrt(self.a_re ** 2 + self.a_im ** 2 + self.b_re ** 2 + self.b_im ** 2)
        if abs(norm - 1.0) > 1e-9:
            raise InputError(f"SU(2) element must have unit norm, got {norm}")
        for name, v in zip(("a_re", "a_im", "b_re", "b_im"), (self.a_re, self.a_im, self.b_re, self.b_im)):
            object.__setattr__(self, name, float(v) / norm)

    @property
    def alpha(self) -> complex:
        return complex(self.a_re, self.a_im)

    @property
    def beta(self) -> complex:
        return complex(self.b_re, self.b_im)

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]])

    @classmethod
    def from_ab(cls, alpha: complex, beta: complex) -> "SU2Element":
        return cls(alpha.real, alpha.imag, beta.real, beta.imag)

    @classmethod
    def from_matrix(cls, U) -> "SU2Element":
        U = np.asarray(U, dtype=complex)
        if U.shape != (2, 2) or np.abs(U @ U.conj().T - np.eye(2)).max() > 1e-9 or abs(np.linalg.det(U) - 1) > 1e-9:
            raise InputError("matrix is not in SU(2)")
        return cls.from_ab(complex(U[0, 0]), complex(U[0, 1]))

    @classmethod
    def from_euler(cls, phi: float, theta: float, psi: float) -> "SU2Element":
        a = np.exp(-0.5j * (phi + psi)) * math.cos(theta / 2)
        b = -np.exp(-0.5j * (phi - psi)) * math.sin(theta / 2)
        return cls.from_ab(complex(a), complex(b))

    def euler(self) -> tuple[float, float, float]:
        """``(phi, theta, psi)`` with ``phi`` in [0, 2pi), ``psi`` in [0, 4pi)."""
        a, b = self.alpha, self.beta
        theta = 2 * math.atan2(abs(b), abs(a))
        arg_a = math.atan2(a.imag, a.real) if abs(a) > 1e-15 else 0.0
        arg_b = math.atan2(-b.imag, -b.real) if abs(b) > 1e-15 else 0.0
        if abs(a) <= 1e-15:
            arg_a = -arg_b   # only phi - psi is fixed; take psi = 0
        if abs(b) <= 1e-15:
            arg_b = arg_a    # only phi + psi is fixed; take psi = 0
        phi = -arg_a - arg_b
        psi = -arg_a + arg_b
        # shifting both angles by 2pi leaves U unchanged
        k = math.floor(phi / (2 * math.pi))
        phi -= 2 * math.pi * k
        psi = (psi - 2 * math.pi * k) % (4 * math.pi)
        return phi, theta, psi

    def __mul__(self, other: "SU2Element") -> "SU2Element":
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return SU2Element.from_ab(a1 * a2 - b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def inverse(self) -> "SU2Element":
        return SU2Element.from_ab(self.alpha.conjugate(), -self.beta)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SU2Element":
        """Haar-distributed element."""
        v = rng.normal(size=4)
        return cls(*(v / np.linalg.norm(v)))

    @classmethod
    def identity(cls) -> "SU2Element":
        return cls(1.0, 0.0, 0.0, 0.0)


def g_theta(theta: float) -> SU2Element:
    """``diag(e^{i theta}, e^{-i theta})``."""
    return SU2Element(math.cos(theta), math.sin(theta), 0.0, 0.0)


def _mul_ab(a1, b1, a2, b2):
    return a1 * a2 - b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


# ---------------------------------------------------------------------------
# Wigner matrices

def wigner_ab(two_l: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Spin-l matrices for a batch of elements given by ``alpha``, ``beta`` arrays; shape (N, 2l+1, 2l+1)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c, d = -np.conj(b), np.conj(a)
    j2 = two_l
    dim = j2 + 1

    def powers(z):
        p = [np.ones_like(z)]
        for _ in range(j2):
            p.append(p[-1] * z)
        return p

    pa, pb, pc, pd = powers(a), powers(b), powers(c), powers(d)
    fact = [math.factorial(k) for k in range(j2 + 1)]
    out = np.zeros(a.shape + (dim, dim), dtype=complex)
    for p in range(dim):          # column: e_m with l + m = j2 - p
        up, down = j2 - p, p
        for k in range(up + 1):
            for t in range(down + 1):
                K = k + t         # power of x in the image
                q = j2 - K
                coef = math.comb(up, k) * math.comb(down, t) * math.sqrt(
                    fact[K] * fact[j2 - K] / (fact[up] * fact[down]))
                out[..., q, p] += coef * pa[k] * pc[up - k] * pb[t] * pd[down - t]
    return out


def wigner(l, g: SU2Element) -> np.ndarray:
    """The unitary spin-l matrix of ``g``."""
    return wigner_ab(two_spin(l), np.array(g.alpha), np.array(g.beta))


def character_g_theta(l, theta: float) -> float:
    """``sin((2l+1) theta) / sin(theta)``, the trace of ``pi_l(g_theta)``."""
    t = two_spin(l)
    if abs(math.sin(theta)) < 1e-300:
        return float((t + 1) * (1 if t % 2 == 0 or math.cos(theta) > 0 else -1))
    return math.sin((t + 1) * theta) / math.sin(theta)


# ---------------------------------------------------------------------------
# Haar quadrature

@dataclass(frozen=True, eq=False)
class HaarQuadrature:
    """Product rule: trapezoid in phi and psi, Gauss-Legendre in cos(theta)."""

    order: int
    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    weights: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def band_limit(self) -> int:
        """Largest ``2l`` for which every matrix coefficient of ``pi_l`` integrates exactly."""
        return 2 * self.order

    def __len__(self) -> int:
        return self.weights.size

    @property
    def nodes(self) -> list[SU2Element]:
        return [SU2Element.from_ab(complex(a), complex(b)) for a, b in zip(self.alpha, self.beta)]

    def wigner(self, two_l: int) -> np.ndarray:
        """Spin-l matrices at all nodes, cached."""
        if two_l not in self._cache:
            self._cache[two_l] = wigner_ab(two_l, self.alpha, self.beta)
        return self._cache[two_l]

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Sum ``w_i values[i, ...]`` over nodes in a fixed order."""
        return np.tensordot(self.weights, values, axes=1)


def haar_quadrature(order: int) -> HaarQuadrature:
    if order < 1:
        raise InputError("quadrature order must be at least 1")
    n_phi = order + 1
    n_psi = 2 * order + 1
    n_theta = (order + 2) // 2
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    psi = 4 * np.pi * np.arange(n_psi) / n_psi
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    P, T, S = np.meshgrid(phi, theta, psi, indexing="ij")
    W = np.einsum("i,j,k->ijk", np.full(n_phi, 1 / n_phi), wx / 2, np.full(n_psi, 1 / n_psi))
    P, T, S, W = P.ravel(), T.ravel(), S.ravel(), W.ravel()
    alpha = np.exp(-0.5j * (P + S)) * np.cos(T / 2)
    beta = -np.exp(-0.5j * (P - S)) * np.sin(T / 2)
    return HaarQuadrature(order, P, T, S, W, alpha, beta)


# ---------------------------------------------------------------------------
# band-limited functions on SU(2) x SU(2)

@dataclass(frozen=True)
class Factor:
    """A matrix of Wigner coefficients ``D^l(arg)`` (conjugated if ``conj``); ``arg`` is 'a' or 'b'."""

    arg: str
    two_l: int
    conj: bool = False


@dataclass(frozen=True, eq=False)
class Term:
    """``sum_idx coeff[idx] prod_f D_f[idx_f]``; ``coeff`` has two axes (row, column) per factor."""

    factors: tuple[Factor, ...]
    coeff: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeff, dtype=complex)
        shape = tuple(s for f in self.factors for s in (f.two_l + 1, f.two_l + 1))
        if c.shape != shape:
            raise InputError(f"coefficient shape {c.shape} does not match factors {shape}")
        object.__setattr__(self, "coeff", c)

    def band(self, arg: str) -> int:
        """Total ``2l`` of the factors in argument ``arg``."""
        return sum(f.two_l for f in self.factors if f.arg == arg)


def _factor_values(f: Factor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    D = wigner_ab(f.two_l, a, b)
    return D.conj() if f.conj else D


def _product_tensor(mats: Sequence[np.ndarray], n_points: int) -> np.ndarray:
    """Outer product over factors, batched over the leading point axis."""
    out = np.ones((n_points,), dtype=complex)
    for M in mats:
        out = out.reshape(out.shape + (1, 1)) * M.reshape((n_points,) + (1,) * (out.ndim - 1) + M.shape[1:])
    return out


@dataclass(frozen=True, eq=False)
class BandLimitedF:
    """A finite sum of :class:`Term`; an element of ``C(SU(2) x SU(2))``."""

    terms: tuple[Term, ...]

    @property
    def band(self) -> tuple[float, float]:
        """Largest total spins ``(L1, L2)`` in the first and second argument."""
        a, b = self.band_two
        return a / 2, b / 2

    @property
    def band_two(self) -> tuple[int, int]:
        return (max((t.band("a") for t in self.terms), default=0),
                max((t.band("b") for t in self.terms), default=0))

    def __add__(self, other: "BandLimitedF") -> "BandLimitedF":
        return BandLimitedF(self.terms + other.terms)

    def __mul__(self, scalar) -> "BandLimitedF":
        return BandLimitedF(tuple(Term(t.factors, t.coeff * scalar) for t in self.terms))

    __rmul__ = __mul__

    def __sub__(self, other: "BandLimitedF") -> "BandLimitedF":
        return self + other * (-1)

    def evaluate_batch(self, xa, xb, ya, yb) -> np.ndarray:
        """Values at points ``(x_i, y_i)`` given by alpha/beta arrays."""
        xa, xb, ya, yb = (np.atleast_1d(np.asarray(v, dtype=complex)) for v in (xa, xb, ya, yb))
        n = xa.shape[0]
        total = np.zeros(n, dtype=complex)
        for t in self.terms:
            mats = [_factor_values(f, xa, xb) if f.arg == "a" else _factor_values(f, ya, yb) for f in t.factors]
            P = _product_tensor(mats, n)
            total += np.tensordot(P, t.coeff, axes=t.coeff.ndim) if t.coeff.ndim else P * t.coeff
        return total

    def __call__(self, x: SU2Element, y: SU2Element) -> complex:
        return complex(self.evaluate_batch(x.alpha, x.beta, y.alpha, y.beta)[0])

    def star(self) -> "BandLimitedF":
        return star(self)


def zero_function() -> BandLimitedF:
    return BandLimitedF(())


def character_function(l, arg: str = "b", conj: bool = True) -> BandLimitedF:
    """``conj(chi_l)`` (or ``chi_l``) of one argument."""
    t = two_spin(l)
    return BandLimitedF((Term((Factor(arg, t, conj),), np.eye(t + 1)),))


def random_band_limited(rng: np.random.Generator, band_a, band_b) -> BandLimitedF:
    """Random F with one term for every pair of spins ``(la, lb)``, ``la <= band_a``, ``lb <= band_b``
    (integer and half-integer alike), random conjugation flags and complex Gaussian coefficients."""
    ta, tb = two_spin(band_a), two_spin(band_b)
    out = []
    for la in range(ta + 1):
        for lb in range(tb + 1):
            facs = (Factor("a", la, bool(rng.integers(0, 2))), Factor("b", lb, bool(rng.integers(0, 2))))
            shape = (la + 1, la + 1, lb + 1, lb + 1)
            c = (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(np.prod(shape))
            out.append(Term(facs, c))
    return BandLimitedF(tuple(out))


def star(F: BandLimitedF) -> BandLimitedF:
    """``F*(x, y) = conj F(y^-1 x y, y^-1)``, expanded exactly.

    An a-factor ``D^j_{pq}(y^-1 x y)`` becomes ``sum_{u,v} conj D^j_{up}(y) D^j_{uv}(x) D^j_{vq}(y)``
    and a b-factor ``D^J_{rs}(y^-1)`` becomes ``conj D^J_{sr}(y)``; then everything is conjugated.
    """
    out = []
    for t in F.terms:
        factors: list[Factor] = []
        # einsum bookkeeping: integer labels for coefficient axes
        next_label = [0]

        def new():
            next_label[0] += 1
            return next_label[0] - 1

        in_labels = []
        out_labels = []
        extra = []   # identity tensors tying repeated indices
        for f in t.factors:
            p, q = new(), new()
            in_labels += [p, q]
            c = f.conj
            if f.arg == "a":
                u, v, u2, v2 = new(), new(), new(), new()
                factors += [Factor("b", f.two_l, c), Factor("a", f.two_l, not c), Factor("b", f.two_l, not c)]
                out_labels += [u, p, u2, v, v2, q]
                eye = np.eye(f.two_l + 1)
                extra += [(eye, [u, u2]), (eye, [v, v2])]
            else:
                factors.append(Factor("b", f.two_l, c))
                out_labels += [q, p]
        args = [np.conj(t.coeff), in_labels]
        for M, lab in extra:
            args += [M, lab]
        coeff = np.einsum(*args, out_labels)
        out.append(Term(tuple(factors), coeff))
    return BandLimitedF(tuple(out))


def convolution_order(F1: BandLimitedF, F2: BandLimitedF) -> int:
    """Quadrature order (spin units) at which :func:`convolve` is exact."""
    return max((t1.band("b") + 2 * t2.band("a") + t2.band("b") for t1 in F1.terms for t2 in F2.terms),
               default=0) // 2 + 1


def convolve(F1: BandLimitedF, F2: BandLimitedF, quad: HaarQuadrature) -> BandLimitedF:
    """``(F1 * F2)(x, y) = int F1(x, z) F2(z^-1 x z, z^-1 y) dz`` with the z-integral done by quadrature.

    Expanding ``D(z^-1 x z) = D(z)^dagger D(x) D(z)`` and ``D(z^-1 y) = D(z)^dagger D(y)``
    leaves a finite integral over products of z-coefficients.
    """
    need = convolution_order(F1, F2)
    if quad.order < need:
        raise BandLimitExceeded(f"convolution needs quadrature order {need}, got {quad.order}")
    out = []
    for t1 in F1.terms:
        for t2 in F2.terms:
            out.append(_convolve_terms(t1, t2, quad))
    return BandLimitedF(tuple(out))


def _node_contract(coeff: np.ndarray, labels: list[int], z_factors, quad: HaarQuadrature, node: int):
    """``X[node, rest] = sum coeff[labels] prod_f D_f(node)[...]``, one factor at a time.

    A label is summed as soon as no later factor uses it and it is not a coefficient-only label.
    Returns the array and its labels (node first)."""
    X, cur = coeff, list(labels)
    batched = False
    for k, (f, lab) in enumerate(z_factors):
        D = quad.wigner(f.two_l)
        D = D.conj() if f.conj else D
        later = {l for _, lb in z_factors[k + 1:] for l in lb}
        ops_labels = ([node] if batched else []) + cur
        merged = [l for l in ops_labels if l != node] + [l for l in lab if l not in cur]
        out = [node] + [l for l in merged if l not in lab or l in later or l not in labels]
        X = np.einsum(X, ops_labels, D, [node] + lab, out)
        cur, batched = out[1:], True
    if not batched:
        X = np.broadcast_to(X, (len(quad),) + X.shape)
    return X, cur


def _convolve_terms(t1: Term, t2: Term, quad: HaarQuadrature) -> Term:
    counter = iter(range(10_000))
    lab1 = [next(counter) for _ in range(t1.coeff.ndim)]
    lab2 = [next(counter) for _ in range(t2.coeff.ndim)]
    z1: list[tuple[Factor, list[int]]] = []
    z2: list[tuple[Factor, list[int]]] = []
    new_factors: list[Factor] = []
    new_labels: list[int] = []
    for i, f in enumerate(t1.factors):
        r, c = lab1[2 * i], lab1[2 * i + 1]
        if f.arg == "a":
            new_factors.append(f)
            new_labels += [r, c]
        else:
            z1.append((f, [r, c]))
    for i, f in enumerate(t2.factors):
        p, q = lab2[2 * i], lab2[2 * i + 1]
        cj = f.conj
        if f.arg == "a":
            u, v = next(counter), next(counter)
            z2.append((Factor("b", f.two_l, not cj), [u, p]))
            z2.append((Factor("b", f.two_l, cj), [v, q]))
            new_factors.append(Factor("a", f.two_l, cj))
            new_labels += [u, v]
        else:
            t = next(counter)
            z2.append((Factor("b", f.two_l, not cj), [t, p]))
            new_factors.append(Factor("b", f.two_l, cj))
            new_labels += [t, q]
    node = next(counter)
    X1, c1 = _node_contract(t1.coeff, lab1, z1, quad, node)
    X2, c2 = _node_contract(t2.coeff, lab2, z2, quad, node)
    X1 = X1 * quad.weights.reshape((-1,) + (1,) * (X1.ndim - 1))
    coeff = np.tensordot(X1, X2, axes=([0], [0]))
    coeff = np.transpose(coeff, [(c1 + c2).index(l) for l in new_labels])
    return Term(tuple(new_factors), coeff)


# ---------------------------------------------------------------------------
# carriers and the representations

@dataclass(frozen=True, eq=False)
class TruncatedCarrier:
    """Orthonormal functions ``sqrt(2l+1) D^l_{m, -n/2}`` with ``|n|/2 <= l <= L``.

    Each satisfies ``phi(g g_t) = e^{-i n t} phi(g)``.
    """

    n: int
    two_L: int
    basis: tuple[tuple[int, int], ...]   # (2l, row index of m)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def L(self) -> float:
        return self.two_L / 2

    @property
    def spins(self) -> list[int]:
        return sorted({t for t, _ in self.basis})

    def column(self, two_l: int) -> int:
        """Index of ``m = -n/2`` in the ordering ``m = l, ..., -l``."""
        return (two_l + self.n) // 2

    def values_ab(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Basis function values at points, shape (N, dimension)."""
        out = np.zeros((np.size(a), self.dimension), dtype=complex)
        cache = {}
        for k, (t, row) in enumerate(self.basis):
            if t not in cache:
                cache[t] = wigner_ab(t, a, b)
            out[:, k] = math.sqrt(t + 1) * cache[t][:, row, self.column(t)]
        return out

    def __call__(self, g: SU2Element) -> np.ndarray:
        return self.values_ab(np.array([g.alpha]), np.array([g.beta]))[0]


def carrier(n: int, L) -> TruncatedCarrier:
    two_L = two_spin(L)
    if two_L < abs(n):
        raise InputError(f"cutoff L={L} is below |n|/2 = {abs(n) / 2}")
    basis = []
    for t in range(abs(n), two_L + 1, 2):
        basis += [(t, r) for r in range(t + 1)]
    return TruncatedCarrier(n, two_L, tuple(basis))


@dataclass
class TauResult:
    matrix: np.ndarray
    leakage: float
    carrier_in: TruncatedCarrier
    carrier_out: TruncatedCarrier
    required_order: int


def tau_order(F: BandLimitedF, two_L_in: int, two_L_out: int) -> int:
    """Quadrature order (spin units) at which :func:`tau_theta_n` is exact, leakage included."""
    a, b = F.band_two
    need_two = max(b + two_L_in,                   # z integral
                   two_L_out + 2 * a + two_L_in,   # matrix entries in x
                   2 * (two_L_in + 2 * a))         # norm of the full image
    return (need_two + 1) // 2


def tau_theta_n(F: BandLimitedF, theta: float, n: int, carrier_in: TruncatedCarrier, quad: HaarQuadrature,
                L_out=None) -> TauResult:
    """Matrix of ``(tau(F) phi)(x) = int F(x g_theta x^-1, z) phi(z^-1 x) dz`` from the
    ``L_in`` truncation into the ``L_out`` truncation (default ``L_in + 2 L1``),
    plus the norm of the part of the image beyond ``L_out``."""
    if carrier_in.n != n:
        raise InputError("carrier weight does not match n")
    if not 0 < theta < math.pi:
        raise InputError("theta must lie strictly between 0 and pi")
    a_two, _ = F.band_two
    two_out = carrier_in.two_L + 2 * a_two if L_out is None else two_spin(L_out)
    c_out = carrier(n, two_out / 2)
    need = tau_order(F, carrier_in.two_L, c_out.two_L)
    if quad.order < need:
        raise BandLimitExceeded(f"tau needs quadrature order {need}, got {quad.order}")

    N = len(quad)
    xa, xb = quad.alpha, quad.beta
    g = g_theta(theta)
    # y = x g x^-1 at every node
    ya, yb = _mul_ab(*_mul_ab(xa, xb, g.alpha, g.beta), np.conj(xa), -xb)
    image = np.zeros((N, carrier_in.dimension), dtype=complex)
    for t in F.terms:
        a_f = [f for f in t.factors if f.arg == "a"]
        b_f = [f for f in t.factors if f.arg == "b"]
        a_axes = [ax for i, f in enumerate(t.factors) if f.arg == "a" for ax in (2 * i, 2 * i + 1)]
        b_axes = [ax for i, f in enumerate(t.factors) if f.arg == "b" for ax in (2 * i, 2 * i + 1)]
        C = np.transpose(t.coeff, a_axes + b_axes)
        A = _product_tensor([_factor_values(f, ya, yb) for f in a_f], N)
        Bz = _product_tensor([quad.wigner(f.two_l).conj() if f.conj else quad.wigner(f.two_l) for f in b_f], N)
        Bw = Bz * quad.weights.reshape((N,) + (1,) * (Bz.ndim - 1))
        n_a = A.ndim - 1
        # coefficient contracted against the a-values: (N, b-axes)
        Ab = np.tensordot(A, C, axes=(list(range(1, n_a + 1)), list(range(n_a)))) if n_a else \
            np.broadcast_to(C, (N,) + C.shape)
        for two_l in carrier_in.spins:
            Dz = quad.wigner(two_l)
            # M[b, k, m'] = sum_z w B(z)[b] conj D^l_{k m'}(z)
            M = np.tensordot(Bw, Dz.conj(), axes=([0], [0]))
            n_b = Bw.ndim - 1
            V = np.tensordot(Ab, M, axes=(list(range(1, n_b + 1)), list(range(n_b)))) if n_b else Ab[..., None, None] * M
            col = carrier_in.column(two_l)
            Dx = quad.wigner(two_l)[:, :, col]                       # D^l_{k, -n/2}(x)
            vals = math.sqrt(two_l + 1) * np.einsum("xkm,xk->xm", V, Dx)
            for k, (tl, row) in enumerate(carrier_in.basis):
                if tl == two_l:
                    image[:, k] += vals[:, row]
    out_vals = c_out.values_ab(xa, xb)
    matrix = (out_vals.conj() * quad.weights[:, None]).T @ image
    residual = image - out_vals @ matrix
    leak = np.sqrt(np.real(quad.weights @ (np.abs(residual) ** 2)))
    return TauResult(matrix, float(leak.max()) if leak.size else 0.0, carrier_in, c_out, need)


def tau_l_order(F: BandLimitedF, two_l: int) -> int:
    _, b = F.band_two
    return (b + two_l + 1) // 2


def tau_theta_l(F: BandLimitedF, theta: float, l, quad: HaarQuadrature) -> np.ndarray:
    """``int F(g_theta, z) pi_l(z) dz`` for the central elements ``theta`` in {0, pi}."""
    if not (abs(theta) < 1e-12 or abs(theta - math.pi) < 1e-12):
        raise InputError("theta must be 0 or pi")
    t = two_spin(l)
    need = tau_l_order(F, t)
    if quad.order < need:
        raise BandLimitExceeded(f"tau needs quadrature order {need}, got {quad.order}")
    g = g_theta(theta)
    N = len(quad)
    vals = F.evaluate_batch(np.full(N, g.alpha), np.full(N, g.beta), quad.alpha, quad.beta)
    return np.tensordot(quad.weights * vals, quad.wigner(t), axes=1)


# ---------------------------------------------------------------------------
# verification report used by the command line

def su2_report(n: int, L, order: int, seed: int = 0, band=1, theta: float = 1.0, tol: float = 1e-8) -> dict:
    """Homomorphism, star and saturation errors for random band-limited F1, F2."""
    rng = np.random.default_rng(seed)
    F1 = random_band_limited(rng, band, band)
    F2 = random_band_limited(rng, band, band)
    c_in = carrier(n, L)

    def run(q_order):
        quad = haar_quadrature(q_order)
        F12 = convolve(F1, F2, quad)
        r2 = tau_theta_n(F2, theta, n, c_in, quad)
        r1 = tau_theta_n(F1, theta, n, r2.carrier_out, quad)
        r12 = tau_theta_n(F12, theta, n, c_in, quad, L_out=r1.carrier_out.L)
        hom = np.abs(r12.matrix - r1.matrix @ r2.matrix).max()
        s = tau_theta_n(star(F1), theta, n, c_in, quad, L_out=c_in.L).matrix
        s0 = tau_theta_n(F1, theta, n, c_in, quad, L_out=c_in.L).matrix
        st = np.abs(s - s0.conj().T).max()
        return float(hom), float(st), r12.matrix, max(r1.leakage, r2.leakage, r12.leakage)

    quad_needed = max(order, _homomorphism_order(F1, F2, c_in))
    if order < quad_needed:
        raise BandLimitExceeded(f"order {order} is below the required {quad_needed}")
    hom, st, M, leak = run(order)
    hom2, st2, M2, _ = run(2 * order)
    sat = float(np.abs(M - M2).max())
    checks = [
        {"id": "homomorphism", "maxDeviation": hom, "pass": hom <= tol},
        {"id": "star", "maxDeviation": st, "pass": st <= tol},
        {"id": "saturation", "maxDeviation": sat, "pass": sat <= 1e-10},
        {"id": "leakage", "maxDeviation": float(leak), "pass": leak <= 1e-10},
    ]
    return {"suite": "su2", "n": n, "L": spin_label(c_in.two_L), "order": order, "theta": theta,
            "checks": checks, "pass": all(c["pass"] for c in checks)}


def _homomorphism_order(F1: BandLimitedF, F2: BandLimitedF, c_in: TruncatedCarrier) -> int:
    """Smallest quadrature order at which every step of :func:`su2_report` is exact."""
    a1, _ = F1.band_two
    a2, _ = F2.band_two
    mid = c_in.two_L + 2 * a2
    out = mid + 2 * a1
    F12_a = a1 + a2
    F12_b = max(t.band("b") for t in F2.terms)
    need = [convolution_order(F1, F2),
            tau_order(F2, c_in.two_L, mid),
            tau_order(F1, mid, out),
            (max(F12_b + c_in.two_L, out + 2 * F12_a + c_in.two_L, 2 * (c_in.two_L + 2 * F12_a)) + 1) // 2,
            tau_order(star(F1), c_in.two_L, c_in.two_L)]
    return max(need)


def required_su2_order(n: int, L, band=1, seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    F1 = random_band_limited(rng, band, band)
    F2 = random_band_limited(rng, band, band)
    return _homomorphism_order(F1, F2, carrier(n, L))
