"""Conjugacy classes of SL(2, R) and their centralizers.

The trace separates classes except at ``tr = +-2`` and inside ``|tr| < 2``:

* ``|tr| < 2``: elliptic. ``theta = arccos(tr/2)`` and the sign of ``b - c``
  (never zero there, since ``bc < 0``) distinguish ``u_theta`` from
  ``u_{-theta}``. Centralizer U(1).
* ``|tr| > 2``: hyperbolic, ``t = arccosh(|tr|/2)``, represented by
  ``+-a_t``. Centralizer ``{+-a_s}``, i.e. R x Z2.
* ``tr = +-2``: ``+-I`` (centralizer SL(2, R)) or a parabolic element.
  ``g - I`` (or ``-g - I``) is a nonzero nilpotent ``s [[-xy, x^2], [-y^2, xy]]``
  and the sign ``s`` is a conjugation invariant, so there are two parabolic
  classes for each sign of the trace, represented by ``+-n_1`` and ``+-n_1^-1``.
  Their centralizer is ``{+-n_s}``, again R x Z2.

Listing a single parabolic class per trace would merge two distinct orbits,
so every parabolic classification emits :class:`ParabolicOrientationWarning`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import InputError, NotUnimodular

DET_TOL = 1e-9
TRACE_TOL = 1e-9

FAMILIES = ("EllipticPlus", "EllipticMinus", "HyperbolicPos", "HyperbolicNeg",
            "Identity", "MinusIdentity", "ParabolicPos", "ParabolicNeg")
CENTRALIZERS = ("U(1)", "RxZ2", "SL(2,R)")


class ParabolicOrientationWarning(UserWarning):
    """Raised for parabolic elements: each trace +-2 carries two parabolic classes, not one."""


@dataclass(frozen=True)
class SL2Matrix:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InputError(f"entry {name} is not finite")
            object.__setattr__(self, name, v)
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > DET_TOL:
            raise NotUnimodular(f"determinant {det!r} differs from 1 by more than {DET_TOL}")

    @classmethod
    def from_array(cls, M) -> "SL2Matrix":
        M = np.asarray(M, dtype=float)
        if M.shape != (2, 2):
            raise InputError("expected a 2x2 matrix")
        return cls(M[0, 0], M[0, 1], M[1, 0], M[1, 1])

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return _unchecked(self.array @ other.array)

    def __neg__(self) -> "SL2Matrix":
        return SL2Matrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)


def _unchecked(M: np.ndarray) -> SL2Matrix:
    """Products of unimodular matrices drift slightly; renormalise the determinant."""
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    M = M / math.sqrt(det)
    return SL2Matrix(M[0, 0], M[0, 1], M[1, 0], M[1, 1])


@dataclass(frozen=True)
class ConjClassLabel:
    """``family`` from :data:`FAMILIES`; ``parameter`` is theta or t where relevant;
    ``orientation`` is +1/-1 for parabolic classes."""

    family: str
    parameter: float | None = None
    orientation: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}")
        needs_param = self.family.startswith(("Elliptic", "Hyperbolic"))
        if needs_param != (self.parameter is not None):
            raise InputError(f"{self.family} {'needs' if needs_param else 'takes no'} parameter")
        if self.family.startswith("Elliptic") and not 0 < self.parameter < math.pi:
            raise InputError("elliptic parameter must lie in (0, pi)")
        if self.family.startswith("Hyperbolic") and not self.parameter > 0:
            raise InputError("hyperbolic parameter must be positive")
        if self.family.startswith("Parabolic") != (self.orientation in (1, -1)):
            raise InputError("orientation is +1 or -1 for parabolic families and absent otherwise")

    @property
    def centralizer(self) -> str:
        if self.family.startswith("Elliptic"):
            return "U(1)"
        if self.family in ("Identity", "MinusIdentity"):
            return "SL(2,R)"
        return "RxZ2"

    @property
    def trace(self) -> float:
        f, p = self.family, self.parameter
        if f.startswith("Elliptic"):
            return 2 * math.cos(p)
        if f == "HyperbolicPos":
            return 2 * math.cosh(p)
        if f == "HyperbolicNeg":
            return -2 * math.cosh(p)
        return 2.0 if f in ("Identity", "ParabolicPos") else -2.0

    def matches(self, other: "ConjClassLabel", tol: float = 1e-9) -> bool:
        if self.family != other.family or self.orientation != other.orientation:
            return False
        if self.parameter is None:
            return True
        return abs(self.parameter - other.parameter) <= tol

    def to_dict(self) -> dict:
        return {"family": self.family, "parameter": self.parameter, "orientation": self.orientation,
                "centralizer": self.centralizer}

    @classmethod
    def from_dict(cls, d: dict) -> "ConjClassLabel":
        return cls(d["family"], d.get("parameter"), d.get("orientation"))

    def __str__(self) -> str:
        if self.parameter is not None:
            return f"{self.family}({self.parameter:.12g})"
        if self.orientation is not None:
            return f"{self.family}({'+' if self.orientation > 0 else '-'})"
        return self.family


def _orientation(g: SL2Matrix) -> int:
    # g - I = s [[-xy, x^2], [-y^2, xy]], so q - r = s (x^2 + y^2) and sign(q - r) = s.
    # For exact nilpotents this is the rule "q > 0, or q = 0 and r < 0".
    q, r = g.b, g.c
    return 1 if q - r > 0 else -1


def classify_sl2r(g: SL2Matrix, warn: bool = True) -> ConjClassLabel:
    tr = g.trace
    if abs(tr) < 2 - TRACE_TOL:
        theta = math.acos(tr / 2)
        return ConjClassLabel("EllipticPlus" if g.b - g.c > 0 else "EllipticMinus", theta)
    if tr > 2 + TRACE_TOL:
        return ConjClassLabel("HyperbolicPos", math.acosh(tr / 2))
    if tr < -2 - TRACE_TOL:
        return ConjClassLabel("HyperbolicNeg", math.acosh(-tr / 2))
    h = g if tr > 0 else -g
    if max(abs(h.a - 1), abs(h.b), abs(h.c), abs(h.d - 1)) <= TRACE_TOL:
        return ConjClassLabel("Identity" if tr > 0 else "MinusIdentity")
    label = ConjClassLabel("ParabolicPos" if tr > 0 else "ParabolicNeg", orientation=_orientation(h))
    if warn:
        warnings.warn(
            f"{label}: trace {'+' if tr > 0 else '-'}2 carries two parabolic conjugacy classes "
            "(orientations + and -); a single-class description would merge them",
            ParabolicOrientationWarning, stacklevel=2)
    return label


def u(theta: float) -> SL2Matrix:
    c, s = math.cos(theta), math.sin(theta)
    return SL2Matrix(c, s, -s, c)


def a(t: float) -> SL2Matrix:
    return SL2Matrix(math.exp(t), 0.0, 0.0, math.exp(-t))


def n(s: float) -> SL2Matrix:
    return SL2Matrix(1.0, s, 0.0, 1.0)


IDENTITY = SL2Matrix(1.0, 0.0, 0.0, 1.0)


def canonical_representative(label: ConjClassLabel) -> SL2Matrix:
    f, p = label.family, label.parameter
    if f == "EllipticPlus":
        return u(p)
    if f == "EllipticMinus":
        return u(-p)
    if f == "HyperbolicPos":
        return a(p)
    if f == "HyperbolicNeg":
        return -a(p)
    if f == "Identity":
        return IDENTITY
    if f == "MinusIdentity":
        return -IDENTITY
    rep = n(1.0) if label.orientation > 0 else n(-1.0)
    return rep if f == "ParabolicPos" else -rep


def random_conjugator(rng: np.random.Generator, spread: float = 1.0) -> SL2Matrix:
    """``u_x a_s u_y`` with uniform angles and ``s`` in ``[-spread, spread]``."""
    x, y = rng.uniform(0, 2 * math.pi, size=2)
    s = rng.uniform(-spread, spread)
    return _unchecked((u(x) @ a(s) @ u(y)).array)


def conjugate(h: SL2Matrix, g: SL2Matrix) -> SL2Matrix:
    return _unchecked(h.array @ g.array @ h.inverse().array)


def sample_labels() -> list[ConjClassLabel]:
    """One label per family, at fixed parameters."""
    return [ConjClassLabel("EllipticPlus", math.pi / 3), ConjClassLabel("EllipticMinus", math.pi / 3),
            ConjClassLabel("HyperbolicPos", 1.0), ConjClassLabel("HyperbolicNeg", 1.0),
            ConjClassLabel("Identity"), ConjClassLabel("MinusIdentity"),
            ConjClassLabel("ParabolicPos", orientation=1), ConjClassLabel("ParabolicPos", orientation=-1),
            ConjClassLabel("ParabolicNeg", orientation=1), ConjClassLabel("ParabolicNeg", orientation=-1)]


def separation_residual(g1: SL2Matrix, g2: SL2Matrix, conjugators) -> float:
    """Smallest Frobenius distance between ``h g1 h^-1`` and ``g2`` over the conjugators."""
    target = g2.array
    return float(min(np.linalg.norm(conjugate(h, g1).array - target) for h in conjugators))
