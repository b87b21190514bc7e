"""Points, planes, lines and circles in R^3, exact or floating point.

Coordinates are either :class:`fractions.Fraction` (exact mode) or
``float``.  Exact mode needs a rational center, a rational radius and a
rational *unit* normal; :meth:`Circle.rationalized` snaps float data to
such a circle.  Float comparisons use ``TOL`` unless stated otherwise.

A circle is parametrized by (s:t) in P^1 through
``cos(theta) = (s^2 - t^2)/(s^2 + t^2)``, ``sin(theta) = 2st/(s^2 + t^2)``,
where theta is measured in the circle's frame (u, v).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import polys

TOL = 1e-9
SNAP_TOL = 1e-9


class GeometryError(ValueError):
    """Base class for documented geometric degeneracies."""

    code = "geometry_error"


class ZeroParameter(GeometryError):
    code = "zero_parameter"


class IdenticalPlanes(GeometryError):
    code = "identical_planes"


class LineNotInPlane(GeometryError):
    code = "line_not_in_plane"


def _is_exact(*xs) -> bool:
    return all(isinstance(x, (Fraction, int)) for x in xs)


def as_scalar(x):
    """Parse ints, Fractions, floats and strings like ``"3/5"``."""
    if isinstance(x, (Fraction, float)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def snap(x, tol: float = SNAP_TOL) -> Fraction:
    """Nearest simple rational to x within tol."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x).limit_denominator(max(1, int(round(1.0 / tol))))


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

Vec3 = tuple  # (x, y, z)


def vec(xs: Sequence) -> Vec3:
    return tuple(as_scalar(x) for x in xs)


def dot(a: Vec3, b: Vec3):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec3, b: Vec3) -> Vec3:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def add(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale(a: Vec3, c) -> Vec3:
    return (a[0] * c, a[1] * c, a[2] * c)


def norm2(a: Vec3):
    return dot(a, a)


def is_zero_vec(a: Vec3, tol: float = TOL) -> bool:
    if _is_exact(*a):
        return all(x == 0 for x in a)
    return math.sqrt(float(norm2(a))) <= tol


def _normalize_max(a: Vec3) -> Vec3:
    """Divide by the largest absolute component (keeps rationals rational)."""
    m = max(abs(x) for x in a)
    return tuple(x / m for x in a)


# ---------------------------------------------------------------------------
# planes, lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Plane:
    """The locus normal . x = offset."""

    normal: Vec3
    offset: object

    def __post_init__(self):
        if is_zero_vec(self.normal, 0.0):
            raise GeometryError("plane normal must be nonzero")

    def value(self, x: Vec3):
        return dot(self.normal, x) - self.offset

    def homogeneous(self) -> tuple:
        """Coefficients (a0, a1, a2, a3) with a0*X0 + ... = 0 on the plane."""
        return (-self.offset, *self.normal)


@dataclass(frozen=True)
class Line:
    """base + lambda * direction; an ``at_infinity`` line is the line at
    infinity of the planes with normal ``direction`` (``base`` is None)."""

    base: Optional[Vec3]
    direction: Vec3
    at_infinity: bool = False

    def __post_init__(self):
        if is_zero_vec(self.direction, 0.0):
            raise GeometryError("line direction must be nonzero")

    def point(self, lam) -> Vec3:
        return add(self.base, scale(self.direction, lam))

    def contains(self, x: Vec3, tol: float = TOL) -> bool:
        if self.at_infinity:
            return False
        return is_zero_vec(cross(sub(x, self.base), self.direction), tol)


def plane_intersection(p1: Plane, p2: Plane) -> Line:
    d = cross(p1.normal, p2.normal)
    if is_zero_vec(d):
        # parallel normals; identical iff offsets scale the same way
        n1, n2 = p1.normal, p2.normal
        k = max(range(3), key=lambda i: abs(n1[i]))
        ratio = n2[k] / n1[k]
        if _is_exact(p1.offset, p2.offset, ratio):
            same = p2.offset == ratio * p1.offset
        else:
            same = abs(float(p2.offset) - float(ratio) * float(p1.offset)) <= TOL
        if same:
            raise IdenticalPlanes("planes coincide")
        return Line(None, n1, at_infinity=True)
    # base = a*n1 + b*n2 solving the 2x2 Gram system
    g11, g12, g22 = norm2(p1.normal), dot(p1.normal, p2.normal), norm2(p2.normal)
    det = g11 * g22 - g12 * g12
    a = (p1.offset * g22 - p2.offset * g12) / det
    b = (p2.offset * g11 - p1.offset * g12) / det
    base = add(scale(p1.normal, a), scale(p2.normal, b))
    return Line(base, _normalize_max(d))


# ---------------------------------------------------------------------------
# circles
# ---------------------------------------------------------------------------

def householder_frame(n: Vec3) -> tuple[Vec3, Vec3]:
    """Deterministic right-handed orthonormal frame (u, v) of the plane
    orthogonal to the unit vector n: u = H e1 for the reflection H taking
    e3 to n, v = n x u.  Rational whenever n is."""
    exact = _is_exact(*n)
    one = Fraction(1) if exact else 1.0
    w = (-n[0], -n[1], one - n[2])
    ww = norm2(w)
    e1 = (one, 0 * one, 0 * one)
    if (ww == 0) if exact else (ww <= TOL * TOL):
        u = e1
    else:
        u = sub(e1, scale(w, 2 * w[0] / ww))
    return u, cross(n, u)


@dataclass(frozen=True)
class Circle:
    center: Vec3
    radius: object
    normal: Vec3
    frame: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "center", vec(self.center))
        object.__setattr__(self, "normal", vec(self.normal))
        object.__setattr__(self, "radius", as_scalar(self.radius))
        if self.radius <= 0:
            raise GeometryError("radius must be positive")
        nn = norm2(self.normal)
        if self.exact:
            if nn != 1:
                raise GeometryError("exact circles need a rational unit normal")
        elif abs(float(nn) - 1.0) > TOL:
            raise GeometryError("normal must be a unit vector")
        if self.frame is not None:
            u, v = (vec(self.frame[0]), vec(self.frame[1]))
            object.__setattr__(self, "frame", (u, v))

    @property
    def exact(self) -> bool:
        return _is_exact(*self.center, self.radius, *self.normal)

    @property
    def plane(self) -> Plane:
        return Plane(self.normal, dot(self.normal, self.center))

    def axes(self) -> tuple[Vec3, Vec3]:
        return self.frame if self.frame is not None else householder_frame(self.normal)

    def point(self, theta: float) -> np.ndarray:
        u, v = self.axes()
        return (np.asarray(self.center, float)
                + float(self.radius) * (math.cos(theta) * np.asarray(u, float)
                                        + math.sin(theta) * np.asarray(v, float)))

    def tangent(self, theta: float) -> np.ndarray:
        u, v = self.axes()
        return -math.sin(theta) * np.asarray(u, float) + math.cos(theta) * np.asarray(v, float)

    def angle_of(self, x) -> float:
        u, v = self.axes()
        d = np.asarray(x, float) - np.asarray(self.center, float)
        return math.atan2(float(d @ np.asarray(v, float)), float(d @ np.asarray(u, float)))

    def as_float(self) -> "Circle":
        return Circle(tuple(float(x) for x in self.center), float(self.radius),
                      tuple(float(x) for x in self.normal),
                      None if self.frame is None else tuple(tuple(float(x) for x in a) for a in self.frame))

    def rationalized(self, tol: float = SNAP_TOL) -> "Circle":
        """Exact circle within ~tol of this one (normal snapped through its
        stereographic coordinates so it stays exactly unit)."""
        if self.exact:
            return self
        n = [float(x) for x in self.normal]
        # project from the pole farthest from n for stability
        k = max(range(3), key=lambda i: abs(n[i]))
        sgn = 1 if n[k] >= 0 else -1
        others = [i for i in range(3) if i != k]
        a = snap(n[others[0]] / (1.0 + sgn * n[k]), tol)
        b = snap(n[others[1]] / (1.0 + sgn * n[k]), tol)
        den = 1 + a * a + b * b
        nn = [Fraction(0)] * 3
        nn[others[0]] = 2 * a / den
        nn[others[1]] = 2 * b / den
        nn[k] = sgn * (1 - a * a - b * b) / den
        return Circle(tuple(snap(x, tol) for x in self.center), snap(self.radius, tol), tuple(nn))


def stereographic_unit(a, b) -> Vec3:
    """Rational unit vector from stereographic coordinates (a, b)."""
    a, b = Fraction(a), Fraction(b)
    den = 1 + a * a + b * b
    return (2 * a / den, 2 * b / den, (1 - a * a - b * b) / den)


# ---------------------------------------------------------------------------
# parametrized conics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParametrizedConic:
    """Four binary quadratic forms; ``forms[i] = (coef s^2, coef st, coef t^2)``
    gives homogeneous coordinate X_i, with affine point X_1..3 / X_0."""

    forms: tuple

    def __post_init__(self):
        fs = tuple(tuple(as_scalar(c) for c in f) for f in self.forms)
        if len(fs) != 4 or any(len(f) != 3 for f in fs):
            raise GeometryError("a parametrized conic needs four quadratic forms")
        object.__setattr__(self, "forms", fs)
        if self.rank() != 3:
            raise GeometryError("the four forms must span all binary quadratics")

    @property
    def exact(self) -> bool:
        return all(_is_exact(*f) for f in self.forms)

    def rank(self) -> int:
        m = np.array([[float(c) for c in f] for f in self.forms])
        if self.exact:
            return 4 - len(polys.nullspace([list(col) for col in zip(*self.forms)]))
        return int(np.linalg.matrix_rank(m, tol=TOL * max(1.0, np.abs(m).max())))

    def __call__(self, s, t) -> tuple:
        return tuple(a * s * s + b * s * t + c * t * t for a, b, c in self.forms)

    def d_s(self, s, t) -> tuple:
        return tuple(2 * a * s + b * t for a, b, c in self.forms)

    def d_t(self, s, t) -> tuple:
        return tuple(b * s + 2 * c * t for a, b, c in self.forms)

    def plane_relation(self) -> tuple:
        """The linear relation (a0..a3) with sum a_i f_i = 0, i.e. the
        homogeneous equation of the conic's plane."""
        if self.exact:
            ns = polys.nullspace([list(col) for col in zip(*self.forms)])
            return tuple(ns[0])
        m = np.array([[float(c) for c in f] for f in self.forms])
        _, _, vt = np.linalg.svd(m.T)
        return tuple(vt[-1])

    def plane(self) -> Plane:
        a = self.plane_relation()
        return Plane(tuple(a[1:]), -a[0])

    def affine(self, s, t):
        X = self(s, t)
        return tuple(x / X[0] for x in X[1:])


def circle_parametrization(c: Circle) -> ParametrizedConic:
    u, v = c.axes()
    r = c.radius
    forms = [(1, 0, 1)]
    for k in range(3):
        ck = c.center[k]
        # ck*(s^2+t^2) + r*((s^2-t^2) u_k + 2 s t v_k)
        forms.append((ck + r * u[k], 2 * r * v[k], ck - r * u[k]))
    return ParametrizedConic(tuple(forms))


def angle_to_param(theta: float) -> tuple[float, float]:
    """(s, t) with the given circle angle; (s:t) is defined up to sign."""
    return math.cos(theta / 2.0), math.sin(theta / 2.0)


def param_to_angle(s, t) -> float:
    return 2.0 * math.atan2(float(t), float(s))


def tangent_line(pc: ParametrizedConic, param) -> Line:
    s, t = param
    if s == 0 and t == 0:
        raise ZeroParameter("(s:t) = (0:0) is not a point of P^1")
    P, Q = pc.d_s(s, t), pc.d_t(s, t)
    X = pc(s, t)
    exact = _is_exact(*P, *Q)
    nz = (lambda x: x != 0) if exact else (lambda x: abs(x) > TOL)
    # direction: the point at infinity of span(P, Q)
    d = tuple(P[0] * Q[k] - Q[0] * P[k] for k in (1, 2, 3))
    if is_zero_vec(d, TOL):
        if not nz(P[0]) and not nz(Q[0]):
            return Line(None, cross(P[1:], Q[1:]), at_infinity=True)
        d = P[1:] if not nz(P[0]) else Q[1:]
    if nz(X[0]):
        base = tuple(x / X[0] for x in X[1:])
    elif nz(P[0]):
        base = tuple(x / P[0] for x in P[1:])
    else:
        base = tuple(x / Q[0] for x in Q[1:])
    return Line(base, _normalize_max(d))


# ---------------------------------------------------------------------------
# circle / line incidence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootClassification:
    kind: str  # "two_real" | "tangent" | "complex" | "circular_points"
    coefficients: tuple  # q(lambda) = a lambda^2 + b lambda + c
    discriminant: object
    roots: tuple  # line parameters; exact when rational
    points: tuple
    multiplicities: tuple

    @property
    def real_count(self) -> int:
        return {"two_real": 2, "tangent": 1}.get(self.kind, 0)


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def circle_line_roots(c: Circle, l: Line, tol: float = TOL) -> RootClassification:
    if l.at_infinity:
        if not is_zero_vec(cross(l.direction, c.normal), tol):
            raise LineNotInPlane("line at infinity of another plane")
        return RootClassification("circular_points", (), None, (), (), (1, 1))
    pl = c.plane
    exact = c.exact and _is_exact(*l.base, *l.direction)
    off_dir, off_base = dot(l.direction, c.normal), pl.value(l.base)
    if exact:
        inside = off_dir == 0 and off_base == 0
    else:
        scale_ = math.sqrt(float(norm2(l.direction)))
        inside = abs(float(off_dir)) <= tol * scale_ and abs(float(off_base)) <= tol
    if not inside:
        raise LineNotInPlane("line does not lie in the circle's plane")
    w = sub(l.base, c.center)
    a = norm2(l.direction)
    b = 2 * dot(l.direction, w)
    cc = norm2(w) - c.radius * c.radius
    disc = b * b - 4 * a * cc
    if exact:
        sign = (disc > 0) - (disc < 0)
    else:
        scale_ = max(abs(float(b)) ** 2, abs(4 * float(a) * float(cc)), 1e-300)
        sign = 0 if abs(float(disc)) <= tol * scale_ else (1 if disc > 0 else -1)
    if sign > 0:
        r = _exact_sqrt(disc) if exact else None
        if r is None:
            r = math.sqrt(float(disc))
            a_, b_ = float(a), float(b)
        else:
            a_, b_ = a, b
        roots = ((-b_ - r) / (2 * a_), (-b_ + r) / (2 * a_))
        return RootClassification("two_real", (a, b, cc), disc, roots,
                                  tuple(l.point(x) for x in roots), (1, 1))
    if sign == 0:
        root = -b / (2 * a)
        return RootClassification("tangent", (a, b, cc), disc, (root,), (l.point(root),), (2,))
    r = math.sqrt(-float(disc))
    roots = (complex(-float(b), -r) / (2 * float(a)), complex(-float(b), r) / (2 * float(a)))
    return RootClassification("complex", (a, b, cc), disc, roots, (), (1, 1))
