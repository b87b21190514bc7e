"""The bidegree-(2,2) edge curve of two parametrized conics.

E(s,t,u,v) vanishes exactly when the tangent line to the first conic at
(s:t) meets the tangent line to the second conic at (u:v).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import geom3, polys
from .geom3 import Circle, GeometryError, ParametrizedConic


class CoplanarConics(GeometryError):
    code = "coplanar_conics"


class ZeroForm(GeometryError):
    code = "zero_form"


class NotSmoothGenusOne(GeometryError):
    code = "not_smooth_genus_one"


class DegenerateConfiguration(GeometryError):
    code = "degenerate_configuration"


def _exact(xs) -> bool:
    return all(isinstance(x, (Fraction, int)) for x in xs)


@dataclass(frozen=True)
class Bideg22Form:
    """coeff[i][j] multiplies s^(2-i) t^i u^(2-j) v^j."""

    coeff: tuple

    def __post_init__(self):
        c = tuple(tuple(geom3.as_scalar(x) if not isinstance(x, complex) else x for x in row)
                  for row in self.coeff)
        if len(c) != 3 or any(len(r) != 3 for r in c):
            raise ValueError("a (2,2)-form has a 3x3 coefficient grid")
        object.__setattr__(self, "coeff", c)

    @property
    def exact(self) -> bool:
        return all(_exact(r) for r in self.coeff)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.coeff for x in r)

    def __call__(self, s, t, u, v):
        S = (s * s, s * t, t * t)
        U = (u * u, u * v, v * v)
        return sum(self.coeff[i][j] * S[i] * U[j] for i in range(3) for j in range(3))

    def st_forms(self) -> tuple:
        """(A, B, C): quadratic forms in (s,t) with E = A u^2 + B uv + C v^2."""
        return tuple(tuple(self.coeff[i][j] for i in range(3)) for j in range(3))

    def uv_forms(self) -> tuple:
        """(a, b, c): quadratic forms in (u,v) with E = a s^2 + b st + c t^2."""
        return tuple(tuple(row) for row in self.coeff)

    def swap(self) -> "Bideg22Form":
        """The same curve with the roles of (s,t) and (u,v) exchanged."""
        return Bideg22Form(tuple(zip(*self.coeff)))

    def scaled(self, c) -> "Bideg22Form":
        return Bideg22Form(tuple(tuple(x * c for x in r) for r in self.coeff))

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.coeff])

    def max_abs(self) -> float:
        return max(abs(complex(x)) for r in self.coeff for x in r)

    def gradient(self, s, t, u, v) -> tuple:
        c = self.coeff
        S = (s * s, s * t, t * t)
        U = (u * u, u * v, v * v)
        dS_s, dS_t = (2 * s, t, 0), (0, s, 2 * t)
        dU_u, dU_v = (2 * u, v, 0), (0, u, 2 * v)
        g = [0, 0, 0, 0]
        for i in range(3):
            for j in range(3):
                g[0] += c[i][j] * dS_s[i] * U[j]
                g[1] += c[i][j] * dS_t[i] * U[j]
                g[2] += c[i][j] * S[i] * dU_u[j]
                g[3] += c[i][j] * S[i] * dU_v[j]
        return tuple(g)

    def bidegree_exact(self) -> bool:
        """True when the form is nonzero (so defines a (2,2)-curve)."""
        return not self.is_zero()

    def to_json(self) -> list:
        return [[_num(x) for x in r] for r in self.coeff]


def _num(x):
    if isinstance(x, Fraction):
        return {"exact": f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator),
                "float": f"{float(x):.17g}"}
    return {"exact": None, "float": f"{float(x):.17g}"}


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _minor_form(f: Sequence) -> dict:
    """2x2 minors of the rows d/ds f and d/dt f as quadratic forms.

    f holds per-coordinate (a, b, c) with f_k = a s^2 + b st + c t^2."""
    out = {}
    for j, k in itertools.combinations(range(4), 2):
        aj, bj, cj = f[j]
        ak, bk, ck = f[k]
        out[(j, k)] = (2 * (aj * bk - ak * bj),
                       4 * (aj * ck - ak * cj),
                       2 * (bj * ck - bk * cj))
    return out


def edge_form(pc1: ParametrizedConic, pc2: ParametrizedConic) -> Bideg22Form:
    """Expand det[d_s f1; d_t f1; d_u f2; d_v f2] by Laplace along the
    first two rows."""
    m1, m2 = _minor_form(pc1.forms), _minor_form(pc2.forms)
    grid = [[0, 0, 0] for _ in range(3)]
    for (j, k), top in m1.items():
        l, m = (x for x in range(4) if x not in (j, k))
        bot = m2[(l, m)]
        sign = -1 if (1 + j + k) % 2 else 1
        for i in range(3):
            for jj in range(3):
                grid[i][jj] += sign * top[i] * bot[jj]
    f = Bideg22Form(tuple(tuple(r) for r in grid))
    if f.exact:
        zero = f.is_zero()
    else:
        scale = max(1.0, max(abs(float(x)) for c in (*pc1.forms, *pc2.forms) for x in c)) ** 4
        zero = f.max_abs() <= 1e-12 * scale
    if zero:
        raise CoplanarConics("edge form vanishes identically; the conics are coplanar")
    return f


def edge_form_of_circles(c1: Circle, c2: Circle) -> Bideg22Form:
    return edge_form(geom3.circle_parametrization(c1), geom3.circle_parametrization(c2))


# ---------------------------------------------------------------------------
# discriminants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchData:
    quartic: tuple
    roots: tuple  # ((x, mult), ...) with x = s/t, inf for (1:0)
    real_count: int  # real roots counted with multiplicity

    def real_roots(self, tol: float = 1e-9) -> list:
        return [(z.real if z != complex(math.inf) else math.inf, m)
                for z, m in self.roots if _is_real(z, tol)]


def _is_real(z: complex, tol: float = 1e-9) -> bool:
    if cmath.isinf(z):
        return True
    return abs(z.imag) <= tol * max(1.0, abs(z))


def _discriminant(A, B, C) -> tuple:
    return polys.form_add(polys.form_mul(B, B), polys.form_scale(polys.form_mul(A, C), -4))


def _branch_data(q) -> BranchData:
    if all(x == 0 for x in q):
        return BranchData(q, (), 0)
    roots = tuple(polys.form_roots(q))
    real = sum(m for z, m in roots if _is_real(z))
    return BranchData(q, roots, real)


def discriminants(f: Bideg22Form) -> tuple[BranchData, BranchData]:
    d_st = _discriminant(*f.st_forms())
    d_uv = _discriminant(*f.uv_forms())
    return _branch_data(d_st), _branch_data(d_uv)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

TAGS = ("SmoothGenusOne", "NodalIrreducibleRational", "Cuspidal", "TwoOneOne",
        "TwoOnePlusZeroOne", "OneTwoPlusOneZero", "MixedThree", "FourLines",
        "OtherDegenerate")


@dataclass
class CurveType:
    tag: str
    real_split: Optional[bool] = None  # TwoOneOne only: two real factors?
    singular_points: list = field(default_factory=list)
    linear_st: tuple = ()  # gcd of the (s,t)-coefficients: (1,0)-components
    linear_uv: tuple = ()

    def to_json(self) -> dict:
        out = {"tag": self.tag}
        if self.tag == "TwoOneOne":
            out["real_split"] = self.real_split
        out["singular_points"] = [p.to_json() for p in self.singular_points]
        return out


def rationalize_form(f: Bideg22Form, tol: float = 1e-9) -> Bideg22Form:
    """Exact copy of a float form, snapping coefficients relative to its size."""
    if f.exact:
        return f
    m = f.max_abs()
    return Bideg22Form(tuple(tuple(geom3.snap(float(x) / m, tol) for x in r) for r in f.coeff))


def _gcd_all(fs) -> tuple:
    g = (Fraction(0),) * 3
    for h in fs:
        g = polys.form_gcd(g, polys.form(h))
    return g


def _is_square(q: tuple) -> Optional[tuple]:
    """If q = c * g^2 for a rational form g, return (c, g)."""
    c, parts = polys.form_squarefree(polys.form(q))
    if any(m % 2 for _, m in parts):
        return None
    g = (Fraction(1),)
    for h, m in parts:
        for _ in range(m // 2):
            g = polys.form_mul(g, h)
    return c, g


def classify_curve(f: Bideg22Form) -> CurveType:
    if f.is_zero():
        raise ZeroForm("the zero form defines no curve")
    e = rationalize_form(f)
    g10 = _gcd_all(e.st_forms())
    g01 = _gcd_all(e.uv_forms())
    a, b = len(g10) - 1, len(g01) - 1
    for g, d in ((g10, a), (g01, b)):
        if d and polys.multiplicity_pattern(g) != [1] * d:
            return CurveType("OtherDegenerate", linear_st=g10, linear_uv=g01)
    if (a, b) == (0, 0):
        d_st = _discriminant(*e.st_forms())
        if polys.form_is_zero(d_st):
            return CurveType("OtherDegenerate")
        pattern = polys.multiplicity_pattern(d_st)
        if pattern == [1, 1, 1, 1]:
            return CurveType("SmoothGenusOne")
        if pattern == [2, 1, 1]:
            return CurveType("NodalIrreducibleRational")
        if pattern == [3, 1]:
            return CurveType("Cuspidal")
        sq = _is_square(d_st)
        if sq is not None:
            return CurveType("TwoOneOne", real_split=sq[0] > 0)
        return CurveType("OtherDegenerate")
    tag = {(1, 0): "OneTwoPlusOneZero", (0, 1): "TwoOnePlusZeroOne",
           (1, 1): "MixedThree", (2, 2): "FourLines"}.get((a, b), "OtherDegenerate")
    return CurveType(tag, linear_st=g10, linear_uv=g01)


# ---------------------------------------------------------------------------
# singular points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularPoint:
    st: tuple  # homogeneous, possibly complex
    uv: tuple
    lemma_case: str
    local_type: str  # "node" | "non-node"
    real: bool

    def to_json(self) -> dict:
        def enc(z):
            z = complex(z)
            return f"{z.real:.17g}" if z.imag == 0 else [f"{z.real:.17g}", f"{z.imag:.17g}"]
        return {"st": [enc(x) for x in self.st], "uv": [enc(x) for x in self.uv],
                "lemma_case": self.lemma_case, "local_type": self.local_type, "real": self.real}


def _homog(x: complex) -> tuple:
    if cmath.isinf(x):
        return (1.0 + 0j, 0j)
    # normalize so the larger coordinate is 1
    return (x, 1.0 + 0j) if abs(x) <= 1 else (1.0 + 0j, 1 / x)


def _multiple_roots(q) -> list:
    if all(x == 0 for x in q):
        return []
    return [z for z, m in polys.form_roots(q) if m >= 2]


def _proj_equal(a: Sequence, b: Sequence, tol: float) -> bool:
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(np.linalg.norm(np.outer(a, b) - np.outer(b, a))) <= tol


def _tangent_in_plane(pc: ParametrizedConic, st, plane_vec, tol: float) -> bool:
    P = np.asarray(pc.d_s(*st), complex)
    Q = np.asarray(pc.d_t(*st), complex)
    w = np.asarray([float(x) for x in plane_vec])
    w = w / np.linalg.norm(w)
    scale = max(np.linalg.norm(P), np.linalg.norm(Q))
    return abs(P @ w) <= tol * scale and abs(Q @ w) <= tol * scale


def _local_hessian_det(f: Bideg22Form, st, uv) -> complex:
    """Hessian determinant in an affine chart around the point."""
    ks = 0 if abs(st[0]) >= abs(st[1]) else 1
    ku = 0 if abs(uv[0]) >= abs(uv[1]) else 1
    st = tuple(x / st[ks] for x in st)
    uv = tuple(x / uv[ku] for x in uv)
    h = 1e-4
    x0, y0 = st[1 - ks], uv[1 - ku]

    def g(x, y):
        a = [0, 0]
        a[ks], a[1 - ks] = 1, x
        b = [0, 0]
        b[ku], b[1 - ku] = 1, y
        return f(a[0], a[1], b[0], b[1])

    # exact for a polynomial of degree <= 2 per variable with central differences
    gxx = (g(x0 + h, y0) - 2 * g(x0, y0) + g(x0 - h, y0)) / h ** 2
    gyy = (g(x0, y0 + h) - 2 * g(x0, y0) + g(x0, y0 - h)) / h ** 2
    gxy = (g(x0 + h, y0 + h) - g(x0 + h, y0 - h) - g(x0 - h, y0 + h) + g(x0 - h, y0 - h)) / (4 * h * h)
    return gxx * gyy - gxy * gxy


def singular_points(f: Bideg22Form, c1, c2, tol: float = 1e-7) -> list:
    """Common zeros of E and its gradient, labelled by tangency case.

    ``c1``/``c2`` are circles or parametrized conics (the ones f came from)."""
    pc1 = c1 if isinstance(c1, ParametrizedConic) else geom3.circle_parametrization(c1)
    pc2 = c2 if isinstance(c2, ParametrizedConic) else geom3.circle_parametrization(c2)
    e = rationalize_form(f)
    fl = Bideg22Form(tuple(tuple(float(x) for x in r) for r in e.coeff))
    d_st = _discriminant(*e.st_forms())
    d_uv = _discriminant(*e.uv_forms())
    cand_s = _multiple_roots(d_st)
    cand_u = _multiple_roots(d_uv)
    # a vanishing discriminant leaves every fibre point as a candidate
    if not cand_s or not cand_u:
        return []
    pl1, pl2 = pc1.plane_relation(), pc2.plane_relation()
    scale = fl.max_abs()
    found = []
    for xs in cand_s:
        for xu in cand_u:
            st, uv = _homog(xs), _homog(xu)
            val = abs(fl(*st, *uv))
            grad = max(abs(g) for g in fl.gradient(*st, *uv))
            if val > tol * scale or grad > tol * scale:
                continue
            if any(_proj_equal(st, p.st, 1e-6) and _proj_equal(uv, p.uv, 1e-6) for p in found):
                continue
            p = np.asarray(pc1(*st), complex)
            q = np.asarray(pc2(*uv), complex)
            same = _proj_equal(p, q, 1e-6)
            t1 = _tangent_in_plane(pc1, st, pl2, 1e-7)
            t2 = _tangent_in_plane(pc2, uv, pl1, 1e-7)
            if same:
                case = "i" if not (t1 or t2) else ("iii" if (t1 and t2) else "ii")
            elif t1 and t2:
                case = "v"
            elif t1 or t2:
                case = "iv"
            else:
                continue
            hd = _local_hessian_det(fl, st, uv)
            node = abs(hd) > 1e-6 * scale * scale
            real = all(abs(complex(x).imag) <= 1e-9 for x in (*st, *uv))
            found.append(SingularPoint(st, uv, case, "node" if node else "non-node", real))
    return found


# ---------------------------------------------------------------------------
# j-invariant
# ---------------------------------------------------------------------------

def cross_ratio(points: Sequence) -> complex:
    """Cross-ratio of four points of P^1 given as homogeneous pairs."""
    def d(i, j):
        a, b = points[i], points[j]
        return a[0] * b[1] - a[1] * b[0]
    return d(0, 2) * d(1, 3) / (d(1, 2) * d(0, 3))


def j_from_lambda(lam: complex) -> complex:
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def j_from_points(points: Sequence) -> float:
    j = j_from_lambda(cross_ratio(points))
    return float(j.real) if abs(j.imag) <= 1e-9 * max(1.0, abs(j)) else j


def _quartic_points(q) -> list:
    pts = []
    for z, m in polys.form_roots(q):
        pts.extend([_homog(complex(z))] * m)
    return pts


def j_invariant(f: Bideg22Form, projection: str = "st") -> float:
    ct = classify_curve(f)
    if ct.tag != "SmoothGenusOne":
        raise NotSmoothGenusOne(f"curve type is {ct.tag}")
    d_st, d_uv = discriminants(rationalize_form(f))
    pts = _quartic_points((d_st if projection == "st" else d_uv).quartic)
    return j_from_points(pts)


# ---------------------------------------------------------------------------
# real components
# ---------------------------------------------------------------------------

@dataclass
class ComponentTrace:
    count: int
    chains: list  # per component: list of (theta, phi) samples on RP^1 x RP^1
    edges: list  # ((theta_a, phi_a), (theta_b, phi_b)) segments of the real curve
    vertical: list  # theta of (1,0)-components {p} x C2
    horizontal: list  # phi of (0,1)-components C1 x {q}


def _fibre_roots(A, B, C, dtol: float = 1e-14) -> list:
    """Angles phi in [0, pi) of the real roots (cos phi : sin phi) of
    A u^2 + B uv + C v^2; a double root is reported once."""
    scale = max(abs(A), abs(B), abs(C))
    if scale == 0:
        return None
    A, B, C = A / scale, B / scale, C / scale
    disc = B * B - 4 * A * C
    if disc < -dtol:
        return []
    r = math.sqrt(max(disc, 0.0))
    if disc <= dtol:
        pts = [(-B, 2 * A) if abs(A) >= abs(C) else (2 * C, -B)]
    else:
        # stable pair of homogeneous roots
        q = -0.5 * (B + math.copysign(r, B if B != 0 else 1.0))
        pts = [(q, A), (C, q)]
    out = []
    for u, v in pts:
        if u == 0 and v == 0:
            continue
        out.append(math.atan2(v, u) % math.pi)
    return out


def _ang(a: float, b: float) -> float:
    d = (a - b) % math.pi
    return min(d, math.pi - d)


def _theta_roots(q) -> list:
    out = []
    if all(x == 0 for x in q):
        return out
    for z, m in polys.form_roots(q):
        if _is_real(z, 1e-9):
            out.append(0.0 if cmath.isinf(z) else math.atan2(1.0, z.real) % math.pi)
    return out


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, a):
        self.p.setdefault(a, a)
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def real_components(f: Bideg22Form, samples: int = 4096, refine: int = 8) -> ComponentTrace:
    """Count connected components of the real curve in RP^1 x RP^1.

    Fibres over theta (with (s,t) = (cos theta, sin theta)) are solved in
    closed form and consecutive fibres are linked by proximity; intervals
    whose matching is ambiguous are bisected.  Discriminant roots are
    inserted as exact samples so branch points are hit."""
    e = rationalize_form(f)
    fl = e.as_float()
    A, B, C = (np.array([float(x) for x in g]) for g in e.st_forms())
    d_st = _discriminant(*e.st_forms())
    g10 = _gcd_all(e.st_forms())
    g01 = _gcd_all(e.uv_forms())
    vertical = _theta_roots(g10) if len(g10) > 1 else []
    horizontal = _theta_roots(g01) if len(g01) > 1 else []
    special = sorted(set(round(x, 15) for x in _theta_roots(d_st) + vertical))

    def coeffs(th):
        s, t = math.cos(th), math.sin(th)
        S = np.array([s * s, s * t, t * t])
        return float(A @ S), float(B @ S), float(C @ S)

    def roots_at(th):
        a, b, c = coeffs(th)
        if any(_ang(th, v) < 1e-12 for v in vertical):
            # residual fibre: derivative along theta of the coefficients
            h = 1e-6
            a1, b1, c1 = coeffs(th + h)
            a0, b0, c0 = coeffs(th - h)
            r = _fibre_roots((a1 - a0) / (2 * h), (b1 - b0) / (2 * h), (c1 - c0) / (2 * h))
            return r or []
        # on a discriminant root the fibre is double even if rounding says otherwise
        r = _fibre_roots(a, b, c, 1e-9 if any(_ang(th, x) < 1e-12 for x in special) else 1e-14)
        return r if r is not None else []

    base = [math.pi * k / samples for k in range(samples)]
    width = math.pi / samples
    thetas = set(base)
    for x in special:
        thetas.add(x)
        for k in range(-refine, refine + 1):
            thetas.add((x + k * width / refine) % math.pi)
    thetas = sorted(thetas)

    uf = _UF()
    edges = []
    nodes = {}
    for i, th in enumerate(thetas):
        nodes[i] = roots_at(th)
        for j in range(len(nodes[i])):
            uf.find((i, j))

    def link(ta, ra, ka, tb, rb, kb, depth=0):
        """Join the roots ra at ta with rb at tb (node keys ka, kb)."""
        if not ra and not rb:
            return
        if not ra or not rb:
            # a fold between the samples: bisect towards it, then cap it
            full, kf, tf = (ra, ka, ta) if ra else (rb, kb, tb)
            if len(full) == 2 and depth < 40 and tb - ta > 1e-13:
                mid = 0.5 * (ta + tb)
                rm = roots_at(mid)
                km = ("m", mid)
                for j in range(len(rm)):
                    uf.find((km, j))
                link(ta, ra, ka, mid, rm, km, depth + 1)
                link(mid, rm, km, tb, rb, kb, depth + 1)
            elif len(full) == 2:
                uf.union((kf, 0), (kf, 1))
                edges.append(((tf, full[0]), (tf, full[1])))
            return
        if len(ra) == len(rb) == 2:
            straight = _ang(ra[0], rb[0]) + _ang(ra[1], rb[1])
            crossed = _ang(ra[0], rb[1]) + _ang(ra[1], rb[0])
            sep = min(_ang(ra[0], ra[1]), _ang(rb[0], rb[1]))
            move = min(straight, crossed)
            if move > 0.5 * sep and depth < 14 and tb - ta > 1e-13:
                mid = 0.5 * (ta + tb)
                rm = roots_at(mid)
                km = ("m", mid)
                for j in range(len(rm)):
                    uf.find((km, j))
                link(ta, ra, ka, mid, rm, km, depth + 1)
                link(mid, rm, km, tb, rb, kb, depth + 1)
                return
            pairs = [(0, 0), (1, 1)] if straight <= crossed else [(0, 1), (1, 0)]
        elif len(ra) == len(rb):
            pairs = [(0, 0)]
        elif depth < 30 and tb - ta > 1e-13 and max(
                _ang(x, y) for x in ra for y in rb) > 0.02:
            # approaching a branch point: the roots move like a square root
            mid = 0.5 * (ta + tb)
            rm = roots_at(mid)
            km = ("m", mid)
            for j in range(len(rm)):
                uf.find((km, j))
            link(ta, ra, ka, mid, rm, km, depth + 1)
            link(mid, rm, km, tb, rb, kb, depth + 1)
            return
        else:
            # a branch point: every root on one side meets every root on the other
            pairs = [(x, y) for x in range(len(ra)) for y in range(len(rb))]
        for x, y in pairs:
            uf.union((ka, x), (kb, y))
            edges.append(((ta, ra[x]), (tb, rb[y])))

    n = len(thetas)
    for i in range(n):
        j = (i + 1) % n
        tb = thetas[j] + (math.pi if j == 0 else 0.0)
        link(thetas[i], nodes[i], i, tb, nodes[j], j)

    # (1,0)-components and their crossings with the rest of the curve
    for v in vertical:
        key = ("v", v)
        uf.find(key)
        for i, th in enumerate(thetas):
            if _ang(th, v) < 1e-12:
                for j in range(len(nodes[i])):
                    uf.union(key, (i, j))
    groups = {}
    for key in list(uf.p):
        groups.setdefault(uf.find(key), []).append(key)
    chains = []
    for members in groups.values():
        chain = []
        for key in members:
            if key[0] == "v":
                chain.extend((key[1], k * math.pi / 64) for k in range(64))
                continue
            i, j = key
            th = thetas[i] if isinstance(i, int) else i[1]
            rs = nodes[i] if isinstance(i, int) else roots_at(th)
            if j < len(rs):
                chain.append((th, rs[j]))
        chain.sort()
        chains.append(chain)
    for v in vertical:
        for k in range(64):
            a, b = v, (k + 0.5) * math.pi / 64
            edges.append(((a, b - 0.5 * math.pi / 64), (a, b + 0.5 * math.pi / 64)))
    return ComponentTrace(len(chains), chains, edges, vertical, horizontal)


# ---------------------------------------------------------------------------
# prescribed branch points
# ---------------------------------------------------------------------------

def _tangent_meet(c1: Circle, a: float, b: float) -> np.ndarray:
    pa, pb = c1.point(a), c1.point(b)
    ta, tb = c1.tangent(a), c1.tangent(b)
    m = np.column_stack([ta, -tb])
    sol, *_ = np.linalg.lstsq(m, pb - pa, rcond=None)
    if abs(float(np.cross(ta, tb) @ np.asarray(c1.normal, float))) < 1e-12:
        raise DegenerateConfiguration("tangent lines are parallel")
    return pa + sol[0] * ta


def circle_with_branch_points(c1: Circle, params: Sequence, partition=((0, 1), (2, 3)),
                              plane_pick: float = math.pi / 2) -> Circle:
    """A circle C2 whose edge curve with c1 branches (over C1) at the four
    given parameters.  ``params`` are (s, t) pairs; C2 has diameter pq where
    p, q are the meeting points of the paired tangent lines, in the plane
    through pq tilted by ``plane_pick`` radians out of the plane of c1."""
    if len(params) != 4:
        raise ValueError("four parameters are required")
    angles = [geom3.param_to_angle(*p) for p in params]
    for x, y in itertools.combinations(angles, 2):
        if _ang(x / 2, y / 2) < 1e-12:
            raise DegenerateConfiguration("parameters must be distinct")
    (i, j), (k, l) = partition
    p = _tangent_meet(c1, angles[i], angles[j])
    q = _tangent_meet(c1, angles[k], angles[l])
    d = q - p
    dist = float(np.linalg.norm(d))
    if dist < 1e-12:
        raise DegenerateConfiguration("the two tangent meeting points coincide")
    d = d / dist
    n1 = np.asarray(c1.normal, float)
    m = np.cross(n1, d)
    inplane = math.cos(plane_pick) * m + math.sin(plane_pick) * n1
    normal = np.cross(d, inplane)
    normal = normal / np.linalg.norm(normal)
    if abs(float(normal @ n1)) > 1 - 1e-12:
        raise DegenerateConfiguration("plane_pick leaves C2 in the plane of C1")
    return Circle(tuple((p + q) / 2), dist / 2, tuple(normal))
