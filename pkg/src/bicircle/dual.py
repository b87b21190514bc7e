"""The dual body of K = conv(C1 u C2).

A plane is written {x : w.(x - o) + 1 = 0} for an interior origin o, so
w = 0 is the plane at infinity.  The plane misses the interior of K
exactly when, for both discs, w.(c - o) + 1 >= r |w - (w.n) n|.  Each
equality surface is one nappe of the quadratic cone dual to a circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import edge, geom3
from .geom3 import Circle, GeometryError
from .hull import Hull, RuledMesh, _arr


class OriginNotInterior(GeometryError):
    code = "origin_not_interior"


class NotOnBoundary(GeometryError):
    code = "not_on_boundary"


@dataclass(frozen=True)
class DualCone:
    """Qd(w) = (w.d + 1)^2 - r^2 |w - (w.n) n|^2 with d = center - o, kept
    as a symmetric 4x4 matrix acting on (a, b, c, 1)."""

    matrix: tuple
    origin: tuple
    circle: Circle
    is_cylinder: bool

    def __call__(self, w):
        x = (*w, 1)
        return sum(self.matrix[i][j] * x[i] * x[j] for i in range(4) for j in range(4))

    @property
    def vertex(self) -> Optional[tuple]:
        """The plane of the circle in dual coordinates (None at infinity)."""
        if self.is_cylinder:
            return None
        n = self.circle.normal
        k = geom3.dot(n, geom3.sub(self.circle.center, self.origin))
        return tuple(-x / k for x in n)

    def residual(self, W: np.ndarray) -> np.ndarray:
        """Signed slack of the nappe inequality (>= 0 on the member side)."""
        c, r, n, _, _ = _arr(self.circle.as_float())
        d = c - np.asarray([float(x) for x in self.origin])
        W = np.atleast_2d(W)
        proj = W - np.outer(W @ n, n)
        return W @ d + 1.0 - r * np.linalg.norm(proj, axis=1)


def dual_cone(c: Circle, o) -> DualCone:
    o = geom3.vec(o)
    exact = c.exact and geom3._is_exact(*o)
    if not exact:
        c, o = c.as_float(), tuple(float(x) for x in o)
    d = geom3.sub(c.center, o)
    n, r2 = c.normal, c.radius * c.radius
    one = Fraction(1) if exact else 1.0
    M = [[0 * one] * 4 for _ in range(4)]
    for i in range(3):
        for j in range(3):
            M[i][j] = d[i] * d[j] - r2 * ((one if i == j else 0 * one) - n[i] * n[j])
        M[i][3] = M[3][i] = d[i]
    M[3][3] = one
    k = geom3.dot(n, d)
    cyl = (k == 0) if exact else abs(k) <= geom3.TOL
    return DualCone(tuple(tuple(row) for row in M), o, c, cyl)


@dataclass
class DualBody:
    cones: tuple
    origin: tuple
    rho: float  # every member has |w| <= rho
    inradius: float

    def residuals(self, W) -> np.ndarray:
        W = np.atleast_2d(np.asarray(W, float))
        return np.stack([k.residual(W) for k in self.cones], axis=1)

    def contains(self, W, tol: float = 1e-12) -> np.ndarray:
        return self.residuals(W).min(axis=1) >= -tol

    def to_json(self) -> dict:
        def num(x):
            return {"exact": str(x), "float": f"{float(x):.17g}"} if isinstance(x, Fraction) \
                else {"float": f"{float(x):.17g}"}
        return {"origin": [f"{float(x):.17g}" for x in self.origin],
                "rho": f"{self.rho:.17g}", "inradius": f"{self.inradius:.17g}",
                "cones": [{"matrix": [[num(x) for x in row] for row in k.matrix],
                           "is_cylinder": k.is_cylinder,
                           "vertex": None if k.vertex is None else [num(x) for x in k.vertex]}
                          for k in self.cones]}


def chebyshev_point(c1: Circle, c2: Circle, hull: Optional[Hull] = None) -> np.ndarray:
    """Center of a largest ball inside K."""
    from scipy.optimize import minimize
    H = hull or Hull(c1.as_float(), c2.as_float(), ridge_samples=1024)
    f = lambda x: float(H.signed_distance(x[None, :])[0][0])  # noqa: E731
    a1, a2 = _arr(c1.as_float()), _arr(c2.as_float())
    x0 = 0.5 * (a1[0] + a2[0])
    res = minimize(f, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
    return res.x if res.fun < f(x0) else x0


def dual_body(c1: Circle, c2: Circle, o="auto", tol: float = 1e-9) -> DualBody:
    H = Hull(c1.as_float(), c2.as_float(), ridge_samples=1024)
    if isinstance(o, str):
        if o != "auto":
            raise ValueError("origin must be 'auto' or a point")
        a1, a2 = _arr(c1.as_float()), _arr(c2.as_float())
        mid = 0.5 * (a1[0] + a2[0])
        if H.signed_distance(mid[None, :])[0][0] < -tol:
            # keep the midpoint exact when the centers are
            o = tuple(Fraction(a + b) / 2 for a, b in zip(c1.center, c2.center)) \
                if c1.exact and c2.exact else tuple(mid)
        else:
            o = tuple(chebyshev_point(c1, c2, H))
    o = geom3.vec(o)
    sd = float(H.signed_distance(np.array([[float(x) for x in o]]))[0][0])
    if not sd < -tol:
        raise OriginNotInterior(f"origin is not interior to K (signed distance {sd:.3g})")
    R = -sd
    return DualBody((dual_cone(c1, o), dual_cone(c2, o)), o, 1.0 / R, R)


@dataclass
class DualBoundaryPoint:
    kind: str  # "C1" | "C2" | "both" | "vertex C1" | "vertex C2"
    residuals: tuple
    contacts: list = field(default_factory=list)  # touching points on the circles
    edge_residual: Optional[float] = None


def _contact(c: Circle, w: np.ndarray) -> np.ndarray:
    """Point of the circle minimizing w.x."""
    cc, r, n, _, _ = _arr(c.as_float())
    proj = w - (w @ n) * n
    return cc - r * proj / np.linalg.norm(proj)


def dual_boundary_classify(db: DualBody, w, tol: float = 1e-9) -> DualBoundaryPoint:
    w = np.asarray(w, float)
    g = db.residuals(w)[0]
    if g.min() < -tol or g.min() > tol:
        raise NotOnBoundary(f"w is not on the dual boundary (residuals {g[0]:.3g}, {g[1]:.3g})")
    active = [i for i in range(2) if abs(g[i]) <= tol]
    res = tuple(float(x) for x in g)
    for i in active:
        c = db.cones[i].circle.as_float()
        n = np.asarray(c.normal, float)
        if np.linalg.norm(w - (w @ n) * n) <= tol * max(1.0, np.linalg.norm(w)):
            return DualBoundaryPoint(f"vertex C{i + 1}", res)
    if len(active) == 1:
        i = active[0]
        return DualBoundaryPoint(f"C{i + 1}", res, [_contact(db.cones[i].circle, w)])
    c1, c2 = (k.circle for k in db.cones)
    p, q = _contact(c1, w), _contact(c2, w)
    E = edge.edge_form_of_circles(c1.rationalized(), c2.rationalized()).as_float()
    st = geom3.angle_to_param(c1.rationalized().angle_of(p))
    uv = geom3.angle_to_param(c2.rationalized().angle_of(q))
    S = np.array([st[0] ** 2, st[0] * st[1], st[1] ** 2])
    U = np.array([uv[0] ** 2, uv[0] * uv[1], uv[1] ** 2])
    resid = abs(float(S @ E @ U)) / np.abs(E).max()
    return DualBoundaryPoint("both", res, [p, q], resid)


def _sphere_grid(n: int) -> tuple:
    """Latitude-longitude directions with shared poles, and triangles."""
    m = max(4, n // 2)
    lon = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    lat = np.linspace(0.0, math.pi, m + 1)[1:-1]
    dirs = [np.array([0.0, 0.0, 1.0])]
    for phi in lat:
        ring = np.stack([np.sin(phi) * np.cos(lon), np.sin(phi) * np.sin(lon),
                         np.full(n, np.cos(phi))], axis=1)
        dirs.extend(ring)
    dirs.append(np.array([0.0, 0.0, -1.0]))
    D = np.array(dirs)
    south = len(D) - 1
    idx = lambda i, j: 1 + i * n + (j % n)  # noqa: E731
    tris = []
    for j in range(n):
        tris.append((0, idx(0, j), idx(0, j + 1)))
        tris.append((south, idx(len(lat) - 1, j + 1), idx(len(lat) - 1, j)))
    for i in range(len(lat) - 1):
        for j in range(n):
            a, b, c, d = idx(i, j), idx(i, j + 1), idx(i + 1, j + 1), idx(i + 1, j)
            tris.append((a, d, c))
            tris.append((a, c, b))
    return D, np.array(tris, int)


def dual_mesh(db: DualBody, n: int = 64) -> RuledMesh:
    """Triangulate the boundary of the dual body: each direction is scaled
    to the boundary in closed form, since the residuals are affine along
    rays (1 + t (d.(c - o) - r |proj d|))."""
    if n < 16:
        raise ValueError("resolution must be at least 16")
    D, T = _sphere_grid(n)
    slope = db.residuals(D) - 1.0  # residual(t d) = 1 + t * slope
    with np.errstate(divide="ignore"):
        t = np.where(slope < 0, -1.0 / slope, np.inf)
    tmin = t.min(axis=1)
    V = D * tmin[:, None]
    owner = np.argmin(t, axis=1)
    both = np.abs(t[:, 0] - t[:, 1]) <= 1e-9 * tmin
    tags = []
    groups = {"dual_C1": [], "dual_C2": []}
    for k, (a, b, c) in enumerate(T):
        o = owner[[a, b, c]]
        g = 0 if (o == 0).sum() >= 2 else 1
        tags.append(f"C{g + 1}")
        groups[f"dual_C{g + 1}"].append(k)
    mesh = RuledMesh(V, T, tags, groups)
    mesh.vertex_tags = ["both" if both[i] else f"C{owner[i] + 1}" for i in range(len(V))]
    return mesh


def patch_census(mesh: RuledMesh) -> dict:
    """Connected patches per tag (triangles sharing an edge)."""
    out = {}
    for tag in sorted(set(mesh.tags)):
        ids = [k for k, x in enumerate(mesh.tags) if x == tag]
        parent = {k: k for k in ids}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a
        by_edge = {}
        for k in ids:
            a, b, c = mesh.triangles[k]
            for e in ((a, b), (b, c), (c, a)):
                key = (min(e), max(e))
                if key in by_edge:
                    parent[find(k)] = find(by_edge[key])
                else:
                    by_edge[key] = k
        out[tag] = len({find(k) for k in ids})
    return out
