"""The convex hull K = conv(C1 ∪ C2): stationary bisecants, support
function, membership, line sections of the edge surface and a boundary
mesh."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from . import edge, geom3, polys
from .geom3 import Circle, GeometryError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class ZeroDirection(GeometryError):
    code = "zero_direction"


class NotOnEdgeCurve(GeometryError):
    code = "not_on_edge_curve"


class DegenerateLine(GeometryError):
    code = "degenerate_line"


def _arr(c: Circle) -> tuple:
    u, v = c.axes()
    f = lambda a: np.asarray([float(x) for x in a])  # noqa: E731
    return f(c.center), float(c.radius), f(c.normal), f(u), f(v)


# ---------------------------------------------------------------------------
# stationary bisecants
# ---------------------------------------------------------------------------

@dataclass
class BisecantFan:
    variant: str  # "TwoReal" | "OneReal" | "NoneReal" | "Pencil"
    param: tuple
    p: np.ndarray
    points: list = field(default_factory=list)  # tangency points q on C2 (complex if NoneReal)
    params: list = field(default_factory=list)  # (u, v) of each q

    def to_json(self) -> dict:
        enc = lambda z: f"{z.real:.17g}" if abs(complex(z).imag) == 0 else [f"{complex(z).real:.17g}", f"{complex(z).imag:.17g}"]  # noqa: E731,E501
        return {"variant": self.variant, "p": [f"{x:.17g}" for x in self.p],
                "points": [[enc(complex(x)) for x in q] for q in self.points],
                "params": [[enc(complex(x)) for x in uv] for uv in self.params]}


def _angle_param(phi) -> tuple:
    """(u, v) = (cos phi/2, sin phi/2), real or complex."""
    return (cmath.cos(phi / 2), cmath.sin(phi / 2)) if isinstance(phi, complex) \
        else (math.cos(phi / 2), math.sin(phi / 2))


def stationary_bisecants_through(c1: Circle, c2: Circle, param, tol: float = 1e-12) -> BisecantFan:
    """Bisecants through p = C1(param) that are stationary: the tangent
    lines to C2 from the point where T_pC1 meets the plane of C2."""
    s, t = param
    if s == 0 and t == 0:
        raise geom3.ZeroParameter("(0:0)")
    theta = geom3.param_to_angle(s, t)
    a1, a2 = _arr(c1), _arr(c2)
    cc1, r1, n1, u1, v1 = a1
    cc2, r2, n2, u2, v2 = a2
    p = cc1 + r1 * (math.cos(theta) * u1 + math.sin(theta) * v1)
    d = -math.sin(theta) * u1 + math.cos(theta) * v1
    o2 = float(n2 @ cc2)
    nd, off = float(n2 @ d), float(n2 @ p) - o2
    scale = max(1.0, float(np.linalg.norm(p)), float(np.linalg.norm(cc2)))
    if abs(nd) <= tol:
        if abs(off) <= 1e-12 * scale:
            return BisecantFan("Pencil", tuple(param), p)
        # tangent parallel to Pi2: C2's tangents parallel to d
        w = np.cross(n2, d)
        w /= np.linalg.norm(w)
        qs = [cc2 + r2 * w, cc2 - r2 * w]
        return BisecantFan("TwoReal", tuple(param), p, qs, [_param_of(c2, q) for q in qs])
    tau = -off / nd
    qt = p + tau * d
    a = qt - cc2
    a -= (a @ n2) * n2
    rho = float(np.linalg.norm(a))
    if rho < 1e-300:
        # q~ at the centre of C2: the tangency points are at infinity
        return BisecantFan("NoneReal", tuple(param), p, [], [])
    ahat = a / rho
    bhat = np.cross(n2, ahat)
    k = r2 / rho
    disc = 1.0 - k * k
    if abs(disc) <= 1e-12:
        q = cc2 + r2 * ahat
        return BisecantFan("OneReal", tuple(param), p, [q], [_param_of(c2, q)])
    if disc > 0:
        root = math.sqrt(disc)
        qs = [cc2 + r2 * (k * ahat + root * bhat), cc2 + r2 * (k * ahat - root * bhat)]
        return BisecantFan("TwoReal", tuple(param), p, qs, [_param_of(c2, q) for q in qs])
    root = 1j * math.sqrt(-disc)
    qs = [cc2 + r2 * (k * ahat + root * bhat), cc2 + r2 * (k * ahat - root * bhat)]
    # complex angle phi with cos/sin matching in the frame of C2
    params = []
    for q in qs:
        x = (q - cc2) / r2
        cphi, sphi = complex(x @ u2), complex(x @ v2)
        phi = -1j * cmath.log(cphi + 1j * sphi)
        params.append(_angle_param(phi))
    return BisecantFan("NoneReal", tuple(param), p, qs, params)


def _param_of(c: Circle, q) -> tuple:
    return geom3.angle_to_param(c.angle_of(q))


def _tangent_dir(c: Circle, param) -> tuple:
    theta = geom3.param_to_angle(*param)
    return c.point(theta), c.tangent(theta)


def _support_np(a: tuple, w: np.ndarray) -> np.ndarray:
    """Support of a disc in directions w (shape (..., 3))."""
    c, r, n, _, _ = a
    proj = w - (w @ n)[..., None] * n
    return w @ c + r * np.linalg.norm(proj, axis=-1)


def is_boundary_bisecant(c1: Circle, c2: Circle, pq, tol: float = 1e-9) -> bool:
    """Whether the plane spanned by T_pC1 and T_qC2 supports K."""
    (p, d1), (q, d2) = _tangent_dir(c1, pq[0]), _tangent_dir(c2, pq[1])
    pq_vec = q - p
    scale = max(1.0, float(np.linalg.norm(pq_vec)))
    res = float(np.linalg.det(np.array([d1, d2, pq_vec]))) / scale
    if abs(res) > tol:
        raise NotOnEdgeCurve(f"tangent lines do not meet (residual {res:.3g})")
    w = np.cross(d1, d2)
    if np.linalg.norm(w) < 1e-9:
        w = np.cross(d1, pq_vec)
    if np.linalg.norm(w) < 1e-12:
        return False
    w /= np.linalg.norm(w)
    a1, a2 = _arr(c1), _arr(c2)
    for sgn in (1.0, -1.0):
        ww = sgn * w
        off = float(ww @ p)
        if _support_np(a1, ww) <= off + tol and _support_np(a2, ww) <= off + tol:
            return True
    return False


# ---------------------------------------------------------------------------
# support function
# ---------------------------------------------------------------------------

@dataclass
class SupportResult:
    value: float
    attained_by: tuple  # circle indices (1 and/or 2)
    points: list  # argmax points
    face: str  # "exposed point" | "bisecant segment" | "2-face"
    values: tuple  # (h1, h2)

    def to_json(self) -> dict:
        return {"value": f"{self.value:.17g}", "attained_by": list(self.attained_by),
                "points": [[f"{x:.17g}" for x in p] for p in self.points],
                "face": self.face, "values": [f"{x:.17g}" for x in self.values]}


def _disc_support(c: Circle, w) -> tuple:
    """(value, argmax point or None when w is normal to the disc)."""
    cc, r, n, _, _ = _arr(c)
    proj = w - (w @ n) * n
    pn = float(np.linalg.norm(proj))
    if pn <= 1e-12 * max(1.0, float(np.linalg.norm(w))):
        return float(w @ cc), None
    return float(w @ cc) + r * pn, cc + r * proj / pn


def support(c1: Circle, c2: Circle, w, tol: float = 1e-12) -> SupportResult:
    w = np.asarray(w, float)
    if not np.any(w):
        raise ZeroDirection("support needs a nonzero direction")
    h1, x1 = _disc_support(c1, w)
    h2, x2 = _disc_support(c2, w)
    h = max(h1, h2)
    scale = max(1.0, abs(h)) * tol
    by = tuple(i + 1 for i, v in enumerate((h1, h2)) if v >= h - scale)
    pts, flat = [], False
    for i, x, c in ((1, x1, c1), (2, x2, c2)):
        if i in by:
            if x is None:
                flat = True
                pts.append(np.asarray([float(v) for v in c.center]))
            else:
                pts.append(x)
    if flat:
        face = "2-face"
    elif len(by) == 2 and np.linalg.norm(pts[0] - pts[1]) > 1e-12:
        face = "bisecant segment"
    else:
        face = "exposed point"
    return SupportResult(h, by, pts, face, (h1, h2))


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def golden_min(F, lo: np.ndarray, hi: np.ndarray, iters: int, width: float = 0.0) -> tuple:
    """Vectorized golden-section search for minima of unimodal F on
    [lo, hi]; returns the final brackets."""
    lo, hi = lo.copy(), hi.copy()
    m1 = hi - GOLDEN * (hi - lo)
    m2 = lo + GOLDEN * (hi - lo)
    f1, f2 = F(m1), F(m2)
    for _ in range(iters):
        left = f1 <= f2
        hi = np.where(left, m2, hi)
        lo = np.where(left, lo, m1)
        new = np.where(left, hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo))
        fn = F(new)
        m1, m2 = np.where(left, new, m2), np.where(left, m1, new)
        f1, f2 = np.where(left, fn, f2), np.where(left, f1, fn)
        if np.all(hi - lo <= width):
            break
    return lo, hi


def _proj_disc(y: np.ndarray, c, r, n) -> np.ndarray:
    """Project points y (N,3) to discs with centres c (N,3), radii r (N,)."""
    d = y - c
    d = d - (d @ n)[:, None] * n
    nrm = np.linalg.norm(d, axis=1)
    f = np.where(nrm > r, r / np.maximum(nrm, 1e-300), 1.0)
    return c + d * f[:, None]


def _minkowski_dist(x: np.ndarray, lam: np.ndarray, a1, a2, iters: int = 10_000,
                    eps: float = 1e-12) -> tuple:
    """dist(x, lam D1 + (1-lam) D2) by alternating (block) projection."""
    c1, r1, n1, _, _ = a1
    c2, r2, n2, _, _ = a2
    mu = 1.0 - lam
    y2 = mu[:, None] * c2
    y1 = lam[:, None] * c1
    C1, C2 = lam[:, None] * c1, mu[:, None] * c2
    R1, R2 = lam * r1, mu * r2
    active = np.ones(len(x), bool)
    for _ in range(iters):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        ny1 = _proj_disc(x[idx] - y2[idx], C1[idx], R1[idx], n1)
        ny2 = _proj_disc(x[idx] - ny1, C2[idx], R2[idx], n2)
        change = np.maximum(np.abs(ny1 - y1[idx]).max(axis=1), np.abs(ny2 - y2[idx]).max(axis=1))
        y1[idx], y2[idx] = ny1, ny2
        active[idx[change <= eps]] = False
    diff = x - y1 - y2
    return np.linalg.norm(diff, axis=1), y1 + y2


def hull_distance(c1: Circle, c2: Circle, pts, iters: int = 10_000) -> tuple:
    """Distance from each point to K and the nearest point found; golden
    section over the mixing weight (the distance is convex in it)."""
    x = np.atleast_2d(np.asarray(pts, float))
    a1, a2 = _arr(c1), _arr(c2)
    F = lambda lam: _minkowski_dist(x, lam, a1, a2, iters)[0]  # noqa: E731
    lo, hi = golden_min(F, np.zeros(len(x)), np.ones(len(x)), 60, 1e-10)
    lam = 0.5 * (lo + hi)
    ends = [np.zeros(len(x)), np.ones(len(x)), lam]
    best_d = np.full(len(x), np.inf)
    best_y = np.zeros_like(x)
    for l in ends:
        d, y = _minkowski_dist(x, l, a1, a2, iters)
        better = d < best_d
        best_d = np.where(better, d, best_d)
        best_y[better] = y[better]
    return best_d, best_y


class Hull:
    """K with cached data for repeated support and membership queries."""

    def __init__(self, c1: Circle, c2: Circle, ridge_samples: int = 4096):
        self.c1, self.c2 = c1, c2
        self.a1, self.a2 = _arr(c1), _arr(c2)
        self.ridge_samples = ridge_samples
        self._ridge = None

    # -- support ----------------------------------------------------------
    def h(self, w: np.ndarray) -> np.ndarray:
        return np.maximum(_support_np(self.a1, w), _support_np(self.a2, w))

    # -- common supporting planes ----------------------------------------
    def _ridge_at(self, theta: np.ndarray, which: int) -> np.ndarray:
        """Unit normals of planes tangent to circle ``which`` at angle theta
        and tangent to the other circle, oriented as common supports.
        Returns shape (len(theta), 2, 3) with NaN for missing ones."""
        A, B = (self.a1, self.a2) if which == 0 else (self.a2, self.a1)
        c, r, n, u, v = A
        c2, r2, n2, u2, v2 = B
        ct, st = np.cos(theta), np.sin(theta)
        p = c + r * (ct[:, None] * u + st[:, None] * v)
        d = -st[:, None] * u + ct[:, None] * v
        nd = d @ n2
        off = p @ n2 - n2 @ c2
        out = np.full((len(theta), 2, 3), np.nan)
        with np.errstate(divide="ignore", invalid="ignore"):
            tau = -off / nd
            qt = p + tau[:, None] * d
            a = qt - c2
            a = a - (a @ n2)[:, None] * n2
            rho = np.linalg.norm(a, axis=1)
            ahat = a / rho[:, None]
            bhat = np.cross(n2, ahat)
            k = r2 / rho
            disc = 1.0 - k * k
            root = np.sqrt(np.where(disc >= 0, disc, np.nan))
            par = np.abs(nd) < 1e-12
            wpar = np.cross(n2, d)
            wpar = wpar / np.linalg.norm(wpar, axis=1)[:, None]
            for b, sgn in enumerate((1.0, -1.0)):
                q = c2 + r2 * (k[:, None] * ahat + sgn * root[:, None] * bhat)
                q = np.where(par[:, None], c2 + sgn * r2 * wpar, q)
                w = np.cross(d, q - p)
                nrm = np.linalg.norm(w, axis=1)
                w = w / nrm[:, None]
                # orient so that p is the maximizer on its circle
                s = np.sign(np.einsum("ij,ij->i", w, p - c))
                w = w * np.where(s == 0, 1.0, s)[:, None]
                ok = np.einsum("ij,ij->i", w, q - c2) >= -1e-12
                out[:, b] = np.where(ok[:, None], w, np.nan)
        return out

    def ridge(self) -> tuple:
        if self._ridge is None:
            th = np.linspace(0.0, 2 * math.pi, self.ridge_samples, endpoint=False)
            self._ridge = (th, self._ridge_at(th, 0), self._ridge_at(th, 1))
        return self._ridge

    # -- signed distance ---------------------------------------------------
    def signed_distance(self, pts, refine: int = 60, chunk: int = 512) -> tuple:
        """max over unit w of w.x - h(w): the signed distance to the
        boundary of K (negative inside).  Returns (sd, maximizing w)."""
        x = np.atleast_2d(np.asarray(pts, float))
        out = np.empty(len(x))
        wout = np.empty_like(x)
        for k in range(0, len(x), chunk):
            out[k:k + chunk], wout[k:k + chunk] = self._sd_chunk(x[k:k + chunk], refine)
        return out, wout

    def _candidates(self, x: np.ndarray) -> np.ndarray:
        cands = [np.broadcast_to(s * a[2], x.shape) for a in (self.a1, self.a2) for s in (1.0, -1.0)]
        for a in (self.a1, self.a2):
            c, r, n, _, _ = a
            d = x - c
            d = d - (d @ n)[:, None] * n
            nrm = np.linalg.norm(d, axis=1)
            nearest = c + r * d / np.maximum(nrm, 1e-300)[:, None]
            w = x - nearest
            nw = np.linalg.norm(w, axis=1)
            cands.append(np.where(nw[:, None] > 1e-300, w / np.maximum(nw, 1e-300)[:, None], a[2]))
        return np.stack(cands, axis=1)  # (N, k, 3)

    def _g(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        return np.einsum("...j,...j->...", w, x) - self.h(w)

    def _sd_chunk(self, x: np.ndarray, refine: int) -> tuple:
        n = len(x)
        cand = self._candidates(x)
        g = self._g(x[:, None, :], cand)
        best = g.max(axis=1)
        bw = cand[np.arange(n), g.argmax(axis=1)]
        th, r0, r1 = self.ridge()
        ridge_info = []
        for which, R in ((0, r0), (1, r1)):
            flat = R.reshape(-1, 3)  # (T*2, 3)
            valid = ~np.isnan(flat[:, 0])
            W = flat[valid]
            if len(W) == 0:
                continue
            ids = np.nonzero(valid)[0]
            gv = x @ W.T - self.h(W)[None, :]
            j = gv.argmax(axis=1)
            gbest = gv[np.arange(n), j]
            ridge_info.append((which, gbest, ids[j] // 2))
            better = gbest > best
            best = np.where(better, gbest, best)
            bw[better] = W[j[better]]
        # golden refinement along the ridge parametrization
        step = 2 * math.pi / len(th)
        for which, gbest, tidx in ridge_info:
            lo = th[tidx] - step
            hi = th[tidx] + step
            lo, hi = golden_min(lambda t: -self._ridge_best(x, t, which)[0], lo, hi, refine)
            f1, w1 = self._ridge_best(x, 0.5 * (lo + hi), which)
            f2, w2 = self._ridge_best(x, lo, which)
            for f, w in ((f1, w1), (f2, w2)):
                better = f > best
                best = np.where(better, f, best)
                bw[better] = w[better]
        return best, bw

    def _ridge_best(self, x: np.ndarray, t: np.ndarray, which: int) -> tuple:
        R = self._ridge_at(t, which)  # (N, 2, 3)
        g = np.einsum("nj,nkj->nk", x, np.nan_to_num(R)) - self.h(np.nan_to_num(R))
        g = np.where(np.isnan(R[:, :, 0]), -np.inf, g)
        k = g.argmax(axis=1)
        return g[np.arange(len(x)), k], R[np.arange(len(x)), k]

    # -- verdicts ----------------------------------------------------------
    def membership(self, pts, tol: float = 1e-7) -> list:
        x = np.atleast_2d(np.asarray(pts, float))
        dist, near = hull_distance(self.c1, self.c2, x)
        sd, wbest = self.signed_distance(x)
        out = []
        for i in range(len(x)):
            if dist[i] > tol:
                w = x[i] - near[i]
                w = w / np.linalg.norm(w)
                cert = self._certify(x[i], w, wbest[i])
                out.append(Membership("outside", float(dist[i]), float(sd[i]), cert))
            elif sd[i] >= -tol:
                out.append(Membership("boundary", float(dist[i]), float(sd[i]), None))
            else:
                out.append(Membership("inside", float(dist[i]), float(sd[i]), None))
        return out

    def _certify(self, x, w, w_alt) -> Optional[dict]:
        for cand in (w, w_alt):
            h = float(self.h(cand[None, :])[0])
            if float(cand @ x) > h:
                return {"direction": cand, "support": h, "value": float(cand @ x)}
        return None


@dataclass
class Membership:
    verdict: str  # "inside" | "boundary" | "outside"
    distance: float
    signed_distance: float
    certificate: Optional[dict]

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "distance": f"{self.distance:.17g}",
               "signed_distance": f"{self.signed_distance:.17g}"}
        if self.certificate is not None:
            c = self.certificate
            out["certificate"] = {"direction": [f"{v:.17g}" for v in c["direction"]],
                                  "support": f"{c['support']:.17g}", "value": f"{c['value']:.17g}"}
        return out


def membership(c1: Circle, c2: Circle, x, tol: float = 1e-7) -> Membership:
    return Hull(c1, c2).membership([x], tol)[0]


# ---------------------------------------------------------------------------
# line sections of the edge surface
# ---------------------------------------------------------------------------

@dataclass
class LineSection:
    total_with_multiplicity: int
    real_count: int  # real roots counted with multiplicity
    real_points: list  # dicts with st, uv and the point on the line
    resultant: tuple  # binary form in (s, t)
    removed: tuple  # (a, b): numbers of (1,0) and (0,1) components removed

    def to_json(self) -> dict:
        f = lambda v: [f"{x:.17g}" for x in v]  # noqa: E731
        return {"total_with_multiplicity": self.total_with_multiplicity,
                "real_count": self.real_count,
                "degree_drop": 8 - self.total_with_multiplicity,
                "removed_linear_components": list(self.removed),
                "real_points": [{"st": f(p["st"]), "uv": f(p["uv"]), "point": f(p["point"]),
                                 "multiplicity": p["multiplicity"]} for p in self.real_points]}


def incidence_form(pc1, pc2, A, B) -> edge.Bideg22Form:
    """det[f1(s,t); f2(u,v); (1,A); (1,B)]: the secant through f1 and f2
    meets the line AB."""
    P = (1, *A)
    Q = (1, *B)
    grid = [[0, 0, 0] for _ in range(3)]
    for j in range(4):
        for k in range(4):
            if j == k:
                continue
            l, m = [x for x in range(4) if x not in (j, k)]
            # sign of the permutation (j, k, l, m)
            perm = [j, k, l, m]
            inv = sum(1 for a in range(4) for b in range(a + 1, 4) if perm[a] > perm[b])
            sgn = -1 if inv % 2 else 1
            minor = P[l] * Q[m] - P[m] * Q[l]
            if minor == 0:
                continue
            for i in range(3):
                for jj in range(3):
                    grid[i][jj] += sgn * minor * pc1.forms[j][i] * pc2.forms[k][jj]
    return edge.Bideg22Form(tuple(tuple(r) for r in grid))


def _uv_coeffs_at(f: edge.Bideg22Form, s, t, deg_uv: int = 2) -> tuple:
    """Coefficients in (u, v) of f(s, t, ., .)."""
    S = (s * s, s * t, t * t)
    return tuple(sum(f.coeff[i][j] * S[i] for i in range(3)) for j in range(3))


def _strip_linear(f: edge.Bideg22Form) -> tuple:
    """Divide out the (1,0)- and (0,1)-components.  Returns a callable
    giving the residual's (u,v)-coefficients at (s, t) and the numbers
    (a, b) of removed components, with the residual degrees."""
    g10 = edge._gcd_all(f.st_forms())
    g01 = edge._gcd_all(f.uv_forms())
    a, b = len(g10) - 1, len(g01) - 1
    # residual coefficients: for each (u,v)-monomial of degree 2-b, a form
    # of degree 2-a in (s,t)
    cols = f.st_forms()  # A, B, C as forms in (s,t)
    if a:
        cols = tuple(polys.form_divexact(polys.form(c), g10) if any(c) else (Fraction(0),) * (3 - a)
                     for c in cols)
    else:
        cols = tuple(polys.form(c) for c in cols)
    # cols[j] multiplies u^(2-j) v^j; now divide by g01 in (u, v)
    if b:
        res_cols = []
        # treat as a form in (u, v) with polynomial coefficients: divide by
        # evaluation at enough (s,t) points and interpolate
        d = 2 - a
        vals = []
        for k in range(d + 1):
            coeffs = tuple(polys.form_eval(c, Fraction(k), Fraction(1)) for c in cols)
            vals.append(polys.form_divexact(coeffs, g01) if any(coeffs) else (Fraction(0),) * (3 - b))
        for j in range(3 - b):
            res_cols.append(polys.interpolate_form([v[j] for v in vals], d))
        cols = tuple(res_cols)
    return cols, a, b


def line_section_count(c1: Circle, c2: Circle, A, B) -> LineSection:
    """Points where the line through A and B meets the edge surface,
    counted through the resultant in (u, v) of the edge form and the
    incidence form."""
    e1, e2 = c1.rationalized(), c2.rationalized()
    A = tuple(geom3.snap(geom3.as_scalar(x)) if not isinstance(x, Fraction) else x for x in A)
    B = tuple(geom3.snap(geom3.as_scalar(x)) if not isinstance(x, Fraction) else x for x in B)
    if A == B:
        raise DegenerateLine("the two points coincide")
    pc1, pc2 = geom3.circle_parametrization(e1), geom3.circle_parametrization(e2)
    E = edge.edge_form(pc1, pc2)
    M = incidence_form(pc1, pc2, A, B)
    cols, a, b = _strip_linear(E)
    D = 8 - 2 * a - 2 * b
    mcols = [polys.form(c) for c in M.st_forms()]
    vals = []
    for k in range(D + 1):
        r = tuple(polys.form_eval(c, Fraction(k), Fraction(1)) for c in cols)
        m = tuple(polys.form_eval(c, Fraction(k), Fraction(1)) for c in mcols)
        vals.append(polys.form_resultant(r, m))
    res = polys.interpolate_form(vals, D)
    if polys.form_is_zero(res):
        raise DegenerateLine("the line meets the edge surface in a curve")
    roots = polys.form_roots(res)
    Ef = E.as_float()
    Mf = M.as_float()
    pts = []
    real_count = 0
    for z, mult in roots:
        if not (np.isinf(z.real) or abs(z.imag) <= 1e-9 * max(1.0, abs(z))):
            continue
        real_count += mult
        st = (1.0, 0.0) if np.isinf(z.real) else (z.real, 1.0)
        nrm = math.hypot(*st)
        st = (st[0] / nrm, st[1] / nrm)
        S = np.array([st[0] ** 2, st[0] * st[1], st[1] ** 2])
        mq = S @ Mf
        eq = S @ Ef
        cand = [(1.0, 0.0)] if abs(mq[0]) < 1e-14 * np.abs(mq).max() else []
        for w in np.roots(mq if abs(mq[0]) > 1e-14 * np.abs(mq).max() else mq[1:]):
            if abs(w.imag) <= 1e-7 * max(1.0, abs(w)):
                cand.append((w.real, 1.0))
        if not cand:
            continue
        def resid(uv):
            U = np.array([uv[0] ** 2, uv[0] * uv[1], uv[1] ** 2]) / (uv[0] ** 2 + uv[1] ** 2)
            return abs(U @ eq)
        uv = min(cand, key=resid)
        p = np.array([float(x) for x in pc1.affine(*st)])
        q = np.array([float(x) for x in pc2.affine(*uv)])
        pt = _line_meet(p, q, np.array([float(x) for x in A]), np.array([float(x) for x in B]))
        pts.append({"st": st, "uv": uv, "point": pt, "multiplicity": mult})
    total = sum(m for _, m in roots)
    return LineSection(total, real_count, pts, res, (a, b))


def _line_meet(p, q, A, B) -> np.ndarray:
    """Point on line AB closest to line pq."""
    d1, d2 = q - p, B - A
    M = np.array([[d1 @ d1, -d1 @ d2], [d1 @ d2, -d2 @ d2]])
    rhs = np.array([(A - p) @ d1, (A - p) @ d2])
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        return A
    return A + sol[1] * d2


# ---------------------------------------------------------------------------
# boundary mesh
# ---------------------------------------------------------------------------

@dataclass
class RuledMesh:
    vertices: np.ndarray
    triangles: np.ndarray
    tags: list  # per triangle: "planar-face" | "ruled-strip"
    groups: dict = field(default_factory=dict)  # group name -> triangle indices

    def area(self) -> float:
        v = self.vertices[self.triangles]
        return float(0.5 * np.linalg.norm(np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]), axis=1).sum())

    def euler_characteristic(self) -> int:
        edges = set()
        for a, b, c in self.triangles:
            for x, y in ((a, b), (b, c), (c, a)):
                edges.add((min(x, y), max(x, y)))
        used = len(set(self.triangles.ravel().tolist()))
        return used - len(edges) + len(self.triangles)

    def boundary_edges(self) -> int:
        count = {}
        for a, b, c in self.triangles:
            for x, y in ((a, b), (b, c), (c, a)):
                k = (min(x, y), max(x, y))
                count[k] = count.get(k, 0) + 1
        return sum(1 for v in count.values() if v == 1)


class _MeshBuilder:
    def __init__(self):
        self.keys = {}
        self.verts = []
        self.tris = []
        self.tags = []
        self.group = []

    def vertex(self, key, xyz) -> int:
        if key not in self.keys:
            self.keys[key] = len(self.verts)
            self.verts.append(np.asarray(xyz, float))
        return self.keys[key]

    def tri(self, a, b, c, tag, group):
        if len({a, b, c}) < 3:
            return
        self.tris.append((a, b, c))
        self.tags.append(tag)
        self.group.append(group)


def _akey(name: str, angle: float) -> tuple:
    a = round(angle % (2 * math.pi), 11)
    if a >= round(2 * math.pi, 11):
        a = 0.0
    return (name, a)


def _supporting(H: Hull, p: np.ndarray, d: np.ndarray, q: np.ndarray, tol: float,
                d2: Optional[np.ndarray] = None) -> np.ndarray:
    """Vectorized: does the plane through the segment pq and the
    tangent at p (or at q, when pq is tangent to the first circle)
    support K?"""
    w = np.cross(d, q - p)
    if d2 is not None:
        w2 = np.cross(d2, q - p)
        swap = np.linalg.norm(w2, axis=1) > np.linalg.norm(w, axis=1)
        w = np.where(swap[:, None], w2, w)
    nrm = np.linalg.norm(w, axis=1)
    ok = nrm > 1e-12
    w = w / np.where(ok, nrm, 1.0)[:, None]
    off = np.einsum("ij,ij->i", w, p)
    h_plus = H.h(w)
    h_minus = H.h(-w)
    scale = 1.0 + np.abs(off)
    return ok & ((h_plus <= off + tol * scale) | (h_minus <= -off + tol * scale))


def boundary_mesh(c1: Circle, c2: Circle, n: int = 256, tol: float = 1e-7) -> RuledMesh:
    """Triangulate the boundary of K: fans over the planar 2-faces and
    quad strips along the supporting stationary bisecants, sampled by the
    real edge-curve tracer."""
    from .classify import face_lattice, order_type
    if n < 16:
        raise ValueError("resolution must be at least 16")
    f1, f2 = c1.as_float(), c2.as_float()
    H = Hull(f1, f2)
    E = edge.edge_form_of_circles(c1.rationalized(), c2.rationalized())
    trace = edge.real_components(E, samples=n)
    mb = _MeshBuilder()

    seg = trace.edges
    if seg:
        ta = np.array([e[0][0] for e in seg]) * 2
        pa = np.array([e[0][1] for e in seg]) * 2
        tb = np.array([e[1][0] for e in seg]) * 2
        pb = np.array([e[1][1] for e in seg]) * 2

        def pts(c, ang):
            cc, r, nn, u, v = _arr(c)
            return cc + r * (np.cos(ang)[:, None] * u + np.sin(ang)[:, None] * v), \
                -np.sin(ang)[:, None] * u + np.cos(ang)[:, None] * v
        P1, D1 = pts(f1, ta)
        Q1, T1 = pts(f2, pa)
        P2, D2 = pts(f1, tb)
        Q2, T2 = pts(f2, pb)
        good = _supporting(H, P1, D1, Q1, tol, T1) & _supporting(H, P2, D2, Q2, tol, T2)
        # quads inside a circle's plane belong to a planar face (fanned below)
        for c in (f1, f2):
            cc, _, nn, _, _ = _arr(c)
            flat = np.ones(len(good), bool)
            for X in (P1, Q1, P2, Q2):
                flat &= np.abs((X - cc) @ nn) <= 1e-9
            good &= ~flat
        quads = []
        for k in np.nonzero(good)[0]:
            quads.append((mb.vertex(_akey("C1", ta[k]), P1[k]), mb.vertex(_akey("C2", pa[k]), Q1[k]),
                          mb.vertex(_akey("C2", pb[k]), Q2[k]), mb.vertex(_akey("C1", tb[k]), P2[k])))
        # at a fold two quads share a, c, d; the a-c diagonal would repeat a sliver
        fold = {}
        for a, b, c, d in quads:
            fold[(a, c, d)] = fold.get((a, c, d), 0) + 1
        for a, b, c, d in quads:
            if fold[(a, c, d)] > 1:
                mb.tri(a, b, d, "ruled-strip", "ruled")
                mb.tri(b, c, d, "ruled-strip", "ruled")
            else:
                mb.tri(a, b, c, "ruled-strip", "ruled")
                mb.tri(a, c, d, "ruled-strip", "ruled")

    # planar 2-faces
    ot = order_type(c1, c2)
    fl = face_lattice(ot, c1, c2)
    role_of = {ot.roles[0]: "1", ot.roles[1]: "2"}
    circles = (f1, f2)
    for i, name in ((0, "C1"), (1, "C2")):
        label = role_of[i]
        faces = [f for f in fl.two_faces if f.startswith(f"D{label}") or f.startswith(f"conv(D{label}")]
        if not faces:
            continue
        c = circles[i]
        cc, r, nn, u, v = _arr(c)
        existing = sorted(k[1] for k in mb.keys if k[0] == name)
        arcs = fl.extreme_arcs[i]
        extra = []
        grid = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        if not existing:
            extra = list(grid)
        elif arcs:
            # sample the non-extreme arcs, which carry no ruled strips
            for x in grid:
                if not any(_in_arc(x, a, b) for a, b in arcs):
                    extra.append(x)
            for a, b in arcs:
                extra.extend([a % (2 * math.pi), b % (2 * math.pi)])
        for x in extra:
            mb.vertex(_akey(name, x), c.point(x))
        ring = sorted({k[1] for k in mb.keys if k[0] == name})
        center = mb.vertex((name, "center"), cc)
        ids = [mb.keys[(name, a)] for a in ring]
        group = f"face_D{i + 1}"
        for k in range(len(ids)):
            mb.tri(center, ids[k], ids[(k + 1) % len(ids)], "planar-face", group)
        if faces[0].startswith("conv"):
            # fan from the apex over the hidden arc
            j = 1 - i
            apex = [p for lab, _, p in ot.points
                    if lab == role_of[j] and np.linalg.norm(np.asarray(p) - cc) > r + 1e-12]
            if apex and arcs:
                ap = mb.vertex((f"apex{i}",), apex[0])
                hidden = [a for a in ring if not any(_in_arc(a, x, y, strict=True) for x, y in arcs)]
                hidden_ids = _cyclic_run(hidden, [mb.keys[(name, a)] for a in hidden])
                for k in range(len(hidden_ids) - 1):
                    mb.tri(ap, hidden_ids[k], hidden_ids[k + 1], "planar-face", group)

    V = np.array(mb.verts) if mb.verts else np.zeros((0, 3))
    T = np.array(mb.tris, int) if mb.tris else np.zeros((0, 3), int)
    # samples crowding a common point of the circles collapse onto it
    spacing = 2 * math.pi * max(float(c1.radius), float(c2.radius)) / n
    for _, _, s_pt in (p for p in ot.points if p[0] == "S"):
        s_pt = np.asarray(s_pt, float)
        near = np.linalg.norm(V - s_pt, axis=1) <= 0.02 * spacing
        V[near] = s_pt
    V, T, keep, remap = _weld(V, T, 1e-9 * (1.0 + float(np.abs(V).max(initial=0.0))))
    mb.tags = [mb.tags[k] for k in keep]
    mb.group = [mb.group[k] for k in keep]
    on_circle = {"C1": {}, "C2": {}}
    for key, idx in mb.keys.items():
        if key[0] in on_circle and isinstance(key[1], float):
            on_circle[key[0]][int(remap[idx])] = key[1]
    T, src_tri = _split_t_junctions(T, on_circle)
    mb.tags = [mb.tags[k] for k in src_tri]
    mb.group = [mb.group[k] for k in src_tri]
    # bisecants shrinking to a common point leave tiny holes there
    patch = _fill_small_loops(V, T, 16 * spacing)
    if len(patch):
        T = np.vstack([T, patch])
        mb.tags += ["ruled-strip"] * len(patch)
        mb.group += ["ruled"] * len(patch)
    T = _orient(V, T, V.mean(axis=0) if len(V) else np.zeros(3))
    groups = {}
    for k, g in enumerate(mb.group):
        groups.setdefault(g, []).append(k)
    return RuledMesh(V, T, mb.tags, groups)


def _weld(V: np.ndarray, T: np.ndarray, eps: float) -> tuple:
    """Merge vertices closer than eps; drop triangles that collapse or repeat."""
    if len(V) == 0:
        return V, T, [], np.arange(0)
    root = np.arange(len(V))

    def find(i):
        while root[i] != i:
            root[i] = root[root[i]]
            i = root[i]
        return i
    for i, j in cKDTree(V).query_pairs(eps):
        a, b = find(i), find(j)
        if a != b:
            root[max(a, b)] = min(a, b)
    rep = np.array([find(i) for i in range(len(V))])
    used, new_id = np.unique(rep, return_inverse=True)
    T = new_id[rep[T]] if len(T) else T
    keep, seen = [], set()
    for k, (a, b, c) in enumerate(T):
        key = tuple(sorted((a, b, c)))
        if len(set(key)) == 3 and key not in seen:
            seen.add(key)
            keep.append(k)
    return V[used], T[keep], keep, new_id


def _split_t_junctions(T: np.ndarray, on_circle: dict) -> tuple:
    """Subdivide triangles whose open edge runs along a circle past
    vertices of the other sheet.  Returns the triangles and, per new
    triangle, the index of the triangle it came from."""
    count = {}
    for a, b, c in T:
        for x, y in ((a, b), (b, c), (c, a)):
            k = (min(x, y), max(x, y))
            count[k] = count.get(k, 0) + 1
    sorted_on = {name: sorted((ang, i) for i, ang in d.items()) for name, d in on_circle.items()}
    out, origin = [], []
    for k, tri in enumerate(T):
        tri = [int(x) for x in tri]
        split = None
        for e in range(3):
            a, b, x = tri[e], tri[(e + 1) % 3], tri[(e + 2) % 3]
            if count[(min(a, b), max(a, b))] != 1:
                continue
            for name, d in on_circle.items():
                if a in d and b in d:
                    span = (d[b] - d[a]) % (2 * math.pi)
                    sgn = 1.0
                    if span > math.pi:
                        span, sgn = 2 * math.pi - span, -1.0
                    mids = sorted(((sgn * (ang - d[a])) % (2 * math.pi), i) for ang, i in sorted_on[name]
                                  if i not in (a, b) and 1e-12 < (sgn * (ang - d[a])) % (2 * math.pi) < span - 1e-12)
                    if mids:
                        split = (a, [i for _, i in mids], b, x)
                        break
            if split:
                break
        if split is None:
            out.append(tuple(tri))
            origin.append(k)
            continue
        a, mids, b, x = split
        chain = [a] + mids + [b]
        for i in range(len(chain) - 1):
            out.append((chain[i], chain[i + 1], x))
            origin.append(k)
    return np.array(out, int).reshape(-1, 3), origin


def _fill_small_loops(V: np.ndarray, T: np.ndarray, max_perimeter: float) -> np.ndarray:
    """Fan triangles closing simple boundary loops shorter than max_perimeter."""
    count = {}
    for a, b, c in T:
        for x, y in ((a, b), (b, c), (c, a)):
            k = (min(x, y), max(x, y))
            count[k] = count.get(k, 0) + 1
    nbr = {}
    for (x, y), m in count.items():
        if m == 1:
            nbr.setdefault(x, []).append(y)
            nbr.setdefault(y, []).append(x)
    if any(len(v) != 2 for v in nbr.values()):
        return np.zeros((0, 3), int)
    out, seen = [], set()
    for start in nbr:
        if start in seen:
            continue
        loop, prev, cur = [start], None, start
        while True:
            seen.add(cur)
            nxt = nbr[cur][0] if nbr[cur][0] != prev else nbr[cur][1]
            if nxt == start:
                break
            loop.append(nxt)
            prev, cur = cur, nxt
        per = sum(float(np.linalg.norm(V[loop[k]] - V[loop[k - 1]])) for k in range(len(loop)))
        if per <= max_perimeter:
            out += [(loop[0], loop[k], loop[k + 1]) for k in range(1, len(loop) - 1)]
    return np.array(out, int).reshape(-1, 3)


def _in_arc(x: float, a: float, b: float, strict: bool = False) -> bool:
    t = (x - a) % (2 * math.pi)
    eps = 1e-9
    return (eps < t < (b - a) - eps) if strict else (t <= (b - a) + eps or t >= 2 * math.pi - eps)


def _cyclic_run(angles: list, ids: list) -> list:
    """Order a set of angles forming one arc of the circle along the arc."""
    if len(angles) < 2:
        return ids
    order = np.argsort(angles)
    a = np.asarray(angles)[order]
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * math.pi]]))
    start = (int(np.argmax(gaps)) + 1) % len(a)
    return [ids[order[(start + k) % len(a)]] for k in range(len(a))]


def _orient(V: np.ndarray, T: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Outward orientation: each connected patch is seeded by its largest
    triangle (facing away from ``inner``) and propagated across edges."""
    if len(T) == 0:
        return T
    T = T.copy()
    a, b, c = V[T[:, 0]], V[T[:, 1]], V[T[:, 2]]
    nrm = np.cross(b - a, c - a)
    facing = np.einsum("ij,ij->i", nrm, (a + b + c) / 3 - inner)
    size = np.linalg.norm(nrm, axis=1)
    by_edge = {}
    for k, (x, y, z) in enumerate(T):
        for e in ((x, y), (y, z), (z, x)):
            by_edge.setdefault((min(e), max(e)), []).append(k)
    done = np.zeros(len(T), bool)
    for seed in np.argsort(-size):
        if done[seed]:
            continue
        if facing[seed] < 0:
            T[seed] = T[seed][[0, 2, 1]]
        done[seed] = True
        stack = [seed]
        while stack:
            k = stack.pop()
            x, y, z = T[k]
            for p, q in ((x, y), (y, z), (z, x)):
                nb = by_edge[(min(p, q), max(p, q))]
                if len(nb) != 2:
                    continue
                j = nb[0] if nb[1] == k else nb[1]
                if done[j]:
                    continue
                r = list(T[j])
                # a consistent neighbour traverses the shared edge as q -> p
                if any(r[i] == p and r[(i + 1) % 3] == q for i in range(3)):
                    T[j] = T[j][[0, 2, 1]]
                done[j] = True
                stack.append(j)
    return T
