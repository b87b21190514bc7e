"""Relative position of two circles: intersection type, order type along
the common line of their planes, face lattice of the convex hull, and the
spectrahedral representation when one exists."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import geom3, polys
from .geom3 import Circle, GeometryError


class CoplanarCircles(GeometryError):
    code = "coplanar_circles"


class NoSuitableRealCone(GeometryError):
    code = "no_suitable_real_cone"


ORDER_TAGS = ("∅", "(2c)", "(1)", "(1,1)", "(1,2)", "(S)", "(1,1,2)", "(1,2,1)", "(1,S)",
              "(1,1,2,2)", "(1,2,1,2)", "(1,2,2,1)", "(1,2,S)", "(1,S,2)", "(S,S)")


def _exact_pair(c1: Circle, c2: Circle) -> tuple[Circle, Circle]:
    return c1.rationalized(), c2.rationalized()


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_sqrt(a, b, d) -> int:
    """Sign of a + b*sqrt(d) for rationals a, b and d >= 0."""
    if d == 0 or b == 0:
        return _sign(a)
    sa, sb = _sign(a), _sign(b)
    if sa == 0 or sa == sb:
        return sb if sa == 0 else sa
    diff = a * a - b * b * d
    return sa if diff > 0 else (sb if diff < 0 else 0)


def sign_sqrt2(a, b, d1, c, d2) -> int:
    """Sign of a + b*sqrt(d1) + c*sqrt(d2)."""
    s1 = sign_sqrt(a, b, d1)
    s2 = _sign(c) if d2 != 0 else 0
    if s2 == 0 or s1 == s2:
        return s1
    if s1 == 0:
        return s2
    t = sign_sqrt(a * a + b * b * d1 - c * c * d2, 2 * a * b, d1)
    return s1 if t > 0 else (s2 if t < 0 else 0)


@dataclass(frozen=True)
class QuadRoot:
    """The real number p + q*sqrt(d) (exact)."""

    p: Fraction
    q: Fraction
    d: Fraction

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(float(self.d))

    def cmp(self, other: "QuadRoot") -> int:
        return sign_sqrt2(self.p - other.p, self.q, self.d, -other.q, other.d)


# ---------------------------------------------------------------------------
# the common line and the restricted quadratics
# ---------------------------------------------------------------------------

@dataclass
class LineData:
    line: geom3.Line
    quads: tuple  # (a, b, c) of |x(lam) - c_i|^2 - r_i^2 for each circle
    discs: tuple
    roots: tuple  # per circle: list of QuadRoot (real roots only, double once)


def _line_data(c1: Circle, c2: Circle) -> LineData:
    try:
        line = geom3.plane_intersection(c1.plane, c2.plane)
    except geom3.IdenticalPlanes as e:
        raise CoplanarCircles(str(e)) from None
    if line.at_infinity:
        return LineData(line, (), (), ((), ()))
    quads, discs, roots = [], [], []
    for c in (c1, c2):
        w = geom3.sub(line.base, c.center)
        a = geom3.norm2(line.direction)
        b = 2 * geom3.dot(line.direction, w)
        cc = geom3.norm2(w) - c.radius * c.radius
        d = b * b - 4 * a * cc
        quads.append((a, b, cc))
        discs.append(d)
        if d > 0:
            rs = [QuadRoot(-b / (2 * a), Fraction(-1) / (2 * a), d),
                  QuadRoot(-b / (2 * a), Fraction(1) / (2 * a), d)]
        elif d == 0:
            rs = [QuadRoot(-b / (2 * a), Fraction(0), Fraction(0))]
        else:
            rs = []
        roots.append(rs)
    return LineData(line, tuple(quads), tuple(discs), tuple(roots))


def _m(d) -> int:
    return 2 if d > 0 else (1 if d == 0 else 0)


@dataclass(frozen=True)
class IntersectionType:
    m1: int
    m2: int

    def __str__(self) -> str:
        return f"[{self.m1},{self.m2}]"


def intersection_type(c1: Circle, c2: Circle) -> IntersectionType:
    ld = _line_data(*_exact_pair(c1, c2))
    if ld.line.at_infinity:
        return IntersectionType(0, 0)
    m = sorted((_m(ld.discs[0]), _m(ld.discs[1])), reverse=True)
    return IntersectionType(*m)


# ---------------------------------------------------------------------------
# order type
# ---------------------------------------------------------------------------

@dataclass
class OrderType:
    tag: str
    m: tuple  # (m for c1, m for c2): real points of c_i on the common line
    roles: tuple  # roles[k] = index (0/1) of the circle labelled k+1
    points: list = field(default_factory=list)  # (label, lam, xyz) sorted along the line
    line: Optional[geom3.Line] = None

    @property
    def intersection_type(self) -> IntersectionType:
        return IntersectionType(*sorted(self.m, reverse=True))

    def to_json(self) -> dict:
        return {"tag": self.tag, "intersection_type": [*sorted(self.m, reverse=True)],
                "m": list(self.m), "roles": [r + 1 for r in self.roles],
                "points": [{"label": lab, "lambda": f"{lam:.17g}",
                            "xyz": [f"{x:.17g}" for x in xyz]} for lab, lam, xyz in self.points]}


def intersection_type_of_tag(tag: str) -> IntersectionType:
    if tag in ("∅", "(2c)"):
        return IntersectionType(0, 0)
    labels = tag.strip("()").split(",")
    n1 = sum(1 for x in labels if x in ("1", "S"))
    n2 = sum(1 for x in labels if x in ("2", "S"))
    return IntersectionType(*sorted((n1, n2), reverse=True))


def _proportional(q1, q2) -> bool:
    return q1[0] * q2[1] == q1[1] * q2[0] and q1[0] * q2[2] == q1[2] * q2[0] \
        and q1[1] * q2[2] == q1[2] * q2[1]


def order_type(c1: Circle, c2: Circle) -> OrderType:
    e1, e2 = _exact_pair(c1, c2)
    ld = _line_data(e1, e2)
    if ld.line.at_infinity:
        # parallel planes meet in the line at infinity, through both pairs
        # of circular points
        return OrderType("(2c)", (0, 0), (0, 1), [], ld.line)
    m = (_m(ld.discs[0]), _m(ld.discs[1]))
    g = polys.form_gcd(polys.form(ld.quads[0]), polys.form(ld.quads[1]))
    shared = len(g) - 1
    if m == (0, 0):
        tag = "(2c)" if _proportional(*ld.quads) else "∅"
        return OrderType(tag, m, (0, 1), [], ld.line)

    # labelled points along the line; shared ones become S
    pts = []
    for i in (0, 1):
        for r in ld.roots[i]:
            pts.append([i, r])
    merged = []
    for i, r in pts:
        hit = next((x for x in merged if x[0] != i and x[0] != "S" and x[1].cmp(r) == 0), None)
        if hit is not None:
            hit[0] = "S"
        else:
            merged.append([i, r])
    merged.sort(key=lambda x: float(x[1]))
    # exact insertion sort to protect against float ties
    for a in range(1, len(merged)):
        b = a
        while b > 0 and merged[b - 1][1].cmp(merged[b][1]) > 0:
            merged[b - 1], merged[b] = merged[b], merged[b - 1]
            b -= 1
    seq = [x[0] for x in merged]

    if m[0] != m[1]:
        first = 0 if m[0] > m[1] else 1
    else:
        first = next((x for x in seq if x != "S"), 0)
        if m == (2, 2) and seq.count("S") == 1:
            # the circle owning the point at the far end from S is labelled 1
            k = seq.index("S")
            if k == 1:
                first = seq[0]
            else:
                first = seq[-1] if k == 0 else seq[0]
    roles = (first, 1 - first)
    lab = {first: "1", 1 - first: "2", "S": "S"}
    labels = [lab[x] for x in seq]
    if m == (2, 2) and labels.count("S") == 1 and labels[0] == "S":
        labels = labels[::-1]
        merged = merged[::-1]
    tag = _tag_from_labels(labels, m, shared)
    points = []
    for (owner, r), l in zip(merged, labels):
        lam = float(r)
        points.append((l, lam, tuple(float(x) for x in ld.line.point(lam))))
    return OrderType(tag, m, roles, points, ld.line)


def _tag_from_labels(labels: list, m: tuple, shared: int) -> str:
    ms = tuple(sorted(m, reverse=True))
    if ms == (1, 0):
        return "(1)"
    if ms == (2, 0):
        return "(1,1)"
    if ms == (1, 1):
        return "(S)" if "S" in labels else "(1,2)"
    if ms == (2, 1):
        if "S" in labels:
            return "(1,S)"
        k = labels.index("2")
        return "(1,2,1)" if k == 1 else "(1,1,2)"
    # [2,2]
    s = labels.count("S")
    if s == 2:
        return "(S,S)"
    if s == 1:
        return "(1,2,S)" if labels[-1] == "S" else "(1,S,2)"
    norm = "".join(labels) if labels[0] == "1" else "".join("1" if x == "2" else "2" for x in labels)
    return {"1122": "(1,1,2,2)", "1212": "(1,2,1,2)", "1221": "(1,2,2,1)"}[norm]


# ---------------------------------------------------------------------------
# face lattice
# ---------------------------------------------------------------------------

# Static description per order tag.  Circles are named by role (1 has the
# larger number of real points on the common line).  zero: extreme set per
# circle; two: 2-faces; families: bisecant-edge families; nonexposed_pts:
# number of nonexposed extreme points; nonexposed_edges: nonexposed bisecant
# edges; isolated: an exposed isolated bisecant edge; edgeless: common
# points of the circles that are extreme but lie on no bisecant edge.
FACE_TABLE = {
    "∅": dict(cls=1, edgeless=0, zero=("circle", "circle"), two=("D1", "D2"), families=1,
              parameter="C1", nonexposed_pts=0, nonexposed_edges=0, isolated=False),
    "(2c)": dict(cls=1, edgeless=0, zero=("circle", "circle"), two=("D1", "D2"), families=1,
                 parameter="C1", nonexposed_pts=0, nonexposed_edges=0, isolated=False),
    "(1,1)": dict(cls=2, edgeless=0, zero=("circle", "arc"), two=("D1",), families=1,
                  parameter="C1", nonexposed_pts=2, nonexposed_edges=0, isolated=False),
    "(1,2,1)": dict(cls=2, edgeless=0, zero=("circle", "arc"), two=("D1",), families=1,
                    parameter="C1", nonexposed_pts=2, nonexposed_edges=0, isolated=False),
    "(1,2,2,1)": dict(cls=3, edgeless=0, zero=("circle", "two_arcs"), two=(), families=2,
                      parameter="C1", nonexposed_pts=4, nonexposed_edges=0, isolated=False),
    "(1,1,2,2)": dict(cls=4, edgeless=0, zero=("arc", "arc"), two=(), families=1,
                      parameter="double cover of an arc", nonexposed_pts=4,
                      nonexposed_edges=0, isolated=False),
    "(1,2,1,2)": dict(cls=4, edgeless=0, zero=("arc", "arc"), two=(), families=1,
                      parameter="double cover of an arc", nonexposed_pts=4,
                      nonexposed_edges=0, isolated=False),
    "(1,S,2)": dict(cls=4, edgeless=0, zero=("arc", "arc"), two=(), families=1,
                    parameter="double cover of an arc", nonexposed_pts=4,
                    nonexposed_edges=0, isolated=False),
    "(1,2,S)": dict(cls=5, edgeless=1, zero=("circle", "arc"), two=(), families=2,
                    parameter="C1 minus C2", nonexposed_pts=2, nonexposed_edges=0, isolated=False),
    "(S,S)": dict(cls=6, edgeless=2, zero=("circle", "circle"), two=(), families=4,
                  parameter="arcs of C1 minus C2", nonexposed_pts=0, nonexposed_edges=0,
                  isolated=False),
    "(1,S)": dict(cls=7, edgeless=1, zero=("circle", "arc"), two=("D1",), families=1,
                  parameter="C1 minus C2", nonexposed_pts=2, nonexposed_edges=0, isolated=False),
    "(1,1,2)": dict(cls=8, edgeless=0, zero=("arc", "arc"), two=("conv(D1,p2)",), families=1,
                    parameter="arc of C1", nonexposed_pts=4, nonexposed_edges=2, isolated=False),
    "(1)": dict(cls=9, edgeless=0, zero=("circle", "arc"), two=("D1", "conv(D2,p1)"), families=1,
                parameter="arc of C2", nonexposed_pts=2, nonexposed_edges=2, isolated=False),
    "(1,2)": dict(cls=10, edgeless=0, zero=("arc", "arc"), two=("conv(D1,p2)", "conv(D2,p1)"), families=1,
                  parameter="either arc", nonexposed_pts=4, nonexposed_edges=2, isolated=True),
    "(S)": dict(cls=11, edgeless=1, zero=("circle", "circle"), two=("D1", "D2"), families=1,
                parameter="either circle minus the common point", nonexposed_pts=0,
                nonexposed_edges=0, isolated=False),
}

COMPARED_FIELDS = ("zero", "two", "families", "nonexposed_pts", "nonexposed_edges", "isolated",
                   "edgeless")


@dataclass
class FaceLatticeDescriptor:
    tag: str
    combinatorial_class: int
    two_faces: list  # role-named: "D1", "conv(D1,p2)", ...
    zero_faces: tuple  # per role: "circle" | "arc" | "two_arcs"
    extreme_arcs: tuple  # per actual circle: list of (start, end) angles, [] = full circle
    families: int
    edges_per_point: tuple  # per role: bisecant edges through a generic extreme point
    nonexposed_points: list  # xyz
    nonexposed_edges: list  # (xyz, xyz)
    isolated_bisecant: Optional[tuple]
    arc_endpoint_params: tuple  # per actual circle: angles of arc endpoints
    parameter: str = ""
    edgeless_points: list = field(default_factory=list)  # xyz

    def realized(self) -> dict:
        return dict(zero=tuple(self.zero_faces), two=tuple(sorted(self.two_faces)),
                    families=self.families, nonexposed_pts=len(self.nonexposed_points),
                    nonexposed_edges=len(self.nonexposed_edges),
                    isolated=self.isolated_bisecant is not None,
                    edgeless=len(self.edgeless_points))

    def expected(self) -> dict:
        row = FACE_TABLE[self.tag]
        return {k: (tuple(sorted(row[k])) if k == "two" else row[k]) for k in COMPARED_FIELDS}

    def mismatches(self) -> list:
        r, e = self.realized(), self.expected()
        return [k for k in COMPARED_FIELDS if r[k] != e[k]]

    def to_json(self) -> dict:
        f = lambda p: [f"{x:.17g}" for x in p]  # noqa: E731
        return {"order_type": self.tag, "combinatorial_class": self.combinatorial_class,
                "two_faces": list(self.two_faces), "zero_faces": list(self.zero_faces),
                "extreme_arcs": [[[f"{a:.17g}", f"{b:.17g}"] for a, b in arcs]
                                 for arcs in self.extreme_arcs],
                "one_face_families": {"count": self.families, "parameter": self.parameter,
                                      "edges_per_generic_point": list(self.edges_per_point)},
                "nonexposed_points": [f(p) for p in self.nonexposed_points],
                "nonexposed_edges": [[f(a), f(b)] for a, b in self.nonexposed_edges],
                "isolated_bisecant": None if self.isolated_bisecant is None
                else [f(p) for p in self.isolated_bisecant],
                "edgeless_points": [f(p) for p in self.edgeless_points]}


TWO_PI = 2 * math.pi


def _merge_open(intervals: list) -> list:
    """Union of open angular intervals (a, b), b - a < 2pi; intervals that
    touch are merged (the touching point is a segment interior point)."""
    if not intervals:
        return []
    ivs = sorted(((a % TWO_PI, a % TWO_PI + (b - a)) for a, b in intervals))
    # unroll around the circle
    merged = [list(ivs[0])]
    for a, b in ivs[1:]:
        if a <= merged[-1][1] + 1e-12:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    if len(merged) > 1 and merged[-1][1] >= merged[0][0] + TWO_PI - 1e-12:
        merged[0][0] = merged[-1][0] - TWO_PI
        merged[0][1] = max(merged[0][1], merged[-1][1] - TWO_PI)
        merged.pop()
    if any(b - a >= TWO_PI - 1e-12 for a, b in merged):
        return [[0.0, TWO_PI]]
    return merged


def _complement(excl: list) -> list:
    if not excl:
        return []
    out = []
    for k, (a, b) in enumerate(excl):
        na = excl[(k + 1) % len(excl)][0] + (TWO_PI if k + 1 == len(excl) else 0.0)
        if na - b > 1e-12:
            out.append((b, na))
    return out


def _circle_points_on_line(ld: LineData, j: int) -> list:
    return [(r, tuple(float(x) for x in ld.line.point(float(r)))) for r in ld.roots[j]]


def _outside_disc(ld: LineData, i: int, r: QuadRoot) -> int:
    """Sign of |x - c_i|^2 - r_i^2 at the line point with parameter r."""
    a, b, c = ld.quads[i]
    p, q, d = r.p, r.q, r.d
    return sign_sqrt(a * p * p + a * q * q * d + b * p + c, 2 * a * p * q + b * q, d)


def face_lattice(ot: OrderType, c1: Circle, c2: Circle) -> FaceLatticeDescriptor:
    circles = _exact_pair(c1, c2)
    fl = tuple(c.as_float() for c in circles)
    ld = _line_data(*circles)
    role_name = {ot.roles[0]: "1", ot.roles[1]: "2"}
    shared = [p for lab, _, p in ot.points if lab == "S"]
    arcs, zero, n_edges, endpoints = [None, None], [None, None], [0, 0], [[], []]
    two, ne_pts, ne_edges = [], [], []
    isolated = None
    tangency = [None, None]
    for i in (0, 1):
        if ot.m[i] == 1 and ld.roots[i]:
            tangency[i] = np.array(ld.line.point(float(ld.roots[i][0])), float)
    for i in (0, 1):
        j = 1 - i
        ci = fl[i]
        c = np.asarray(ci.center, float)
        r = float(ci.radius)
        excl, ext_pts = [], []
        if not ld.line.at_infinity:
            for root in ld.roots[j]:
                if _outside_disc(ld, i, root) <= 0:
                    continue
                x = np.array(ld.line.point(float(root)), float)
                dist = float(np.linalg.norm(x - c))
                alpha = ci.angle_of(x)
                w = math.acos(min(1.0, r / dist))
                excl.append((alpha - w, alpha + w))
                ext_pts.append((x, alpha, w))
        merged = _merge_open(excl)
        ext = _complement(merged)
        arcs[i] = ext
        zero[i] = "circle" if not ext else ("arc" if len(ext) == 1 else "two_arcs")
        n_edges[i] = 1 if ot.m[j] <= 1 else 2
        for a, b in ext:
            endpoints[i].extend([a % TWO_PI, b % TWO_PI])
            ne_pts.extend([tuple(ci.point(a)), tuple(ci.point(b))])
        # the section kappa_i is a 2-face iff C_j stays on one side of Pi_i
        if ot.m[j] <= 1:
            if ext_pts:
                two.append(f"conv(D{role_name[i]},p{role_name[j]})")
            else:
                two.append(f"D{role_name[i]}")
            # C_j tangent to Pi_i outside D_i: segments to the tangency points
            if ot.m[j] == 1 and ext_pts:
                x, alpha, w = ext_pts[0]
                for ang in (alpha - w, alpha + w):
                    p = ci.point(ang)
                    on_line = ld.line.contains(tuple(p), 1e-9) and ld.line.contains(tuple(x), 1e-9)
                    if on_line:
                        isolated = (tuple(p), tuple(x))
                    else:
                        ne_edges.append((tuple(p), tuple(x)))
    # isolated bisecant is shared by both sections; keep one copy
    # bisecant families, parametrized by the role-1 circle
    i = ot.roles[0]
    if n_edges[1 - i] < n_edges[i]:
        i = 1 - i
    families = _count_families(fl[i], arcs[i], n_edges[i],
                               [p for p in shared] + ([tuple(tangency[i])] if tangency[i] is not None else []))
    # a common point inside the extreme set of either circle ends no edge
    edgeless = [p for p in shared
                if any(not arcs[k] or any(_strictly_in(fl[k].angle_of(p), a, b) for a, b in arcs[k])
                       for k in (0, 1))]
    roles = ot.roles
    desc = FaceLatticeDescriptor(
        tag=ot.tag,
        combinatorial_class=FACE_TABLE[ot.tag]["cls"],
        two_faces=two,
        zero_faces=(zero[roles[0]], zero[roles[1]]),
        extreme_arcs=(arcs[0], arcs[1]),
        families=families,
        edges_per_point=(n_edges[roles[0]], n_edges[roles[1]]),
        nonexposed_points=ne_pts,
        nonexposed_edges=ne_edges,
        isolated_bisecant=isolated,
        arc_endpoint_params=(tuple(endpoints[0]), tuple(endpoints[1])),
        parameter=FACE_TABLE[ot.tag]["parameter"],
        edgeless_points=edgeless,
    )
    return desc


def _count_families(c: Circle, arcs: list, n: int, cuts: list) -> int:
    """Bisecant-edge families over the extreme set of c.  Pieces of the
    extreme set are cut at shared and tangency points; over a piece the n
    edges per point form one family when a piece end is an arc endpoint
    (where the two edges merge), otherwise n families."""
    angles = sorted({round(c.angle_of(p) % TWO_PI, 12) for p in cuts
                     if abs(np.linalg.norm(np.asarray(p) - np.asarray(c.center, float))
                            - float(c.radius)) < 1e-9})
    if not arcs:
        if not angles:
            return n
        return n * len(angles)
    total = 0
    for a, b in arcs:
        inside = [x for x in angles if _strictly_in(x, a, b)]
        pieces = len(inside) + 1
        for k in range(pieces):
            branch_end = (k == 0) or (k == pieces - 1)
            total += 1 if (n == 1 or branch_end) else n
    return total


def _strictly_in(x: float, a: float, b: float) -> bool:
    x = (x - a) % TWO_PI
    return 1e-9 < x < (b - a) - 1e-9


# ---------------------------------------------------------------------------
# quadric pencil and spectrahedral representation
# ---------------------------------------------------------------------------

PENCIL_PARAMS = ((1, 0), (0, 1), (1, 1), (1, 2), (2, 1))
_MONOMIALS = [(a, b) for a in range(4) for b in range(a, 4)]


@dataclass
class QuadricPencil:
    Q1: tuple  # 4x4 exact symmetric, the plane pair
    Q2: tuple  # another member; coordinates (X0, x, y, z), X0 = 1 affinely

    def member(self, t) -> np.ndarray:
        if t == math.inf:
            return np.array(self.Q2, float)
        return np.array(self.Q1, float) + float(t) * np.array(self.Q2, float)

    def to_json(self) -> dict:
        enc = lambda x: str(x) if isinstance(x, Fraction) else f"{x:.17g}"  # noqa: E731
        return {"Q1": [[enc(x) for x in r] for r in self.Q1],
                "Q2": [[enc(x) for x in r] for r in self.Q2]}


def _quadric_matrix(coeffs) -> tuple:
    Q = [[Fraction(0)] * 4 for _ in range(4)]
    for (a, b), c in zip(_MONOMIALS, coeffs):
        if a == b:
            Q[a][a] = c
        else:
            Q[a][b] = Q[b][a] = c / 2
    return tuple(tuple(r) for r in Q)


def _circle_sample_points(c: Circle) -> list:
    pc = geom3.circle_parametrization(c)
    return [pc(*st) for st in PENCIL_PARAMS]


def quadric_pencil(c1: Circle, c2: Circle) -> Optional[QuadricPencil]:
    e1, e2 = _exact_pair(c1, c2)
    if e1.plane.normal == e2.plane.normal and e1.plane.offset == e2.plane.offset:
        raise CoplanarCircles("circles lie in one plane")
    rows = []
    for c in (e1, e2):
        for X in _circle_sample_points(c):
            rows.append([X[a] * X[b] for a, b in _MONOMIALS])
    basis = polys.nullspace(rows)
    if len(basis) < 2:
        return None
    h1, h2 = e1.plane.homogeneous(), e2.plane.homogeneous()
    pair = [Fraction(0)] * 10
    for k, (a, b) in enumerate(_MONOMIALS):
        pair[k] = h1[a] * h2[b] + (h1[b] * h2[a] if a != b else 0)
    # a member independent of the plane pair, with one coordinate eliminated
    piv = next(k for k in range(10) if pair[k] != 0)
    other = None
    for v in basis:
        w = [x - v[piv] / pair[piv] * y for x, y in zip(v, pair)]
        if any(w):
            other = w
            break
    lead = next(x for x in other if x != 0)
    other = [x / lead for x in other]
    return QuadricPencil(_quadric_matrix(pair), _quadric_matrix(other))


@dataclass
class LMIRepresentation:
    """Blocks (A0, A1, A2, A3): the set {x : A0 + x A1 + y A2 + z A3 >= 0}."""

    blocks: list

    def matrices(self, x) -> list:
        x = np.asarray(x, float)
        return [A0 + x[0] * A1 + x[1] * A2 + x[2] * A3 for A0, A1, A2, A3 in self.blocks]

    def min_eigenvalues(self, pts) -> np.ndarray:
        """Smallest eigenvalue over all blocks, per point."""
        P = np.atleast_2d(np.asarray(pts, float))
        out = np.full(len(P), np.inf)
        for A0, A1, A2, A3 in self.blocks:
            M = A0[None] + P[:, 0, None, None] * A1 + P[:, 1, None, None] * A2 + P[:, 2, None, None] * A3
            out = np.minimum(out, np.linalg.eigvalsh(M)[:, 0])
        return out

    def contains(self, pts, tol: float = 0.0) -> np.ndarray:
        return self.min_eigenvalues(pts) >= -tol

    def cone_blocks(self) -> list:
        return [b for b in self.blocks if b[0].shape == (2, 2)]

    def to_json(self) -> dict:
        return {"blocks": [[[[f"{x:.17g}" for x in row] for row in A] for A in b]
                           for b in self.blocks]}


@dataclass
class SpectrahedronResult:
    is_spectrahedron: bool
    order_type: str
    reason: str
    lmi: Optional[LMIRepresentation] = None
    pencil: Optional[QuadricPencil] = None
    pencil_roots: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"is_spectrahedron": self.is_spectrahedron, "order_type": self.order_type,
                "reason": self.reason,
                "lmi": None if self.lmi is None else self.lmi.to_json(),
                "pencil": None if self.pencil is None else self.pencil.to_json(),
                "pencil_roots": [f"{t:.17g}" for t in self.pencil_roots]}


SPECTRAHEDRAL_TAGS = ("(S,S)", "(2c)", "(S)")


def pencil_det_roots(pencil: QuadricPencil) -> list:
    """Real t with det(Q1 + t Q2) = 0 (inf when Q2 is singular)."""
    vals = []
    for k in range(5):
        M = [[a + k * b for a, b in zip(r1, r2)] for r1, r2 in zip(pencil.Q1, pencil.Q2)]
        vals.append(polys.det(M))
    f = polys.interpolate_form(vals, 4)
    if polys.form_is_zero(f):
        return []
    out = []
    for z, _ in polys.form_roots(f):
        if np.isinf(z.real) if z.imag == 0 else False:
            out.append(math.inf)
        elif abs(z.imag) <= 1e-9 * max(1.0, abs(z)):
            out.append(z.real)
    return sorted(set(out))


def _affine_forms(Q: np.ndarray) -> Optional[tuple]:
    """Write a rank-3 quadric as alpha^2 + beta^2 - gamma^2 with affine
    forms given by their (X0, x, y, z) coefficient vectors."""
    lam, vec = np.linalg.eigh(Q)
    scale = np.abs(lam).max()
    small = np.abs(lam) <= 1e-9 * scale
    if small.sum() != 1:
        return None
    pos, neg = (lam > 0) & ~small, (lam < 0) & ~small
    if neg.sum() == 2:
        lam, pos, neg = -lam, neg, pos
    if pos.sum() != 2 or neg.sum() != 1:
        return None
    ip = np.nonzero(pos)[0]
    ineg = np.nonzero(neg)[0][0]
    alpha = math.sqrt(lam[ip[0]]) * vec[:, ip[0]]
    beta = math.sqrt(lam[ip[1]]) * vec[:, ip[1]]
    gamma = math.sqrt(-lam[ineg]) * vec[:, ineg]
    return alpha, beta, gamma


def _cone_block(alpha, beta, gamma) -> tuple:
    mats = []
    for k in range(4):
        a, b, g = alpha[k], beta[k], gamma[k]
        mats.append(np.array([[g + a, b], [b, g - a]]))
    return tuple(mats)


def _circle_points_np(c: Circle, n: int) -> np.ndarray:
    th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    return np.array([c.point(t) for t in th])


def spectrahedron(c1: Circle, c2: Circle, validate: bool = True) -> SpectrahedronResult:
    """Decide whether K is a spectrahedron; when it is, build an LMI from
    the real cones of the quadric pencil through both circles together
    with half-space blocks for the circle planes that K lies on one side
    of."""
    ot = order_type(c1, c2)
    if ot.tag not in SPECTRAHEDRAL_TAGS:
        reason = "not basic semialgebraic" if ot.tag == "∅" else "nonexposed face"
        return SpectrahedronResult(False, ot.tag, reason)
    e1, e2 = _exact_pair(c1, c2)
    pencil = quadric_pencil(e1, e2)
    if pencil is None:
        raise NoSuitableRealCone(f"no quadric pencil for order type {ot.tag}")
    roots = pencil_det_roots(pencil)
    f1, f2 = e1.as_float(), e2.as_float()
    samples = np.vstack([_circle_points_np(f1, 64), _circle_points_np(f2, 64)])
    X = np.hstack([np.ones((len(samples), 1)), samples])
    blocks = []
    for t in roots:
        forms = _affine_forms(pencil.member(t))
        if forms is None:
            continue
        alpha, beta, gamma = forms
        g = X @ gamma
        tol = 1e-9 * max(1.0, np.abs(g).max())
        if np.all(g >= -tol):
            blocks.append(_cone_block(alpha, beta, gamma))
        elif np.all(g <= tol):
            blocks.append(_cone_block(alpha, beta, -gamma))
    for i, (ci, cj) in enumerate(((f1, f2), (f2, f1))):
        if ot.m[1 - i] <= 1:
            n = np.asarray(ci.normal, float)
            off = float(n @ np.asarray(ci.center, float))
            side = float(n @ np.asarray(cj.center, float)) - off
            s = 1.0 if side >= 0 else -1.0
            blocks.append((np.array([[-s * off]]), *(np.array([[s * n[k]]]) for k in range(3))))
    if not any(b[0].shape == (2, 2) for b in blocks):
        raise NoSuitableRealCone(f"no real rank-3 cone contains both circles ({ot.tag})")
    lmi = LMIRepresentation(blocks)
    if validate and not _agrees_with_hull(lmi, f1, f2):
        raise NoSuitableRealCone(f"cone blocks do not cut out the hull ({ot.tag})")
    return SpectrahedronResult(True, ot.tag, "quadric pencil through both circles", lmi, pencil, roots)


def _agrees_with_hull(lmi: LMIRepresentation, c1: Circle, c2: Circle, n: int = 7) -> bool:
    from .hull import Hull
    lo, hi = bounding_box(c1, c2, pad=0.25)
    axes = [np.linspace(lo[k], hi[k], n) for k in range(3)]
    P = np.array(np.meshgrid(*axes, indexing="ij")).reshape(3, -1).T
    sd, _ = Hull(c1, c2, ridge_samples=1024).signed_distance(P)
    far = np.abs(sd) > 1e-6
    lmi_in = lmi.contains(P[far], 1e-12)
    return bool(np.all(lmi_in == (sd[far] < 0)))


def bounding_box(c1: Circle, c2: Circle, pad: float = 0.0) -> tuple:
    lo, hi = np.full(3, np.inf), np.full(3, -np.inf)
    for c in (c1, c2):
        cc = np.asarray([float(x) for x in c.center])
        n = np.asarray([float(x) for x in c.normal])
        ext = float(c.radius) * np.sqrt(np.maximum(0.0, 1.0 - n * n))
        lo, hi = np.minimum(lo, cc - ext), np.maximum(hi, cc + ext)
    span = hi - lo
    return lo - pad * span, hi + pad * span
