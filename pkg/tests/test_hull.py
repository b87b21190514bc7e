import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp

from bicircle import classify, fixtures, geom3, hull
from bicircle.geom3 import Circle

from conftest import as_tuple
from oracles import PointCloudHull, circle_forms, edge_determinant, s, t, support as disc_support, \
    tangent_construction, u, v


# ---------------------------------------------------------------------------
# stationary bisecants
# ---------------------------------------------------------------------------

def test_two_real_bisecants_on_the_unlinked_pair(unlinked):
    fan = hull.stationary_bisecants_through(*unlinked, (1, 0))
    assert fan.variant == "TwoReal"
    got = sorted(tuple(np.round(q, 12)) for q in fan.points)
    want = sorted([(2.5, 0.0, -math.sqrt(3) / 2), (2.5, 0.0, math.sqrt(3) / 2)])
    assert np.allclose(got, want, atol=1e-12)


def test_centre_of_the_other_circle_gives_no_real_bisecant(oloid):
    assert hull.stationary_bisecants_through(*oloid, (1, 0)).variant == "NoneReal"


def test_tangent_inside_the_other_plane_gives_a_pencil():
    c1 = Circle((0, 0, 0), 1, (0, 0, 1))
    c2 = Circle((1, 0, 1), 1, (1, 0, 0))
    assert hull.stationary_bisecants_through(c1, c2, (1, 0)).variant == "Pencil"


def test_bisecant_variants_match_the_plane_construction(order_fixtures):
    rng = random.Random(4)
    names = {"TwoReal": "two", "OneReal": "one", "NoneReal": "none", "Pencil": "pencil"}
    for tag, (c1, c2) in order_fixtures.items():
        f1 = c1.as_float()
        for _ in range(20):
            th = rng.uniform(0, 2 * math.pi)
            fan = hull.stationary_bisecants_through(c1, c2, geom3.angle_to_param(th))
            kind, pts = tangent_construction(as_tuple(c1), as_tuple(c2), f1.point(th), f1.tangent(th))
            assert names[fan.variant] == kind, tag
            if kind == "two":
                assert np.allclose(sorted(np.round(np.real(fan.points), 8).tolist()),
                                   sorted(np.round(pts, 8).tolist()), atol=1e-7)


# ---------------------------------------------------------------------------
# boundary bisecants
# ---------------------------------------------------------------------------

def test_outer_and_inner_bisecants(unlinked):
    fan = hull.stationary_bisecants_through(*unlinked, (0, 1))
    verdicts = [hull.is_boundary_bisecant(*unlinked, ((0, 1), q)) for q in fan.params]
    assert any(verdicts)
    inner = hull.stationary_bisecants_through(*unlinked, (1, 0))
    q = min(inner.params, key=lambda uv: abs(unlinked[1].as_float().point(geom3.param_to_angle(*uv))[2]
                                            - math.sqrt(3) / 2))
    assert hull.is_boundary_bisecant(*unlinked, ((1, 0), q)) is False


def test_parallel_tangents_on_a_symmetric_pair(unlinked):
    # at p = (0,1,0) the tangent is parallel to the plane of C2
    par = geom3.angle_to_param(math.pi / 2)
    fan = hull.stationary_bisecants_through(*unlinked, par)
    assert fan.variant == "TwoReal"
    assert any(hull.is_boundary_bisecant(*unlinked, (par, q)) for q in fan.params)


def test_off_curve_pairs_are_rejected(unlinked):
    with pytest.raises(hull.NotOnEdgeCurve):
        hull.is_boundary_bisecant(*unlinked, ((1, 0), (1, 1)))


@pytest.mark.parametrize("tag", ["∅", "(2c)", "(1,1)", "(1,1,2,2)", "(1,2,1,2)", "(1,2,2,1)"])
def test_supporting_bisecants_per_point(tag, order_fixtures):
    c1, c2 = order_fixtures[tag]
    ot = classify.order_type(c1, c2)
    arcs = classify.face_lattice(ot, c1, c2).extreme_arcs[0]
    expected = 2 if ot.m[1] == 2 else 1
    for th in np.linspace(0, 2 * math.pi, 61)[:-1]:
        if arcs and not any(hull._in_arc(th, a, b, strict=True) for a, b in arcs):
            continue
        par = geom3.angle_to_param(th)
        fan = hull.stationary_bisecants_through(c1, c2, par)
        if fan.variant != "TwoReal":
            continue
        assert sum(hull.is_boundary_bisecant(c1, c2, (par, q)) for q in fan.params) == expected


# ---------------------------------------------------------------------------
# support and membership
# ---------------------------------------------------------------------------

def test_support_examples(unlinked, order_fixtures):
    r = hull.support(*unlinked, (1, 0, 0))
    assert r.value == pytest.approx(4) and r.attained_by == (2,)
    assert np.allclose(r.points[0], (4, 0, 0))
    r = hull.support(*unlinked, (0, 0, 1))
    assert r.value == pytest.approx(1) and np.allclose(r.points[0], (3, 0, 1))
    assert r.values[0] == pytest.approx(0)
    c1, c2 = order_fixtures["∅"]
    n = np.array([float(x) for x in c1.normal])
    side = n @ (np.array([float(x) for x in c2.center]) - np.array([float(x) for x in c1.center]))
    assert hull.support(c1, c2, -np.sign(side) * n).face == "2-face"
    with pytest.raises(hull.ZeroDirection):
        hull.support(*unlinked, (0, 0, 0))


def test_support_matches_the_disc_formula(order_fixtures):
    rng = np.random.default_rng(8)
    W = rng.normal(size=(200, 3))
    for tag, (c1, c2) in order_fixtures.items():
        ref = np.maximum(disc_support(as_tuple(c1), W), disc_support(as_tuple(c2), W))
        got = [hull.support(c1, c2, w).value for w in W]
        assert np.allclose(got, ref, atol=1e-12), tag


def test_membership_examples(unlinked):
    assert hull.membership(*unlinked, (3, 0, 0)).verdict == "inside"
    m = hull.membership(*unlinked, (0, 0, 0.5))
    assert m.verdict == "outside"
    w, h = m.certificate["direction"], m.certificate["support"]
    assert w @ np.array([0, 0, 0.5]) > h
    m = hull.membership(*unlinked, (4 + 1e-3, 0, 0))
    assert m.verdict == "outside"
    assert np.allclose(m.certificate["direction"], (1, 0, 0), atol=1e-3)
    assert m.certificate["support"] == pytest.approx(4, abs=1e-6)


def test_height_of_the_axis_slice(unlinked):
    # the highest point of K on the z-axis is 1/sqrt(15)
    zmax = 1 / math.sqrt(15)
    cloud = PointCloudHull(*map(as_tuple, unlinked), m=4000)
    assert cloud.offset(np.array([0, 0, zmax - 1e-3]))[0] < 0
    H = hull.Hull(*(c.as_float() for c in unlinked))
    sd, _ = H.signed_distance(np.array([[0, 0, zmax - 1e-4], [0, 0, zmax + 1e-4], [0, 0, zmax]]))
    assert sd[0] < 0 < sd[1] and abs(sd[2]) < 1e-9


def test_membership_agrees_with_a_dense_hull(order_fixtures):
    rng = np.random.default_rng(21)
    for tag in ("∅", "(1,2)", "(S,S)", "(1,2,1,2)", "(1)"):
        c1, c2 = order_fixtures[tag]
        cloud = PointCloudHull(as_tuple(c1), as_tuple(c2), m=3000)
        lo, hi = classify.bounding_box(c1.as_float(), c2.as_float(), pad=0.3)
        P = rng.uniform(lo, hi, size=(300, 3))
        H = hull.Hull(c1.as_float(), c2.as_float())
        sd, _ = H.signed_distance(P)
        off = cloud.offset(P)
        # the dense hull sits inside K, within its gap
        assert np.all(sd[off < -1e-6] < 1e-9), tag
        assert np.all(off[sd > cloud.gap + 1e-9] > 0), tag


def test_inside_points_respect_every_support_value(order_fixtures):
    rng = np.random.default_rng(3)
    W = rng.normal(size=(100, 3))
    for tag in ("∅", "(1,1,2,2)", "(1,2)"):
        c1, c2 = order_fixtures[tag]
        H = hull.Hull(c1.as_float(), c2.as_float())
        lo, hi = classify.bounding_box(c1.as_float(), c2.as_float(), pad=0.3)
        P = rng.uniform(lo, hi, size=(200, 3))
        hw = np.maximum(disc_support(as_tuple(c1), W), disc_support(as_tuple(c2), W))
        for x, m in zip(P, H.membership(P)):
            if m.verdict == "inside":
                assert np.all(W @ x <= hw + 1e-9)
            elif m.verdict == "outside":
                c = m.certificate
                assert c is not None and c["value"] > c["support"]


# ---------------------------------------------------------------------------
# line sections of the edge surface
# ---------------------------------------------------------------------------

def _sympy_section(c1, c2, A, B):
    """Degree and real-root count of the eliminant, built from scratch."""
    f1 = circle_forms(*as_tuple(c1))
    f2 = [g.subs({s: u, t: v}, simultaneous=True) for g in circle_forms(*as_tuple(c2))]
    E = edge_determinant(f1, f2)
    rows = [f1, f2, [1, *[sp.Rational(x) for x in A]], [1, *[sp.Rational(x) for x in B]]]
    M = sp.expand(sp.Matrix(rows).det())
    r = sp.resultant(sp.Poly(E.subs({t: 1, v: 1}), u), sp.Poly(M.subs({t: 1, v: 1}), u))
    P = sp.Poly(sp.expand(r.as_expr()), s)
    return P.degree(), len(sp.real_roots(P))


def test_eight_real_points_on_the_unlinked_pair(unlinked):
    A, B = (0, F(1, 10), F(1, 10)), (1, F(1, 10), F(1, 10))
    ls = hull.line_section_count(*unlinked, A, B)
    assert ls.total_with_multiplicity == 8 and ls.real_count == 8
    assert _sympy_section(*unlinked, ("0", "1/10", "1/10"), ("1", "1/10", "1/10")) == (8, 8)
    # every real point lies on the line
    for p in ls.real_points:
        x = np.asarray(p["point"])
        assert abs(x[1] - 0.1) < 1e-9 and abs(x[2] - 0.1) < 1e-9


def test_random_lines_meet_the_surface_eight_times(unlinked):
    rng = random.Random(17)
    checked = 0
    for _ in range(40):
        A = tuple(F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        B = tuple(F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        if A == B:
            continue
        ls = hull.line_section_count(*unlinked, A, B)
        assert ls.total_with_multiplicity == 8
        if checked < 3:
            deg, _ = _sympy_section(*unlinked, [str(x) for x in A], [str(x) for x in B])
            assert deg == 8
            checked += 1


def test_tangent_to_the_plane_drops_the_degree(order_fixtures):
    c1, c2 = order_fixtures["(1)"]
    ls = hull.line_section_count(c1, c2, (F(1, 3), F(1, 7), F(2, 9)), (F(-2, 5), F(3, 4), F(5, 11)))
    assert ls.total_with_multiplicity < 8
    assert sum(ls.removed) >= 1


def test_coincident_points_do_not_define_a_line(unlinked):
    with pytest.raises(hull.DegenerateLine):
        hull.line_section_count(*unlinked, (0, 0, 0), (0, 0, 0))


# ---------------------------------------------------------------------------
# boundary mesh
# ---------------------------------------------------------------------------

def _oriented_closed(mesh):
    seen = {}
    for a, b, c in mesh.triangles:
        for e in ((a, b), (b, c), (c, a)):
            seen[e] = seen.get(e, 0) + 1
    return all(n == 1 and (e[1], e[0]) in seen for e, n in seen.items())


def test_oloid_area(oloid):
    mesh = hull.boundary_mesh(*oloid, n=1024)
    assert mesh.area() == pytest.approx(4 * math.pi, rel=5e-3)
    assert mesh.boundary_edges() == 0 and mesh.euler_characteristic() == 2


def test_disjoint_mesh_is_a_sphere(order_fixtures):
    mesh = hull.boundary_mesh(*order_fixtures["∅"], n=128)
    assert set(mesh.groups) == {"ruled", "face_D1", "face_D2"}
    assert mesh.euler_characteristic() == 2 and _oriented_closed(mesh)


def test_unlinked_mesh_vertices_are_on_the_boundary(unlinked):
    mesh = hull.boundary_mesh(*unlinked, n=512)
    H = hull.Hull(*(c.as_float() for c in unlinked))
    sd, _ = H.signed_distance(mesh.vertices)
    assert np.abs(sd).max() <= 1e-6


@pytest.mark.parametrize("tag", classify.ORDER_TAGS)
def test_meshes_are_closed_and_match_the_dense_hull(tag, order_fixtures):
    c1, c2 = order_fixtures[tag]
    mesh = hull.boundary_mesh(c1, c2, n=256)
    assert mesh.boundary_edges() == 0 and mesh.euler_characteristic() == 2
    assert _oriented_closed(mesh)
    ref = PointCloudHull(as_tuple(c1), as_tuple(c2), m=3000).area
    assert mesh.area() == pytest.approx(ref, rel=2e-3)
    # outward: the signed volume is positive
    V, T = mesh.vertices, mesh.triangles
    vol = np.einsum("ij,ij->i", V[T[:, 0]], np.cross(V[T[:, 1]], V[T[:, 2]])).sum() / 6
    assert vol > 0


def test_meshes_survive_rigid_motions(order_fixtures):
    rng = random.Random(1)
    for tag, (c1, c2) in order_fixtures.items():
        R, n, tr = fixtures.random_motion(rng)
        m1, m2 = fixtures.moved(c1, R, n, tr), fixtures.moved(c2, R, n, tr)
        a = hull.boundary_mesh(c1, c2, n=128).area()
        mesh = hull.boundary_mesh(m1, m2, n=128)
        assert mesh.boundary_edges() == 0 and _oriented_closed(mesh), tag
        assert mesh.area() == pytest.approx(a, rel=3e-3), tag


def test_small_resolution_is_rejected(unlinked):
    with pytest.raises(ValueError):
        hull.boundary_mesh(*unlinked, n=8)
