import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicircle import classify, dual, geom3, hull
from bicircle.geom3 import Circle

from conftest import as_tuple
from oracles import support as disc_support


def oracle_member(c1, c2, o, W, tol=0.0):
    """w is a member iff the support of K - o in direction -w is at most 1."""
    o = np.asarray([float(x) for x in o])
    h = np.maximum(disc_support(as_tuple(c1), -W), disc_support(as_tuple(c2), -W)) + W @ o
    return h <= 1 + tol, h


def test_cone_of_the_unlinked_pair(unlinked):
    cone = dual.dual_cone(unlinked[0], (F(3, 2), 0, 0))
    assert cone.is_cylinder and cone.vertex is None
    for a, b, c in [(1, 2, 3), (F(1, 3), -2, 7), (0, 0, 5)]:
        assert cone((a, b, c)) == (1 - F(3, 2) * a) ** 2 - (a * a + b * b)


def test_cone_vertex_is_the_dual_plane():
    cone = dual.dual_cone(Circle((0, 0, 0), 1, (0, 0, 1)), (0, 0, F(1, 2)))
    assert not cone.is_cylinder
    assert cone.vertex == (0, 0, 2)
    assert cone((0, 0, 0)) == 1


def test_dual_body_examples(unlinked):
    db = dual.dual_body(*unlinked, o=(F(3, 2), 0, 0))
    assert db.contains([(0, 0, 0)])[0]
    bp = dual.dual_boundary_classify(db, (-0.4, 0, 0))
    assert bp.kind == "C2"
    assert np.allclose(bp.contacts[0], (4, 0, 0))
    assert not db.contains([(0.8, 0, 0)])[0]
    assert db.residuals([(0.8, 0, 0)])[0][0] == pytest.approx(-1.0)


def test_origin_must_be_interior(unlinked):
    with pytest.raises(dual.OriginNotInterior):
        dual.dual_body(*unlinked, o=(10, 0, 0))
    with pytest.raises(dual.OriginNotInterior):
        dual.dual_body(*unlinked, o=(-1, 0, 0))


def test_off_boundary_points_are_rejected(unlinked):
    db = dual.dual_body(*unlinked)
    with pytest.raises(dual.NotOnBoundary):
        dual.dual_boundary_classify(db, (0, 0, 0))


def test_oloid_cones_are_cylinders(oloid):
    db = dual.dual_body(*oloid)
    assert tuple(db.origin) == (F(1, 2), 0, 0)
    assert all(k.is_cylinder for k in db.cones)
    mesh = dual.dual_mesh(db, n=64)
    assert dual.patch_census(mesh) == {"C1": 1, "C2": 1}


def test_unlinked_dual_has_two_patches(unlinked):
    mesh = dual.dual_mesh(dual.dual_body(*unlinked), n=96)
    assert dual.patch_census(mesh) == {"C1": 1, "C2": 1}


@pytest.mark.parametrize("tag", classify.ORDER_TAGS)
def test_mesh_vertices_sit_on_the_boundary(tag, order_fixtures):
    db = dual.dual_body(*order_fixtures[tag])
    mesh = dual.dual_mesh(db, n=32)
    g = db.residuals(mesh.vertices).min(axis=1)
    assert np.abs(g).max() < 1e-8
    assert np.linalg.norm(mesh.vertices, axis=1).max() <= db.rho + 1e-9


def test_duality_against_the_disc_supports(order_fixtures):
    rng = np.random.default_rng(2)
    for tag in ("∅", "(1,1,2,2)", "(1,2)", "(S,S)", "(1,2,2,1)"):
        c1, c2 = order_fixtures[tag]
        db = dual.dual_body(c1, c2)
        W = rng.normal(size=(2000, 3)) * rng.uniform(0, 1.5 * db.rho, size=(2000, 1)) / math.sqrt(3)
        inside, h = oracle_member(c1, c2, db.origin, W)
        far = np.abs(h - 1) > 1e-10
        assert np.array_equal(db.contains(W[far], 0.0), inside[far]), tag


def test_convexity_and_boundedness(order_fixtures):
    rng = np.random.default_rng(9)
    for tag in ("∅", "(1)", "(1,2,S)", "(2c)"):
        db = dual.dual_body(*order_fixtures[tag])
        W = rng.uniform(-db.rho, db.rho, size=(6000, 3))
        mem = W[db.contains(W)]
        assert len(mem) > 50
        assert np.linalg.norm(mem, axis=1).max() < db.rho
        i, j = rng.integers(0, len(mem), size=(2, 4000))
        assert db.contains((mem[i] + mem[j]) / 2).all()


def _both_active(db, d1, d2):
    """Bisect along the great circle between a C1-owned and a C2-owned direction."""
    def owner(d):
        s = db.residuals(d)[0] - 1.0
        t = np.where(s < 0, -1.0 / np.where(s < 0, s, -1.0), np.inf)
        return int(np.argmin(t)), t
    a, b = d1, d2
    for _ in range(200):
        m = (a + b) / np.linalg.norm(a + b)
        if owner(m)[0] == owner(a)[0]:
            a = m
        else:
            b = m
    _, t = owner(a)
    return a * t.min()


def test_both_active_points_lie_on_the_edge_curve(unlinked):
    db = dual.dual_body(*unlinked)
    mesh = dual.dual_mesh(db, n=64)
    tags = np.array(mesh.vertex_tags)
    D = mesh.vertices / np.linalg.norm(mesh.vertices, axis=1)[:, None]
    ones = D[tags == "C1"]
    twos = D[tags == "C2"]
    rng = np.random.default_rng(0)
    checked = 0
    for _ in range(60):
        a, b = ones[rng.integers(len(ones))], twos[rng.integers(len(twos))]
        if a @ b < -0.5:
            continue
        w = _both_active(db, a, b)
        bp = dual.dual_boundary_classify(db, w, tol=1e-8)
        if bp.kind != "both":
            continue
        assert bp.edge_residual < 1e-8
        p, q = bp.contacts
        # the plane of w touches each circle at its contact point
        for c, x in zip(unlinked, (p, q)):
            r = hull.support(c, c, -w)
            assert r.value == pytest.approx(float(-w @ x), abs=1e-9)
        checked += 1
    assert checked >= 10


def test_boundary_bisecants_give_both_active_points(unlinked):
    db = dual.dual_body(*unlinked)
    o = np.array([float(x) for x in db.origin])
    c1, c2 = unlinked
    f1 = c1.as_float()
    hits = 0
    for th in np.linspace(0.1, 2 * math.pi, 25):
        par = geom3.angle_to_param(th)
        fan = hull.stationary_bisecants_through(c1, c2, par)
        if fan.variant != "TwoReal":
            continue
        for q_par, q in zip(fan.params, fan.points):
            if not hull.is_boundary_bisecant(c1, c2, (par, q_par)):
                continue
            p, d = f1.point(th), f1.tangent(th)
            N = np.cross(d, np.real(q) - p)
            w = N / (N @ (o - p))
            g = db.residuals(w)[0]
            assert np.abs(g).max() < 1e-9
            hits += 1
    assert hits > 10


def test_cone_vertices_mark_the_planar_faces(order_fixtures):
    for tag, (c1, c2) in order_fixtures.items():
        db = dual.dual_body(c1, c2)
        ot = classify.order_type(c1, c2)
        fl = classify.face_lattice(ot, c1, c2)
        for i in range(2):
            label = "1" if ot.roles[0] == i else "2"
            has_face = any(f in (f"D{label}",) or f.startswith(f"conv(D{label}") for f in fl.two_faces)
            v = db.cones[i].vertex
            if v is None:
                assert not has_face, tag
                continue
            v = np.array([float(x) for x in v])
            on = db.contains(v[None, :], 1e-12)[0]
            assert on == has_face, (tag, i)
            if on:
                assert dual.dual_boundary_classify(db, v).kind == f"vertex C{i + 1}"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_ray_scaling_lands_on_the_boundary(d):
    c1 = Circle((0, 0, 0), 1, (0, 0, 1))
    c2 = Circle((3, 0, 0), 1, (0, 1, 0))
    db = dual.dual_body(c1, c2)
    d = np.asarray(d)
    if np.linalg.norm(d) < 1e-6:
        return
    d = d / np.linalg.norm(d)
    slope = db.residuals(d)[0] - 1.0
    t = min(-1.0 / s for s in slope if s < 0)
    assert abs(db.residuals(t * d)[0].min()) < 1e-12
