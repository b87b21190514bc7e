from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bicircle import geom3
from bicircle.geom3 import Circle, Line, Plane

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def exact_circles(draw):
    a, b = draw(rationals), draw(rationals)
    center = tuple(draw(rationals) for _ in range(3))
    r = draw(st.fractions(min_value=F(1, 7), max_value=5, max_denominator=7))
    return Circle(center, r, geom3.stereographic_unit(a, b))


def test_parametrization_examples():
    pc = geom3.circle_parametrization(Circle((0, 0, 0), 1, (0, 0, 1)))
    assert pc.forms == ((1, 0, 1), (1, 0, -1), (0, 2, 0), (0, 0, 0))
    framed = Circle((3, 0, 0), 1, (0, 1, 0), frame=((-1, 0, 0), (0, 0, 1)))
    assert geom3.circle_parametrization(framed).forms == ((1, 0, 1), (2, 0, 4), (0, 0, 0), (0, 2, 0))
    big = geom3.circle_parametrization(Circle((0, 0, 5), 2, (0, 0, 1)))
    assert big.forms == ((1, 0, 1), (2, 0, -2), (0, 4, 0), (5, 0, 5))


def test_householder_frame_is_rational_and_orthonormal():
    n = geom3.stereographic_unit(F(1, 3), F(-2, 5))
    u, v = geom3.householder_frame(n)
    for a, b, expect in ((u, u, 1), (v, v, 1), (u, v, 0), (u, n, 0), (v, n, 0)):
        assert geom3.dot(a, b) == expect
    assert geom3.cross(u, v) == n


@pytest.mark.parametrize("param, base, direction", [
    ((1, 0), (1, 0, 0), (0, 1, 0)),
    ((0, 1), (-1, 0, 0), (0, 1, 0)),
    ((1, 1), (0, 1, 0), (1, 0, 0)),
])
def test_tangent_line_examples(param, base, direction):
    pc = geom3.circle_parametrization(Circle((0, 0, 0), 1, (0, 0, 1)))
    line = geom3.tangent_line(pc, param)
    assert line.contains(base)
    assert geom3.is_zero_vec(geom3.cross(line.direction, direction))


def test_tangent_line_rejects_zero_parameter():
    pc = geom3.circle_parametrization(Circle((0, 0, 0), 1, (0, 0, 1)))
    with pytest.raises(geom3.ZeroParameter):
        geom3.tangent_line(pc, (0, 0))


def test_plane_intersection_examples():
    l1 = geom3.plane_intersection(Plane((0, 0, 1), 0), Plane((0, 1, 0), 0))
    assert l1.contains((5, 0, 0)) and l1.contains((0, 0, 0))
    l2 = geom3.plane_intersection(Plane((0, 0, 1), 0), Plane((1, 0, 0), 1))
    assert l2.contains((1, 7, 0))
    assert geom3.is_zero_vec(geom3.cross(l2.direction, (0, 1, 0)))
    assert geom3.plane_intersection(Plane((0, 0, 1), 0), Plane((0, 0, 1), 1)).at_infinity
    with pytest.raises(geom3.IdenticalPlanes):
        geom3.plane_intersection(Plane((0, 0, 1), 1), Plane((0, 0, 2), 2))


def test_circle_line_roots_examples():
    c = Circle((0, 0, 0), 1, (0, 0, 1))
    two = geom3.circle_line_roots(c, Line((0, 0, 0), (1, 0, 0)))
    assert two.kind == "two_real" and sorted(two.roots) == [-1, 1]
    tangent = geom3.circle_line_roots(c, Line((0, 1, 0), (1, 0, 0)))
    assert tangent.kind == "tangent" and tangent.roots == (0,) and tangent.multiplicities == (2,)
    none = geom3.circle_line_roots(c, Line((0, 2, 0), (1, 0, 0)))
    assert none.kind == "complex" and none.discriminant < 0
    inf = geom3.circle_line_roots(c, Line(None, (0, 0, 1), at_infinity=True))
    assert inf.kind == "circular_points"
    with pytest.raises(geom3.LineNotInPlane):
        geom3.circle_line_roots(c, Line((0, 0, 1), (1, 0, 0)))


@settings(max_examples=100, deadline=None)
@given(exact_circles(), st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=10, max_size=10))
def test_parametrized_points_lie_on_the_circle(c, params):
    pc = geom3.circle_parametrization(c)
    for s, t in params:
        if s == 0 and t == 0:
            continue
        x = pc.affine(F(s), F(t))
        d = geom3.sub(x, c.center)
        assert geom3.norm2(d) == c.radius ** 2
        assert geom3.dot(d, c.normal) == 0
        line = geom3.tangent_line(pc, (F(s), F(t)))
        assert geom3.dot(line.direction, d) == 0


@settings(max_examples=100, deadline=None)
@given(exact_circles())
def test_linear_relation_is_the_plane(c):
    rel = geom3.circle_parametrization(c).plane_relation()
    # a0 + a.x = 0 on the plane n.x = n.c
    a0, a = rel[0], rel[1:]
    k = next(x / y for x, y in zip(a, c.normal) if y != 0)
    assert all(x == k * y for x, y in zip(a, c.normal))
    assert a0 == -k * geom3.dot(c.normal, c.center)


@settings(max_examples=100, deadline=None)
@given(exact_circles(), rationals, rationals)
def test_root_count_totals_two(c, a, b):
    u, v = c.axes()
    base = geom3.add(c.center, geom3.scale(u, a))
    direction = geom3.add(u, geom3.scale(v, b)) if b else v
    rc = geom3.circle_line_roots(c, Line(base, direction))
    assert sum(rc.multiplicities) == 2
    lam = sp.symbols("lam")
    q = sum(cf * lam ** (2 - i) for i, cf in enumerate(rc.coefficients))
    assert rc.real_count == len(set(sp.real_roots(sp.Poly(q, lam))))


def test_rationalized_snaps_to_an_exact_unit_normal():
    c = Circle((0.1, 0.2, 0.3), 1.5, (0.6, 0.0, 0.8))
    e = c.rationalized()
    assert e.exact and geom3.norm2(e.normal) == 1
    assert e.normal == (F(3, 5), 0, F(4, 5))
