from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bicircle import polys

x, s, t = sp.symbols("x s t")

small = st.integers(-6, 6)
polys_ = st.lists(small, min_size=1, max_size=6)


def to_sympy(p):
    return sp.Poly([sp.Rational(str(c)) for c in p] or [0], x, domain="QQ")


def forms(d):
    return st.lists(small, min_size=d + 1, max_size=d + 1).map(tuple)


@given(polys_, polys_)
def test_divmod_matches_sympy(p, q):
    if not polys.trim(q):
        return
    quo, rem = polys.pdivmod(p, q)
    Q, R = sp.div(to_sympy(p), to_sympy(q), domain="QQ")
    assert to_sympy(quo) == Q
    assert to_sympy(rem) == R


@given(polys_, polys_)
def test_gcd_matches_sympy(p, q):
    g = polys.pgcd(p, q)
    G = sp.gcd(to_sympy(p), to_sympy(q)).set_domain("QQ")
    if G.is_zero:
        assert g == []
    else:
        assert to_sympy(g) == G.monic()


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=3))
def test_squarefree_rebuilds_polynomial(factors):
    p = [1]
    for root, mult in factors:
        for _ in range(mult):
            p = polys.pmul(p, [1, -root])
    dec = polys.squarefree_decomposition(p)
    rebuilt = [1]
    for f, m in dec:
        for _ in range(m):
            rebuilt = polys.pmul(rebuilt, f)
    assert polys.monic(rebuilt) == polys.monic(p)
    assert all(polys.degree(polys.pgcd(f, polys.pderiv(f))) == 0 for f, _ in dec)


@given(polys_)
def test_sturm_counts_distinct_real_roots(p):
    if polys.degree(p) < 1:
        return
    expected = len(set(sp.real_roots(to_sympy(p))))
    assert polys.sturm_count(p) == expected


@given(forms(2), forms(2))
def test_form_resultant_matches_sympy(f, g):
    F = sum(c * s**(2 - i) * t**i for i, c in enumerate(f))
    G = sum(c * s**(2 - i) * t**i for i, c in enumerate(g))
    # homogeneous resultant with formal degrees, via the Sylvester matrix
    expected = sp.Matrix([[f[0], f[1], f[2], 0], [0, f[0], f[1], f[2]],
                          [g[0], g[1], g[2], 0], [0, g[0], g[1], g[2]]]).det()
    assert polys.form_resultant(f, g) == expected
    if f[0] and g[0]:
        assert expected == sp.resultant(F.subs(t, 1), G.subs(t, 1), s)


@given(forms(3), forms(2))
def test_form_gcd_and_exact_division(f, g):
    prod = polys.form_mul(f, g)
    if polys.form_is_zero(prod):
        return
    h = polys.form_gcd(prod, g)
    q = polys.form_divexact(prod, h)
    assert polys.form_mul(q, h) == tuple(Fraction(c) for c in prod) or \
        polys.form_is_zero(polys.form_add(polys.form_mul(q, h), polys.form_scale(prod, -1)))


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_form_roots_include_infinity(rs):
    # (s - r1 t)(s - r2 t) t^2 has a double root at infinity
    f = (1,)
    for r in rs[:2]:
        f = polys.form_mul(f, (1, -r))
    f = polys.form_mul(f, (0, 0, 1))
    roots = polys.form_roots(f)
    inf = [m for z, m in roots if z == complex("inf") or abs(z) == float("inf")]
    assert sum(inf) == 2
    assert sum(m for _, m in roots) == 4


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_matches_sympy(rows):
    assert polys.det(rows) == sp.Matrix(rows).det()


@given(st.lists(st.integers(-9, 9), min_size=5, max_size=5))
def test_interpolation_recovers_quartic(coeffs):
    vals = [polys.form_eval(tuple(coeffs), Fraction(k), Fraction(1)) for k in range(5)]
    assert polys.interpolate_form(vals, 4) == tuple(Fraction(c) for c in coeffs)


def test_nullspace_is_exact():
    rows = [[1, 2, 3], [2, 4, 6]]
    ns = polys.nullspace(rows)
    assert len(ns) == 2
    for vec in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(r, vec)) == 0 for r in rows)
