"""Exact univariate polynomials and binary forms over the rationals.

Univariate polynomials are lists of coefficients in *descending* degree
order (``[1, 0, -2]`` is x**2 - 2).  A binary form of degree d is a tuple
``(a_0, ..., a_d)`` meaning ``sum a_i s**(d-i) t**i``; the degree is part of
the data, so ``(0, 1, 0)`` is the quadratic form ``s*t`` with roots (1:0)
and (0:1).

All routines work with :class:`fractions.Fraction` (ints are promoted) and
are exact.  Floats are accepted only by the numeric helpers at the bottom.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

Poly = list  # descending coefficients
Form = tuple  # binary form coefficients


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------

def trim(p: Sequence) -> Poly:
    p = list(p)
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def degree(p: Sequence) -> int:
    """Degree of p; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def padd(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    p = [0] * (n - len(p)) + list(p)
    q = [0] * (n - len(q)) + list(q)
    return trim([a + b for a, b in zip(p, q)])


def pneg(p: Sequence) -> Poly:
    return [-a for a in p]


def psub(p: Sequence, q: Sequence) -> Poly:
    return padd(p, pneg(q))


def pmul(p: Sequence, q: Sequence) -> Poly:
    p, q = trim(p), trim(q)
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def pscale(p: Sequence, c) -> Poly:
    return trim([a * c for a in p])


def pdivmod(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    p = [_q(a) for a in trim(p)]
    q = [_q(a) for a in trim(q)]
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return [], p
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    rem = list(p)
    lead = q[0]
    for i in range(len(quot)):
        c = rem[i] / lead
        quot[i] = c
        if c:
            for j, b in enumerate(q):
                rem[i + j] -= c * b
    return trim(quot), trim(rem[len(quot):])


def monic(p: Sequence) -> Poly:
    p = trim(p)
    if not p:
        return []
    lead = _q(p[0])
    return [_q(a) / lead for a in p]


def pgcd(p: Sequence, q: Sequence) -> Poly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    a, b = trim(p), trim(q)
    while b:
        _, r = pdivmod(a, b)
        a, b = b, r
    return monic(a)


def pderiv(p: Sequence) -> Poly:
    p = trim(p)
    n = len(p) - 1
    return trim([a * (n - i) for i, a in enumerate(p[:-1])])


def peval(p: Sequence, x):
    acc = 0
    for a in p:
        acc = acc * x + a
    return acc


def squarefree_decomposition(p: Sequence) -> list[tuple[Poly, int]]:
    """Yun's algorithm.  Returns monic (factor, multiplicity) pairs with
    non-constant factors only; the product of factor**mult is monic(p)."""
    p = monic(p)
    if len(p) <= 1:
        return []
    out = []
    a = p
    b = pderiv(a)
    c = pgcd(a, b)
    w, _ = pdivmod(a, c)
    y, _ = pdivmod(b, c)
    z = psub(y, pderiv(w))
    i = 1
    while degree(w) > 0:
        g = pgcd(w, z)
        if degree(g) > 0:
            out.append((g, i))
        w, _ = pdivmod(w, g)
        y, _ = pdivmod(z, g)
        z = psub(y, pderiv(w))
        i += 1
    return out


def sturm_count(p: Sequence) -> int:
    """Number of distinct real roots of p (exact, Sturm sequence)."""
    p = [_q(a) for a in trim(p)]
    if len(p) <= 1:
        return 0
    seq = [p, pderiv(p)]
    while degree(seq[-1]) > 0:
        _, r = pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(pneg(r))

    def changes(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def sgn(x):
        return (x > 0) - (x < 0)

    at_pos = [sgn(f[0]) for f in seq]
    at_neg = [sgn(f[0]) * (-1) ** (len(f) - 1) for f in seq]
    return changes(at_neg) - changes(at_pos)


# ---------------------------------------------------------------------------
# binary forms
# ---------------------------------------------------------------------------

def form(coeffs: Sequence) -> Form:
    return tuple(_q(c) for c in coeffs)


def form_degree(f: Form) -> int:
    return len(f) - 1


def form_is_zero(f: Form) -> bool:
    return all(c == 0 for c in f)


def form_mul(f: Form, g: Form) -> Form:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return tuple(out)


def form_add(f: Form, g: Form) -> Form:
    if len(f) != len(g):
        raise ValueError("forms of different degree")
    return tuple(a + b for a, b in zip(f, g))


def form_scale(f: Form, c) -> Form:
    return tuple(a * c for a in f)


def form_eval(f: Form, s, t):
    d = len(f) - 1
    return sum(a * s ** (d - i) * t ** i for i, a in enumerate(f))


def form_diff_s(f: Form) -> Form:
    d = len(f) - 1
    return tuple(a * (d - i) for i, a in enumerate(f[:-1]))


def form_diff_t(f: Form) -> Form:
    return tuple(a * i for i, a in enumerate(f) if i > 0)


def infinity_multiplicity(f: Form) -> int:
    """Multiplicity of the root (1:0), i.e. the power of t dividing f."""
    k = 0
    for a in f:
        if a != 0:
            return k
        k += 1
    raise ValueError("zero form")


def dehomogenize(f: Form) -> Poly:
    """f(x, 1) as a descending univariate polynomial."""
    return trim(list(f))


def homogenize(p: Sequence, d: int) -> Form:
    p = trim(p)
    if len(p) - 1 > d:
        raise ValueError("degree exceeds form degree")
    return tuple([0] * (d + 1 - len(p)) + list(p))


def form_gcd(f: Form, g: Form) -> Form:
    """Gcd of two binary forms, normalized monic in the affine chart."""
    if form_is_zero(f):
        return tuple(_q(c) for c in g)
    if form_is_zero(g):
        return tuple(_q(c) for c in f)
    k = min(infinity_multiplicity(f), infinity_multiplicity(g))
    h = pgcd(dehomogenize(f), dehomogenize(g))
    out = homogenize(h, degree(h))
    if k:
        out = form_mul(out, (Fraction(0),) * k + (Fraction(1),))
    return out


def form_divexact(f: Form, g: Form) -> Form:
    """f / g for binary forms with g | f (exact)."""
    kf, kg = infinity_multiplicity(f), infinity_multiplicity(g)
    if kg > kf:
        raise ValueError("not divisible")
    q, r = pdivmod(dehomogenize(f), dehomogenize(g))
    if r:
        raise ValueError("not divisible")
    return homogenize(q, len(f) - len(g))


def form_squarefree(f: Form) -> tuple[Fraction, list[tuple[Form, int]]]:
    """Square-free decomposition of a nonzero binary form.

    Returns ``(c, [(factor, mult), ...])`` with f = c * prod(factor**mult),
    each factor monic in its leading affine coefficient; the root (1:0)
    appears as the linear factor ``(0, 1)`` (i.e. ``t``)."""
    k = infinity_multiplicity(f)
    p = dehomogenize(f)
    c = _q(p[0])
    parts = [(homogenize(g, degree(g)), m) for g, m in squarefree_decomposition(p)]
    if k:
        parts.append(((Fraction(0), Fraction(1)), k))
    return c, parts


def multiplicity_pattern(f: Form) -> list[int]:
    """Sorted (descending) root multiplicities of f over C, counting (1:0)."""
    _, parts = form_squarefree(f)
    pattern = []
    for g, m in parts:
        pattern.extend([m] * (len(g) - 1))
    return sorted(pattern, reverse=True)


def form_resultant(f: Form, g: Form):
    """Homogeneous resultant of two binary forms (Sylvester determinant)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return det(rows)


def det(rows: Sequence[Sequence]):
    """Exact determinant by fraction Gaussian elimination."""
    a = [[_q(x) for x in r] for r in rows]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        pv = a[col][col]
        result *= pv
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] / pv
                row_r, row_c = a[r], a[col]
                for c in range(col, n):
                    row_r[c] -= factor * row_c[c]
    return sign * result


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact basis of the right nullspace of a rational matrix."""
    a = [[_q(x) for x in r] for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def interpolate_form(values: Sequence, d: int) -> Form:
    """Recover a degree-d binary form from its values at (k, 1), k=0..d."""
    n = d + 1
    # Vandermonde in k with descending powers
    rows = [[Fraction(k) ** (d - i) for i in range(n)] + [_q(values[k])] for k in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


# ---------------------------------------------------------------------------
# numeric roots
# ---------------------------------------------------------------------------

def _polish(coeffs: np.ndarray, z: complex, steps: int = 6) -> complex:
    dp = np.polyder(coeffs)
    for _ in range(steps):
        d = np.polyval(dp, z)
        if d == 0:
            break
        step = np.polyval(coeffs, z) / d
        z = z - step
        if abs(step) <= 1e-17 * max(1.0, abs(z)):
            break
    return z


def poly_roots(p: Sequence) -> list[complex]:
    """Numeric roots of a square-free (or low-multiplicity) polynomial,
    polished by Newton steps on the exact coefficients."""
    p = trim(p)
    if len(p) <= 1:
        return []
    dtype = complex if any(isinstance(a, complex) for a in p) else float
    c = np.array([dtype(a) for a in p], dtype=dtype)
    c = c / np.max(np.abs(c))
    return [complex(_polish(c, z)) for z in np.roots(c)]


def form_roots(f: Form) -> list[tuple[complex, int]]:
    """Roots of a binary form as affine values x = s/t (``inf`` for (1:0))
    with multiplicities.  Multiplicities come from the exact square-free
    decomposition when f is rational."""
    if all(isinstance(a, (Fraction, int)) for a in f):
        _, parts = form_squarefree(form(f))
        out = []
        for g, m in parts:
            if g == (0, 1):
                out.append((complex(np.inf), m))
                continue
            for z in poly_roots(dehomogenize(g)):
                out.append((z, m))
        return out
    k = 0
    for a in f:
        if a != 0:
            break
        k += 1
    out = [(z, 1) for z in poly_roots([complex(a) if isinstance(a, complex) else float(a) for a in f[k:]])]
    if k:
        out.append((complex(np.inf), k))
    return out
