"""Fixture circles: one pair per order type, named pairs, and seeded
fuzz generation with exact rational rigid motions."""

from __future__ import annotations

import json
import random
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterator

from . import geom3
from .geom3 import Circle


@lru_cache(maxsize=None)
def _data() -> dict:
    return json.loads(resources.files("bicircle").joinpath("data/fixtures.json").read_text())


def circle_from_json(d: dict) -> Circle:
    return Circle(tuple(Fraction(x) for x in d["center"]), Fraction(d["radius"]),
                  tuple(Fraction(x) for x in d["normal"]))


def order_type_records() -> list:
    return _data()["order_types"]


def order_type_fixture(tag: str) -> tuple[Circle, Circle]:
    for rec in order_type_records():
        if rec["tag"] == tag:
            return circle_from_json(rec["c1"]), circle_from_json(rec["c2"])
    raise KeyError(tag)


def order_type_fixtures() -> dict:
    return {rec["tag"]: order_type_fixture(rec["tag"]) for rec in order_type_records()}


def named(name: str) -> tuple[Circle, Circle]:
    d = _data()["named"][name]
    return circle_from_json(d["c1"]), circle_from_json(d["c2"])


def named_parametrizations(name: str) -> tuple:
    d = _data()["named"][name]["parametrizations"]
    return tuple(geom3.ParametrizedConic(tuple(tuple(Fraction(x) for x in row) for row in p)) for p in d)


# ---------------------------------------------------------------------------
# rational rigid motions
# ---------------------------------------------------------------------------

def rational_rotation(q: tuple) -> tuple:
    """Rotation matrix of the integer quaternion q, exact."""
    a, b, c, d = (Fraction(x) for x in q)
    n = a * a + b * b + c * c + d * d
    if n == 0:
        raise ValueError("zero quaternion")
    return ((a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)),
            (2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)),
            (2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d)), n


def _apply(R: tuple, n: Fraction, x: tuple) -> tuple:
    return tuple(sum(R[i][j] * x[j] for j in range(3)) / n for i in range(3))


def moved(c: Circle, R: tuple, n: Fraction, t: tuple) -> Circle:
    return Circle(geom3.add(_apply(R, n, c.center), t), c.radius, _apply(R, n, c.normal))


def random_motion(rng: random.Random, size: int = 4) -> tuple:
    while True:
        q = tuple(rng.randint(-size, size) for _ in range(4))
        if any(q):
            break
    R, n = rational_rotation(q)
    t = tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(3))
    return R, n, t


def random_unit(rng: random.Random) -> tuple:
    a = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    b = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    return geom3.stereographic_unit(a, b)


def random_circle(rng: random.Random) -> Circle:
    center = tuple(Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(3))
    return Circle(center, Fraction(rng.randint(1, 12), rng.randint(1, 4)), random_unit(rng))


def fuzz_pairs(seed: int, count: int) -> Iterator[tuple[str, Circle, Circle]]:
    """Generic random pairs mixed with moved order-type fixtures, so the
    special configurations (tangencies, shared points) keep appearing."""
    rng = random.Random(seed)
    fixtures = list(order_type_fixtures().items())
    produced = 0
    while produced < count:
        if rng.random() < 0.5:
            c1, c2 = random_circle(rng), random_circle(rng)
            if c1.normal == c2.normal or c1.normal == geom3.scale(c2.normal, -1):
                continue
            kind = "random"
        else:
            kind, (c1, c2) = rng.choice(fixtures)
            R, n, t = random_motion(rng)
            c1, c2 = moved(c1, R, n, t), moved(c2, R, n, t)
            if rng.random() < 0.5:
                c1, c2 = c2, c1
        produced += 1
        yield kind, c1, c2
