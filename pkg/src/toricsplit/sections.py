"""Degree-one generation checks for lattice polytopes.

For a toric variety with an ample (or nef) divisor D, the section ring is
generated in degree one exactly when every lattice point of kP_D is a sum
of k lattice points of P_D.  That translation is standard toric geometry;
the check below is only corroboration of generation in degree one.
Quadratic relations and Koszulness are not examined.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import EmptyPolytopeError, ToricSplitError
from .lattice import Vector, as_vector
from .polytope import HPolytope, lattice_points


def dilate(p: HPolytope, k: int) -> HPolytope:
    """kP: every bound multiplied by k."""
    if not isinstance(k, numbers.Integral) or isinstance(k, bool) or k < 1:
        raise ToricSplitError(f"dilation factor must be an integer >= 1, got {k!r}")
    return p.scaled(k)


@dataclass
class NormalityReport:
    polytope: HPolytope
    k_max: int
    passed: bool
    counterexample: Vector | None = None
    k: int | None = None
    checked: int = 0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "polytope": [[list(n), str(b)] for n, b in self.polytope.constraints],
            "k_max": self.k_max,
            "verdict": self.verdict,
            "counterexample": None if self.counterexample is None else {"k": self.k, "point": list(self.counterexample)},
            "points_checked": self.checked,
        }


def _points(p: HPolytope) -> list[Vector]:
    p.rational_bounds  # raises on empty or unbounded polyhedra
    pts = lattice_points(p)
    if not pts:
        raise EmptyPolytopeError("polytope has no lattice points")
    return pts


def normality_check(p: HPolytope, k_max: int) -> NormalityReport:
    """Is every lattice point of kP a sum of k lattice points of P, for k <= k_max?

    Dynamic programming: the k-fold sums are S_{k-1} + P.  The first
    failure (smallest k, then lexicographically first point) is reported.
    """
    if not isinstance(k_max, numbers.Integral) or k_max < 1:
        raise ToricSplitError(f"k_max must be >= 1, got {k_max!r}")
    base = _points(p)
    sums = set(base)
    checked = len(base)
    for k in range(2, k_max + 1):
        sums = {tuple(a + b for a, b in zip(s, x)) for s in sums for x in base}
        for m in lattice_points(dilate(p, k)):
            checked += 1
            if m not in sums:
                return NormalityReport(p, k_max, False, m, k, checked)
    return NormalityReport(p, k_max, True, None, None, checked)


def find_decomposition(p: HPolytope, point: Sequence[int], k: int) -> list[Vector] | None:
    """Lattice points x_1 <= ... <= x_k of P with sum ``point``, or None.

    Exhaustive depth-first search, independent of the sumset recursion in
    :func:`normality_check`.
    """
    if not isinstance(k, numbers.Integral) or k < 1:
        raise ToricSplitError(f"k must be >= 1, got {k!r}")
    point = as_vector(point)
    base = _points(p)
    if len(point) != p.dim:
        raise ToricSplitError("dimension mismatch")

    @lru_cache(maxsize=None)
    def search(target: Vector, parts: int, start: int) -> tuple[Vector, ...] | None:
        if parts == 1:
            return (target,) if target in members and base.index(target) >= start else None
        if not p._check(target, parts, strict=False):
            return None
        for idx in range(start, len(base)):
            x = base[idx]
            rest = search(tuple(a - b for a, b in zip(target, x)), parts - 1, idx)
            if rest is not None:
                return (x,) + rest
        return None

    members = set(base)
    found = search(point, k, 0)
    return None if found is None else list(found)


def _cross(o: Vector, a: Vector, b: Vector) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def polygon_from_points(points: Iterable[Sequence[int]]) -> HPolytope:
    """Convex hull of integer points in the plane, as an H-polytope with primitive normals."""
    pts = sorted({as_vector(x) for x in points})
    if not pts or any(len(x) != 2 for x in pts):
        raise ToricSplitError("need at least one point in the plane")
    if len(pts) < 3:
        hull = pts
    else:
        lower: list[Vector] = []
        for x in pts:
            while len(lower) >= 2 and _cross(lower[-2], lower[-1], x) <= 0:
                lower.pop()
            lower.append(x)
        upper: list[Vector] = []
        for x in reversed(pts):
            while len(upper) >= 2 and _cross(upper[-2], upper[-1], x) <= 0:
                upper.pop()
            upper.append(x)
        hull = lower[:-1] + upper[:-1]
    if len(hull) == 1:
        (x, y), = hull
        cons = [((1, 0), x), ((-1, 0), -x), ((0, 1), y), ((0, -1), -y)]
        return HPolytope(2, tuple((n, Fraction(b)) for n, b in cons))
    if len(hull) == 2 or all(_cross(hull[0], hull[1], z) == 0 for z in hull):
        a, b = min(hull), max(hull)
        return _segment(a, b)
    cons = []
    for i, a in enumerate(hull):
        b = hull[(i + 1) % len(hull)]
        # counterclockwise order: the inward normal is the edge turned left
        normal = _primitive((a[1] - b[1], b[0] - a[0]))
        cons.append((normal, Fraction(normal[0] * a[0] + normal[1] * a[1])))
    return HPolytope(2, tuple(cons))


def _primitive(v: Vector) -> Vector:
    g = gcd(*v)
    return tuple(x // g for x in v)


def _segment(a: Vector, b: Vector) -> HPolytope:
    d = _primitive((b[0] - a[0], b[1] - a[1]))
    n = (-d[1], d[0])
    level = n[0] * a[0] + n[1] * a[1]
    cons = [
        (n, Fraction(level)),
        ((-n[0], -n[1]), Fraction(-level)),
        (d, Fraction(d[0] * a[0] + d[1] * a[1])),
        ((-d[0], -d[1]), Fraction(-(d[0] * b[0] + d[1] * b[1]))),
    ]
    return HPolytope(2, tuple(cons))


def reeve_tetrahedron(r: int) -> HPolytope:
    """conv{0, e1, e2, (1, 1, r)}: lattice points only at the vertices, not normal for r >= 2."""
    if r < 1:
        raise ToricSplitError(f"need r >= 1, got {r}")
    cons = [((0, 0, 1), 0), ((0, r, -1), 0), ((r, 0, -1), 0), ((-r, -r, 1), -r)]
    return HPolytope(3, tuple((n, Fraction(b)) for n, b in cons))
