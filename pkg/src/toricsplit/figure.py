"""SVG pictures of the diagonal splitting polygon of a complete toric surface."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import atan2

from .errors import ToricSplitError
from .fan import Fan
from .lattice import CosetClass, FractionalPoint, coset_class
from .polytope import HPolytope, bounding_box, diagonal_splitting_polytope, interior_points

Point = tuple[Fraction, Fraction]


def polygon_vertices(p: HPolytope) -> list[Point]:
    """Exact vertices of a bounded 2D H-polytope, counterclockwise."""
    if p.dim != 2:
        raise ToricSplitError(f"polygon needs dimension 2, got {p.dim}")
    p.rational_bounds  # raises on empty or unbounded input
    found: set[Point] = set()
    for (n1, b1), (n2, b2) in itertools.combinations(p.constraints, 2):
        det = n1[0] * n2[1] - n1[1] * n2[0]
        if det == 0:
            continue
        x = (b1 * n2[1] - b2 * n1[1]) / det
        y = (n1[0] * b2 - n2[0] * b1) / det
        if all(n[0] * x + n[1] * y >= b for n, b in p.constraints):
            found.add((x, y))
    if not found:
        raise ToricSplitError("polygon has no vertices")
    cx = sum(v[0] for v in found) / len(found)
    cy = sum(v[1] for v in found) / len(found)
    return sorted(found, key=lambda v: atan2(float(v[1] - cy), float(v[0] - cx)))


def coverage(fan: Fan, q: int) -> tuple[dict[CosetClass, FractionalPoint], list[CosetClass]]:
    """First interior point of F_X per class, and the classes with none."""
    poly = diagonal_splitting_polytope(fan)
    reps: dict[CosetClass, FractionalPoint] = {}
    for u in interior_points(poly, q):
        cls = coset_class(u)
        if cls not in reps or u.numerators == cls.residues:
            reps[cls] = u
    missing = [
        CosetClass(r, q) for r in itertools.product(range(q), repeat=fan.dim) if CosetClass(r, q) not in reps
    ]
    return reps, missing


def splitting_polygon_svg(fan: Fan, q: int, scale: int = 60) -> str:
    """F_X, the grid (1/q)Z^2 over its bounding box, representatives and uncovered classes."""
    if fan.dim != 2:
        raise ToricSplitError(f"plot needs a 2-dimensional fan, got dimension {fan.dim}")
    poly = diagonal_splitting_polytope(fan)
    box = bounding_box(poly)
    (x0, x1), (y0, y1) = zip(box.lower, box.upper)
    pad = Fraction(1, 2)
    width = (x1 - x0 + 2 * pad) * scale
    height = (y1 - y0 + 2 * pad) * scale

    def sx(x) -> str:
        return f"{float((x - x0 + pad) * scale):.3f}"

    def sy(y) -> str:
        return f"{float((y1 + pad - y) * scale):.3f}"

    reps, missing = coverage(fan, q)
    chosen = set(reps.values())
    missing_set = set(missing)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {float(width):.3f} {float(height):.3f}" '
        f'width="{float(width):.0f}" height="{float(height):.0f}">',
        f"<title>splitting polygon, q={q}</title>",
    ]
    verts = polygon_vertices(poly)
    pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in verts)
    out.append(f'<polygon class="splitting-polygon" points="{pts}" fill="#dde8f5" stroke="#1f4e8c" stroke-width="2"/>')
    out.append(f'<circle class="origin" cx="{sx(0)}" cy="{sy(0)}" r="2" fill="black"/>')
    for a in range(q * x0, q * x1 + 1):
        for b in range(q * y0, q * y1 + 1):
            u = FractionalPoint((a, b), q)
            x, y = Fraction(a, q), Fraction(b, q)
            if u in chosen:
                out.append(
                    f'<circle class="representative" cx="{sx(x)}" cy="{sy(y)}" r="5" fill="#1f4e8c">'
                    f"<title>{u}</title></circle>"
                )
            elif coset_class(u) in missing_set:
                d = 5
                out.append(
                    f'<path class="uncovered" d="M{float((x - x0 + pad) * scale) - d:.3f},{float((y1 + pad - y) * scale) - d:.3f} '
                    f'l{2 * d},{2 * d} m0,{-2 * d} l{-2 * d},{2 * d}" stroke="#c0392b" stroke-width="2">'
                    f"<title>uncovered class {coset_class(u)}</title></path>"
                )
            else:
                out.append(f'<circle class="grid" cx="{sx(x)}" cy="{sy(y)}" r="1.5" fill="#999999"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
