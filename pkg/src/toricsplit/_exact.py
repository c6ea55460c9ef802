"""Exact Fourier-Motzkin elimination and rank over the rationals.

A *system* is a dict mapping a primitive integer coefficient vector ``c``
to the tightest rational right-hand side ``r`` seen for it, meaning the
inequality ``c . x >= r``.  Keying on the primitive vector removes parallel
duplicates for free, which keeps elimination cheap on product polytopes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

System = dict[tuple[int, ...], Fraction]


class Infeasible(Exception):
    """Raised when elimination derives ``0 >= r`` with ``r > 0``."""


def _add(system: System, coeffs: Sequence[int], rhs: Fraction) -> None:
    g = gcd(*coeffs)
    if g == 0:
        if rhs > 0:
            raise Infeasible
        return
    key = tuple(c // g for c in coeffs)
    r = Fraction(rhs) / g
    old = system.get(key)
    if old is None or r > old:
        system[key] = r


def make_system(rows: Iterable[tuple[Sequence, Fraction]]) -> System:
    """Build a system from rows ``(coeffs, rhs)``; coeffs may be rational."""
    system: System = {}
    for coeffs, rhs in rows:
        coeffs = [Fraction(c) for c in coeffs]
        scale = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        _add(system, [int(c * scale) for c in coeffs], Fraction(rhs) * scale)
    return system


def eliminate(system: System, j: int) -> System:
    """Project out variable ``j``.  The coordinate stays in place as a zero."""
    out: System = {}
    pos, neg = [], []
    for coeffs, rhs in system.items():
        c = coeffs[j]
        if c == 0:
            _add(out, coeffs, rhs)
        elif c > 0:
            pos.append((coeffs, rhs))
        else:
            neg.append((coeffs, rhs))
    for pc, pr in pos:
        a = pc[j]
        for nc, nr in neg:
            b = -nc[j]
            _add(out, [b * x + a * y for x, y in zip(pc, nc)], b * pr + a * nr)
    return out


def variable_bounds(system: System, j: int, n: int) -> tuple[Fraction | None, Fraction | None]:
    """Exact (min, max) of coordinate ``j`` over the polyhedron; None means unbounded.

    Raises Infeasible for an empty polyhedron.
    """
    s = system
    for k in range(n):
        if k != j:
            s = eliminate(s, k)
    lo = hi = None
    for coeffs, rhs in s.items():
        c = coeffs[j]
        value = rhs / c
        if c > 0:
            lo = value if lo is None else max(lo, value)
        else:
            hi = value if hi is None else min(hi, value)
    if lo is not None and hi is not None and lo > hi:
        raise Infeasible
    return lo, hi


def is_feasible(system: System, n: int) -> bool:
    try:
        s = system
        for k in range(n):
            s = eliminate(s, k)
    except Infeasible:
        return False
    return True


def rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank of a list of integer vectors, by exact Gaussian elimination."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][col] / rows[r][col]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r
