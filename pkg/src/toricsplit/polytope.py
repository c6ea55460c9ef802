"""Rational polyhedra in H-representation and fractional lattice point enumeration.

A polytope is a list of constraints ``<u, normal> >= bound`` with integer
normals in N and rational bounds.  Enumeration walks coordinates left to
right; the admissible interval for each coordinate, given the ones already
fixed, comes from the exact Fourier-Motzkin projection onto that prefix, so
product polytopes are enumerated without scanning their whole bounding box.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Iterator, Sequence

from . import _exact
from .errors import EmptyPolytopeError, ToricSplitError, UnboundedPolytopeError
from .fan import Fan
from .lattice import FractionalPoint, Vector, as_vector, dot

Constraint = tuple[Vector, Fraction]


@dataclass(frozen=True)
class IntegerBox:
    lower: Vector
    upper: Vector

    def __post_init__(self):
        object.__setattr__(self, "lower", as_vector(self.lower))
        object.__setattr__(self, "upper", as_vector(self.upper))
        if len(self.lower) != len(self.upper) or any(a > b for a, b in zip(self.lower, self.upper)):
            raise ToricSplitError(f"invalid box {self.lower} .. {self.upper}")

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains_box(self, other: IntegerBox) -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lower, self.upper, other.lower, other.upper))

    def to_json(self) -> list[list[int]]:
        return [[a, b] for a, b in zip(self.lower, self.upper)]

    @classmethod
    def from_json(cls, data) -> IntegerBox:
        return cls(tuple(r[0] for r in data), tuple(r[1] for r in data))


@dataclass(frozen=True)
class HPolytope:
    """The polyhedron ``{u : <u, normal> >= bound for every constraint}``."""

    dim: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        cons = []
        for normal, bound in self.constraints:
            normal = as_vector(normal)
            if len(normal) != self.dim:
                raise ToricSplitError(f"normal {list(normal)} does not have dimension {self.dim}")
            if not any(normal):
                raise ToricSplitError("constraint normals must be nonzero")
            cons.append((normal, Fraction(bound)))
        object.__setattr__(self, "constraints", tuple(cons))

    @cached_property
    def _int_rows(self) -> list[tuple[Vector, int, int]]:
        return [(n, b.numerator, b.denominator) for n, b in self.constraints]

    def _check(self, nums: Sequence[int], q: int, strict: bool) -> bool:
        # <nums/q, n> >= bn/bd  <=>  <nums, n> * bd >= q * bn
        for normal, bn, bd in self._int_rows:
            lhs = sum(x * y for x, y in zip(nums, normal)) * bd
            rhs = q * bn
            if lhs < rhs or (strict and lhs == rhs):
                return False
        return True

    def contains(self, u: FractionalPoint) -> bool:
        if u.dim != self.dim:
            raise ToricSplitError("dimension mismatch")
        return self._check(u.numerators, u.q, strict=False)

    def contains_strict(self, u: FractionalPoint) -> bool:
        if u.dim != self.dim:
            raise ToricSplitError("dimension mismatch")
        return self._check(u.numerators, u.q, strict=True)

    def violated(self, u: FractionalPoint, strict: bool = False) -> list[int]:
        """Indices of constraints that ``u`` violates (or meets with equality, if strict)."""
        out = []
        for k, (normal, bound) in enumerate(self.constraints):
            value = Fraction(dot(u.numerators, normal), u.q)
            if value < bound or (strict and value == bound):
                out.append(k)
        return out

    def negated(self) -> HPolytope:
        """The polytope -P."""
        return HPolytope(self.dim, tuple((tuple(-x for x in n), b) for n, b in self.constraints))

    def intersect(self, other: HPolytope) -> HPolytope:
        if other.dim != self.dim:
            raise ToricSplitError("dimension mismatch")
        return HPolytope(self.dim, self.constraints + other.constraints)

    def product(self, other: HPolytope) -> HPolytope:
        za, zb = (0,) * self.dim, (0,) * other.dim
        cons = tuple((n + zb, b) for n, b in self.constraints) + tuple((za + n, b) for n, b in other.constraints)
        return HPolytope(self.dim + other.dim, cons)

    def scaled(self, k) -> HPolytope:
        return HPolytope(self.dim, tuple((n, b * k) for n, b in self.constraints))

    @cached_property
    def _system(self) -> _exact.System:
        return _exact.make_system(self.constraints)

    @cached_property
    def rational_bounds(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Exact (min, max) of each coordinate, by Fourier-Motzkin elimination."""
        out = []
        for j in range(self.dim):
            try:
                lo, hi = _exact.variable_bounds(self._system, j, self.dim)
            except _exact.Infeasible:
                raise EmptyPolytopeError("polyhedron is empty") from None
            if lo is None or hi is None:
                raise UnboundedPolytopeError(
                    f"polyhedron is unbounded in coordinate {j} (rays do not positively span)"
                )
            out.append((lo, hi))
        return tuple(out)

    @cached_property
    def _levels(self) -> list[list[tuple[int, Vector, int]]]:
        # _levels[j]: integer rows (c_j, prefix coefficients c_0..c_{j-1}, rhs)
        # of the projection onto x_0..x_j that actually involve x_j
        systems = [None] * (self.dim + 1)
        systems[self.dim] = self._system
        for k in range(self.dim - 1, 0, -1):
            systems[k] = _exact.eliminate(systems[k + 1], k)
        levels = []
        for j in range(self.dim):
            rows = []
            for coeffs, rhs in systems[j + 1].items():
                if coeffs[j] == 0:
                    continue
                s = rhs.denominator
                rows.append((coeffs[j] * s, tuple(c * s for c in coeffs[:j]), rhs.numerator))
            levels.append(rows)
        return levels

    def iter_numerators(self, q: int, strict: bool = False) -> Iterator[Vector]:
        """Numerator vectors of the points of P (or its interior) in (1/q)Z^n, lexicographically."""
        if q < 1:
            raise ToricSplitError(f"q must be positive, got {q}")
        try:
            self.rational_bounds
        except EmptyPolytopeError:
            return
        levels = self._levels
        n = self.dim
        prefix: list[int] = []

        def walk(j: int) -> Iterator[Vector]:
            lo = hi = None
            for cj, pre, r in levels[j]:
                t = q * r - sum(a * b for a, b in zip(pre, prefix))
                if cj > 0:
                    b = -((-t) // cj)
                    lo = b if lo is None or b > lo else lo
                else:
                    b = t // cj
                    hi = b if hi is None or b < hi else hi
            if lo is None or hi is None:
                raise UnboundedPolytopeError(f"polyhedron is unbounded in coordinate {j}")
            for m in range(lo, hi + 1):
                prefix.append(m)
                if j + 1 == n:
                    if self._check(prefix, q, strict):
                        yield tuple(prefix)
                else:
                    yield from walk(j + 1)
                prefix.pop()

        yield from walk(0)


def divisor_polytope(fan: Fan, d: Sequence) -> HPolytope:
    """P_D for D = sum d_rho D_rho: constraints <u, v_rho> >= -d_rho in ray order."""
    d = list(d)
    if len(d) != len(fan.rays):
        raise ToricSplitError(f"expected {len(fan.rays)} divisor coefficients, got {len(d)}")
    return HPolytope(fan.dim, tuple((v, -Fraction(c)) for v, c in zip(fan.rays, d)))


def anticanonical_polytope(fan: Fan) -> HPolytope:
    return divisor_polytope(fan, [1] * len(fan.rays))


def diagonal_splitting_polytope(fan: Fan) -> HPolytope:
    """{u : -1 <= <u, v_rho> <= 1 for every ray}, two constraints per ray."""
    cons = []
    for v in fan.rays:
        cons.append((v, Fraction(-1)))
        cons.append((tuple(-x for x in v), Fraction(-1)))
    return HPolytope(fan.dim, tuple(cons))


def bounding_box(p: HPolytope) -> IntegerBox:
    """Smallest integer box containing P."""
    b = p.rational_bounds
    return IntegerBox(tuple(floor(lo) for lo, _ in b), tuple(ceil(hi) for _, hi in b))


def fractional_points(p: HPolytope, q: int, strict: bool = False) -> list[FractionalPoint]:
    return [FractionalPoint(nums, q) for nums in p.iter_numerators(q, strict)]


def interior_points(p: HPolytope, q: int) -> list[FractionalPoint]:
    """Points of (1/q)Z^n strictly inside P, lexicographic."""
    return fractional_points(p, q, strict=True)


def lattice_points(p: HPolytope) -> list[Vector]:
    """Integer points of P (boundary included), lexicographic."""
    return list(p.iter_numerators(1, strict=False))
