"""Exact arithmetic on the lattice M = Z^n, its refinement (1/q)M, and (1/q)M/M.

Everything here is integer or ``Fraction`` arithmetic.  A fractional point
keeps its denominator pinned at the ambient ``q`` (no gcd reduction) so that
sums, negations and coset reductions never have to renormalise.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

from .errors import EnumerationTooLarge, ToricSplitError

Vector = tuple[int, ...]

DEFAULT_ENUMERATION_CAP = 10**8


def as_vector(v: Iterable) -> Vector:
    """Coerce an iterable of integer-valued numbers to a tuple of ints."""
    out = []
    for x in v:
        if isinstance(x, bool):
            raise TypeError(f"not an integer coordinate: {x!r}")
        if isinstance(x, numbers.Integral):
            out.append(int(x))
        elif isinstance(x, Fraction) and x.denominator == 1:
            out.append(x.numerator)
        else:
            raise TypeError(f"not an integer coordinate: {x!r}")
    return tuple(out)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise ToricSplitError(f"dimension mismatch: {len(a)} != {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Iterable) -> Vector:
    """Divide an integer vector by the gcd of its coordinates."""
    v = as_vector(v)
    g = gcd(*v)
    if g == 0:
        raise ToricSplitError("not a ray direction: zero vector")
    return tuple(x // g for x in v)


@dataclass(frozen=True, order=True)
class FractionalPoint:
    """The point ``numerators / q`` of (1/q)M."""

    numerators: Vector
    q: int

    def __post_init__(self):
        object.__setattr__(self, "numerators", as_vector(self.numerators))
        if not isinstance(self.q, numbers.Integral) or self.q < 1:
            raise ToricSplitError(f"denominator must be a positive integer, got {self.q!r}")
        if not self.numerators:
            raise ToricSplitError("fractional point must have dimension >= 1")

    @classmethod
    def zero(cls, n: int, q: int) -> FractionalPoint:
        return cls((0,) * n, q)

    @classmethod
    def from_lattice(cls, m: Iterable, q: int) -> FractionalPoint:
        return cls(tuple(q * x for x in as_vector(m)), q)

    @classmethod
    def from_coords(cls, coords: Iterable, q: int) -> FractionalPoint:
        """Build from rational coordinates; each must lie in (1/q)Z."""
        nums = []
        for c in coords:
            scaled = Fraction(c) * q
            if scaled.denominator != 1:
                raise ToricSplitError(f"coordinate {c} is not in (1/{q})Z")
            nums.append(scaled.numerator)
        return cls(tuple(nums), q)

    @property
    def dim(self) -> int:
        return len(self.numerators)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.q) for x in self.numerators)

    def is_integral(self) -> bool:
        return all(x % self.q == 0 for x in self.numerators)

    def lattice_point(self) -> Vector:
        if not self.is_integral():
            raise ToricSplitError(f"{self} is not a lattice point")
        return tuple(x // self.q for x in self.numerators)

    def __add__(self, other):
        if isinstance(other, FractionalPoint):
            if other.q != self.q:
                raise ToricSplitError(f"denominator mismatch: {self.q} != {other.q}")
            if other.dim != self.dim:
                raise ToricSplitError("dimension mismatch")
            return FractionalPoint(tuple(a + b for a, b in zip(self.numerators, other.numerators)), self.q)
        m = as_vector(other)
        if len(m) != self.dim:
            raise ToricSplitError("dimension mismatch")
        return FractionalPoint(tuple(a + self.q * b for a, b in zip(self.numerators, m)), self.q)

    def __neg__(self):
        return FractionalPoint(tuple(-a for a in self.numerators), self.q)

    def __sub__(self, other):
        if isinstance(other, FractionalPoint):
            return self + (-other)
        return self + tuple(-x for x in as_vector(other))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True, order=True)
class CosetClass:
    """A class of (1/q)M/M, stored by its canonical residues in [0, q)^n."""

    residues: Vector
    q: int

    def __post_init__(self):
        object.__setattr__(self, "residues", as_vector(self.residues))
        if any(not 0 <= r < self.q for r in self.residues):
            raise ToricSplitError(f"residues {self.residues} not canonical mod {self.q}")

    @classmethod
    def from_index(cls, index: int, n: int, q: int) -> CosetClass:
        digits = []
        for _ in range(n):
            index, r = divmod(index, q)
            digits.append(r)
        if index:
            raise ToricSplitError("class index out of range")
        return cls(tuple(reversed(digits)), q)

    @property
    def index(self) -> int:
        """Position in the lexicographic enumeration."""
        i = 0
        for r in self.residues:
            i = i * self.q + r
        return i

    def representative(self) -> FractionalPoint:
        return FractionalPoint(self.residues, self.q)

    def __str__(self):
        return "[" + ", ".join(str(Fraction(r, self.q)) for r in self.residues) + "]"


def pairing(u: FractionalPoint, v: Sequence[int]) -> Fraction:
    """Exact <u, v> for u in (1/q)M and v in N."""
    return Fraction(dot(u.numerators, v), u.q)


def coset_class(u: FractionalPoint) -> CosetClass:
    return CosetClass(tuple(x % u.q for x in u.numerators), u.q)


def class_count(n: int, q: int, cap: int | None = DEFAULT_ENUMERATION_CAP) -> int:
    if q < 2 or n < 1:
        raise ToricSplitError(f"need q >= 2 and n >= 1, got q={q}, n={n}")
    total = q**n
    if cap is not None and total > cap:
        raise EnumerationTooLarge(f"enumeration too large: {q}^{n} = {total} classes exceeds cap {cap}")
    return total


def enumerate_classes(
    n: int,
    q: int,
    start: int = 0,
    stop: int | None = None,
    cap: int | None = DEFAULT_ENUMERATION_CAP,
) -> Iterator[CosetClass]:
    """Yield the classes of (1/q)Z^n / Z^n in lexicographic order.

    ``start``/``stop`` select a contiguous index range, so a scan can be split
    across workers and the pieces concatenated back into the full stream.
    """
    total = class_count(n, q, cap)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    digits = list(CosetClass.from_index(start, n, q).residues)
    for _ in range(start, stop):
        yield CosetClass(tuple(digits), q)
        k = n - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] < q:
                break
            digits[k] = 0
            k -= 1
