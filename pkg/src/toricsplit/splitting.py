"""Module maps sum c_a pi_a, the diagonal-splitting decision, and explicit splittings.

For a fractional point a, ``pi_a`` sends ``x^u`` to ``x^(a+u)`` when ``a + u``
is a lattice point and to zero otherwise.  A finite integer combination of
these is regular on X exactly when every ``a`` with nonzero coefficient is in
the interior of the anticanonical polytope, and it is a splitting exactly
when the coefficient of ``a = 0`` is one.
"""

from __future__ import annotations

import itertools
import numbers
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .errors import IncompleteFanError, NotDiagonallySplitError, NotRegularError, ToricSplitError
from .fan import Cone, Fan, power_fan, product_fan
from .lattice import (
    DEFAULT_ENUMERATION_CAP,
    CosetClass,
    FractionalPoint,
    Vector,
    as_vector,
    class_count,
    coset_class,
    dot,
    enumerate_classes,
)
from .polytope import (
    HPolytope,
    IntegerBox,
    anticanonical_polytope,
    bounding_box,
    diagonal_splitting_polytope,
    interior_points,
)


class LaurentPolynomial(Mapping):
    """Integer combination of monomials x^m, m in Z^k, stored as {exponent: coeff}."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        clean: dict[Vector, int] = {}
        for exp, c in (terms or {}).items():
            c = int(c)
            if c:
                exp = as_vector(exp)
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> LaurentPolynomial:
        return cls({tuple(exponent): coeff})

    @classmethod
    def one(cls, n: int) -> LaurentPolynomial:
        return cls.monomial((0,) * n)

    def __getitem__(self, exp):
        return self._terms[tuple(exp)]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __eq__(self, other):
        if isinstance(other, numbers.Integral):
            other = {(0,) * len(next(iter(self._terms), ())): other} if other else {}
        return Mapping.__eq__(self, other)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        out = dict(self._terms)
        for e, c in other.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-LaurentPolynomial(other))

    def __mul__(self, other):
        if isinstance(other, numbers.Integral):
            return LaurentPolynomial({e: c * other for e, c in self._terms.items()})
        out: dict[Vector, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def shifted(self, by: Sequence[int]) -> LaurentPolynomial:
        """Multiply by the monomial x^by."""
        return LaurentPolynomial({tuple(a + b for a, b in zip(e, by)): c for e, c in self._terms.items()})

    def to_json(self) -> list:
        return [[list(e), c] for e, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data) -> LaurentPolynomial:
        return cls({tuple(e): c for e, c in data})

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            mono = "x^(" + ", ".join(map(str, e)) + ")"
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)


def restrict_semidiagonal(p: Mapping, i: int, dim: int) -> LaurentPolynomial:
    """Restrict a function on the n-fold product to the semidiagonal Delta_i.

    Exponent slots i and i+1 (1-based, each of length ``dim``) are added
    together, so the result lives on the (n-1)-fold product.
    """
    out: dict[Vector, int] = {}
    a, b, c = (i - 1) * dim, i * dim, (i + 1) * dim
    for exp, coeff in p.items():
        if len(exp) < c or len(exp) % dim:
            raise ToricSplitError(f"exponent {exp} has no slots {i}, {i + 1} of size {dim}")
        merged = exp[:a] + tuple(x + y for x, y in zip(exp[a:b], exp[b:c])) + exp[c:]
        out[merged] = out.get(merged, 0) + coeff
    return LaurentPolynomial(out)


def regular_on_chart(a: FractionalPoint, fan: Fan, cone: Cone) -> bool:
    """pi_a is regular on U_sigma iff <a, v_rho> > -1 for each ray of sigma."""
    return all(dot(a.numerators, fan.rays[i]) > -a.q for i in cone.ray_indices)


def _coefficient(c) -> int:
    if isinstance(c, bool):
        raise ToricSplitError(f"coefficients must be integers, got {c!r}")
    if isinstance(c, numbers.Integral):
        return int(c)
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    raise ToricSplitError(f"coefficients must be integers, got {c!r}")


@dataclass(frozen=True)
class SplittingMap:
    """sum c_a pi_a on X(ambient); build with :func:`make_splitting`."""

    ambient: Fan
    q: int
    terms: tuple[tuple[FractionalPoint, int], ...]

    def coefficients(self) -> dict[FractionalPoint, int]:
        return dict(self.terms)

    def coefficient(self, a: FractionalPoint) -> int:
        return self.coefficients().get(a, 0)

    @property
    def is_splitting(self) -> bool:
        return self.coefficient(FractionalPoint.zero(self.ambient.dim, self.q)) == 1

    @cached_property
    def by_class(self) -> dict[Vector, list[tuple[Vector, int]]]:
        """Terms grouped by the residues of a mod q."""
        out: dict[Vector, list[tuple[Vector, int]]] = {}
        for a, c in self.terms:
            out.setdefault(tuple(x % self.q for x in a.numerators), []).append((a.numerators, c))
        return out

    def apply_numerators(self, nums: Sequence[int]) -> dict[Vector, int]:
        """Image of x^(nums/q) as a plain {exponent: coeff} dict (hot path)."""
        q = self.q
        hits = self.by_class.get(tuple((-x) % q for x in nums))
        if not hits:
            return {}
        out: dict[Vector, int] = {}
        for a, c in hits:
            e = tuple((x + y) // q for x, y in zip(a, nums))
            out[e] = out.get(e, 0) + c
        return out

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "dim": self.ambient.dim,
            "splitting": self.is_splitting,
            "terms": [{"a": list(a.numerators), "den": a.q, "coeff": c} for a, c in self.terms],
        }


def make_splitting(fan: Fan, q: int, terms: Mapping[FractionalPoint, int]) -> SplittingMap:
    """Validate and build sum c_a pi_a.

    Every ``a`` with a nonzero coefficient must lie strictly inside the
    anticanonical polytope of ``fan``; otherwise NotRegularError names the
    offending ray.  Maps whose zero coefficient is not one are still built
    (they are module maps, just not splittings).
    """
    if not isinstance(q, numbers.Integral) or q < 2:
        raise ToricSplitError(f"q must be an integer >= 2, got {q!r}")
    clean: dict[FractionalPoint, int] = {}
    for a, c in terms.items():
        if not isinstance(a, FractionalPoint):
            raise ToricSplitError(f"term keys must be FractionalPoints, got {a!r}")
        if a.q != q:
            raise ToricSplitError(f"term {a} has denominator {a.q}, expected {q}")
        if a.dim != fan.dim:
            raise ToricSplitError(f"term {a} does not have dimension {fan.dim}")
        c = _coefficient(c)
        if c == 0:
            continue
        for k, v in enumerate(fan.rays):
            if dot(a.numerators, v) <= -q:
                raise NotRegularError(
                    f"not regular on X: <{a}, {list(v)}> = {Fraction(dot(a.numerators, v), q)} <= -1 (ray {k})"
                )
        clean[a] = c
    return SplittingMap(fan, q, tuple(sorted(clean.items())))


def canonical_splitting(fan: Fan, q: int) -> SplittingMap:
    """pi_0: x^u -> x^u for lattice points u, 0 otherwise."""
    return make_splitting(fan, q, {FractionalPoint.zero(fan.dim, q): 1})


def apply(pi: SplittingMap, u: FractionalPoint) -> LaurentPolynomial:
    if u.q != pi.q:
        raise ToricSplitError(f"denominator mismatch: {u.q} != {pi.q}")
    if u.dim != pi.ambient.dim:
        raise ToricSplitError(f"dimension mismatch: {u.dim} != {pi.ambient.dim}")
    return LaurentPolynomial(pi.apply_numerators(u.numerators))


def apply_element(pi: SplittingMap, element: Mapping[FractionalPoint, int]) -> LaurentPolynomial:
    """Apply pi to a combination sum c_u x^u of fractional monomials."""
    out = LaurentPolynomial()
    for u, c in element.items():
        out = out + apply(pi, u) * int(c)
    return out


# -- diagonal splitting decision ---------------------------------------------


@dataclass(frozen=True)
class SplitCertificate:
    """One strict-interior representative of F_X per class of (1/q)M/M."""

    q: int
    dim: int
    representatives: tuple[tuple[CosetClass, FractionalPoint], ...]

    def as_dict(self) -> dict[CosetClass, FractionalPoint]:
        return dict(self.representatives)

    def nonzero(self) -> list[FractionalPoint]:
        return [a for cls, a in self.representatives if any(cls.residues)]

    def problems(self, fan: Fan) -> list[str]:
        """Independent re-validation; returns an empty list for a valid certificate."""
        out = []
        if self.dim != fan.dim:
            return [f"certificate dimension {self.dim} != fan dimension {fan.dim}"]
        poly = diagonal_splitting_polytope(fan)
        seen = set()
        for cls, rep in self.representatives:
            if cls.q != self.q or rep.q != self.q:
                out.append(f"class {cls}: denominator mismatch")
                continue
            if len(cls.residues) != fan.dim or rep.dim != fan.dim:
                out.append(f"class {cls}: dimension mismatch")
                continue
            if cls in seen:
                out.append(f"class {cls} listed twice")
            seen.add(cls)
            if coset_class(rep) != cls:
                out.append(f"representative {rep} does not reduce to class {cls}")
            if not poly.contains_strict(rep):
                out.append(f"representative {rep} is not in the interior of F_X")
        expected = self.q**fan.dim
        if len(seen) != expected:
            out.append(f"{len(seen)} classes covered, expected {expected}")
        return out

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "classes": [
                {"class": list(cls.residues), "rep": list(rep.numerators), "den": rep.q}
                for cls, rep in self.representatives
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> SplitCertificate:
        q = int(data["q"])
        reps = []
        for entry in data["classes"]:
            reps.append(
                (CosetClass(tuple(entry["class"]), q), FractionalPoint(tuple(entry["rep"]), int(entry.get("den", q))))
            )
        dim = len(reps[0][0].residues) if reps else 0
        return cls(q, dim, tuple(reps))


@dataclass(frozen=True)
class NonSplitWitness:
    """A class of (1/q)M/M with no representative in the interior of F_X inside ``box``."""

    q: int
    cls: CosetClass
    box: IntegerBox

    def problems(self, fan: Fan) -> list[str]:
        poly = diagonal_splitting_polytope(fan)
        if self.box.dim != fan.dim or len(self.cls.residues) != fan.dim:
            return ["witness dimension does not match the fan"]
        out = []
        if not self.box.contains_box(bounding_box(poly)):
            out.append(f"search box {self.box.to_json()} does not contain the bounding box of F_X")
        rep = _find_representative(poly, self.cls.residues, self.q, self.box)
        if rep is not None:
            out.append(f"class {self.cls} is represented by {rep}")
        return out

    def to_json(self) -> dict:
        return {"q": self.q, "class": list(self.cls.residues), "box": self.box.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> NonSplitWitness:
        q = int(data["q"])
        return cls(q, CosetClass(tuple(data["class"]), q), IntegerBox.from_json(data["box"]))


def _candidates(residues: Sequence[int], q: int, box: IntegerBox) -> Iterator[tuple[int, ...]]:
    # numerators r + q*k inside [q*lo, q*hi], each coordinate ascending, so lexicographic overall
    axes = []
    for r, lo, hi in zip(residues, box.lower, box.upper):
        start = r + q * (-((r - q * lo) // q))
        axes.append(range(start, q * hi + 1, q))
    return itertools.product(*axes)


def _find_representative(poly: HPolytope, residues, q: int, box: IntegerBox) -> FractionalPoint | None:
    # the representative in the half-open unit cube wins when it is interior
    if poly._check(residues, q, strict=True):
        return FractionalPoint(tuple(residues), q)
    for nums in _candidates(residues, q, box):
        if poly._check(nums, q, strict=True):
            return FractionalPoint(nums, q)
    return None


def _search_range(poly: HPolytope, dim: int, q: int, box: IntegerBox, start: int, stop: int):
    found = []
    for cls in enumerate_classes(dim, q, start, stop, cap=None):
        rep = _find_representative(poly, cls.residues, q, box)
        if rep is None:
            return found, cls
        found.append((cls, rep))
    return found, None


def _prepare(fan: Fan, q: int, assume_complete: bool, cap: int | None):
    if not isinstance(q, numbers.Integral) or q < 2:
        raise ToricSplitError(f"q must be an integer >= 2, got {q!r}")
    if not fan.is_complete and not assume_complete:
        raise IncompleteFanError(
            f"fan completeness is {fan.completeness.value}; pass assume_complete to override"
        )
    poly = diagonal_splitting_polytope(fan)
    box = bounding_box(poly)
    total = class_count(fan.dim, q, cap)
    return poly, box, total


def is_diagonally_split(
    fan: Fan,
    q: int,
    *,
    assume_complete: bool = False,
    workers: int = 1,
    cap: int | None = DEFAULT_ENUMERATION_CAP,
) -> SplitCertificate | NonSplitWitness:
    """Search every class of (1/q)M/M for a representative in the interior of F_X.

    Returns a certificate or a witness for the lexicographically first
    uncovered class.  The representative of a class is the point of the
    half-open unit cube [0, 1)^n when that point is interior, and otherwise
    the lexicographically smallest interior representative.
    With ``workers > 1`` the class range is split into contiguous chunks;
    the result is identical to the sequential one.
    """
    poly, box, total = _prepare(fan, q, assume_complete, cap)
    if workers <= 1 or total < 2 * workers:
        chunks = [_search_range(poly, fan.dim, q, box, 0, total)]
    else:
        step = -(-total // (4 * workers))
        bounds = [(s, min(s + step, total)) for s in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(_search_range, poly, fan.dim, q, box, s, e) for s, e in bounds]
            chunks = [f.result() for f in futures]
    reps = []
    for found, missing in chunks:
        reps.extend(found)
        if missing is not None:
            return NonSplitWitness(q, missing, box)
    return SplitCertificate(q, fan.dim, tuple(reps))


def decide_by_enumeration(
    fan: Fan,
    q: int,
    *,
    assume_complete: bool = False,
    cap: int | None = DEFAULT_ENUMERATION_CAP,
) -> SplitCertificate | NonSplitWitness:
    """Cross-check: enumerate interior points of F_X, reduce mod M, test coverage.

    Points arrive in lexicographic order and a point of the unit cube
    overrides earlier points of its class, which reproduces the
    representative choice of :func:`is_diagonally_split`.
    """
    poly, box, total = _prepare(fan, q, assume_complete, cap)
    first: dict[Vector, Vector] = {}
    for nums in poly.iter_numerators(q, strict=True):
        residues = tuple(x % q for x in nums)
        if residues == nums:
            first[residues] = nums
        else:
            first.setdefault(residues, nums)
    reps = []
    for cls in enumerate_classes(fan.dim, q, cap=None):
        nums = first.get(cls.residues)
        if nums is None:
            return NonSplitWitness(q, cls, box)
        reps.append((cls, FractionalPoint(nums, q)))
    return SplitCertificate(q, fan.dim, tuple(reps))


def witness_for_class(fan: Fan, q: int, cls: CosetClass) -> NonSplitWitness | None:
    """Exhaustively search one class; a witness if it has no interior representative."""
    poly = diagonal_splitting_polytope(fan)
    box = bounding_box(poly)
    if _find_representative(poly, cls.residues, q, box) is None:
        return NonSplitWitness(q, cls, box)
    return None


def _scan_one(fan: Fan, q: int, assume_complete: bool):
    return q, is_diagonally_split(fan, q, assume_complete=assume_complete)


def split_q_scan(
    fan: Fan, q_min: int, q_max: int, *, workers: int = 1, assume_complete: bool = False
) -> list[tuple[int, SplitCertificate | NonSplitWitness]]:
    if not 2 <= q_min <= q_max:
        raise ToricSplitError(f"need 2 <= q_min <= q_max, got {q_min}..{q_max}")
    qs = range(q_min, q_max + 1)
    if workers <= 1:
        return [_scan_one(fan, q, assume_complete) for q in qs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(_scan_one, fan, q, assume_complete) for q in qs]
        return [f.result() for f in futures]


def splitting_basis(fan: Fan, q: int) -> list[FractionalPoint]:
    """The a with pi_a regular on X: interior points of P_{-K} in (1/q)M."""
    return interior_points(anticanonical_polytope(fan), q)


# -- explicit compatible splittings ------------------------------------------


def _require_certificate(fan, q, certificate, assume_complete) -> SplitCertificate:
    if certificate is None:
        certificate = is_diagonally_split(fan, q, assume_complete=assume_complete)
    if isinstance(certificate, NonSplitWitness):
        raise NotDiagonallySplitError(f"not diagonally split at q={q}: class {certificate.cls} is not represented")
    if certificate.q != q:
        raise ToricSplitError(f"certificate is for q={certificate.q}, not {q}")
    return certificate


def diagonal_splitting(
    fan: Fan, q: int, certificate: SplitCertificate | None = None, *, assume_complete: bool = False
) -> SplittingMap:
    """pi_0 plus pi_(a, -a) for the representative a of each nonzero class."""
    return semidiagonal_splitting(fan, q, 2, certificate, assume_complete=assume_complete)


def semidiagonal_splitting(
    fan: Fan, q: int, n: int, certificate: SplitCertificate | None = None, *, assume_complete: bool = False
) -> SplittingMap:
    """Splitting of X^n compatible with every semidiagonal Delta_i.

    Terms: 0 with coefficient one, plus for each 1 <= i < n and each nonzero
    class representative a, the point with a in slot i and -a in slot i+1.
    """
    if n < 2:
        raise ToricSplitError(f"need n >= 2 factors, got {n}")
    certificate = _require_certificate(fan, q, certificate, assume_complete)
    d = fan.dim
    ambient = product_fan(fan, fan) if n == 2 else power_fan(fan, n)
    terms = {FractionalPoint.zero(n * d, q): 1}
    for i in range(n - 1):
        for a in certificate.nonzero():
            nums = [0] * (n * d)
            nums[i * d:(i + 1) * d] = a.numerators
            nums[(i + 1) * d:(i + 2) * d] = [-x for x in a.numerators]
            terms[FractionalPoint(tuple(nums), q)] = 1
    return make_splitting(ambient, q, terms)


def telescoping_splitting(
    fan: Fan, q: int, n: int, certificate: SplitCertificate | None = None, *, assume_complete: bool = False
) -> SplittingMap:
    """A splitting of X^n built from chains of class representatives.

    For every tuple (b_1, ..., b_{n-1}) of representatives (the zero class
    included) the term has slots b_1, b_2 - b_1, ..., b_{n-1} - b_{n-2},
    -b_{n-1}.  Merging slots i and i+1 of such a term forgets b_i, and b_i
    runs over every class exactly once, so the map is compatible with each
    Delta_i whenever it is regular.  Regularity needs every difference of
    two representatives to lie in the interior of P_{-K}, which fails for
    many fans; NotRegularError is raised then.  For n = 2 this is the
    diagonal splitting.
    """
    if n < 2:
        raise ToricSplitError(f"need n >= 2 factors, got {n}")
    certificate = _require_certificate(fan, q, certificate, assume_complete)
    reps = [rep.numerators for _, rep in certificate.representatives]
    ambient = product_fan(fan, fan) if n == 2 else power_fan(fan, n)
    terms: dict[FractionalPoint, int] = {}
    for chain in itertools.product(reps, repeat=n - 1):
        slots = [chain[0]]
        slots += [tuple(b - a for a, b in zip(chain[k], chain[k + 1])) for k in range(n - 2)]
        slots.append(tuple(-x for x in chain[-1]))
        p = FractionalPoint(sum(slots, ()), q)
        terms[p] = terms.get(p, 0) + 1
    return make_splitting(ambient, q, terms)
