"""Brute-force checks of splitting maps on truncated affine-chart semigroup rings.

On the chart U_sigma, F_* of the coordinate ring is the semigroup ring of
the fractional points of the dual cone of sigma.  Every check here walks the
finite truncation ``0 <= <u, v_rho> <= B`` (rho a ray of sigma) and tests the
relevant property element by element.  Nothing here reuses the closed-form
criteria from :mod:`toricsplit.splitting`; the point is to catch mistakes
in them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Protocol, Sequence

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

from . import _exact
from .errors import ToricSplitError
from .fan import Cone, Fan, all_cones, diagonal_cone
from .lattice import FractionalPoint, Vector, dot
from .polytope import HPolytope, anticanonical_polytope, interior_points
from .splitting import LaurentPolynomial, SplittingMap

DEFAULT_BOUND = 3


@dataclass(frozen=True)
class ChartGrid:
    cone: Cone
    q: int
    bound: int
    points: tuple[FractionalPoint, ...]


@dataclass
class OracleReport:
    check: str
    passed: bool
    elements_checked: int
    counterexample: dict | None = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "elements_checked": self.elements_checked,
            "counterexample": self.counterexample,
        }


def _chart_polytope(fan: Fan, cone: Cone, bound: int) -> HPolytope:
    rays = fan.cone_rays(cone)
    if _exact.rank(rays) != fan.dim:
        raise ToricSplitError(
            f"cone {list(cone.ray_indices)} is not full-dimensional; its chart truncation is infinite"
        )
    if bound < 0:
        raise ToricSplitError(f"bound must be >= 0, got {bound}")
    cons = [(v, 0) for v in rays] + [(tuple(-x for x in v), -bound) for v in rays]
    return HPolytope(fan.dim, tuple(cons))


def _grid(fan: Fan, cone: Cone, q: int, bound: int) -> Iterator[Vector]:
    return _chart_polytope(fan, cone, bound).iter_numerators(q)


def chart_grid(fan: Fan, cone: Cone, q: int, bound: int) -> ChartGrid:
    """Points u of the dual cone in (1/q)M with <u, v_rho> <= bound on every ray of the cone."""
    pts = tuple(FractionalPoint(nums, q) for nums in _grid(fan, cone, q, bound))
    return ChartGrid(cone, q, bound, pts)


def _chart_index(fan: Fan, cone: Cone) -> int | None:
    try:
        return fan.max_cones.index(cone)
    except ValueError:
        return None


def brute_force_regularity(a: FractionalPoint, fan: Fan, cone: Cone, q: int, bound: int) -> OracleReport:
    """Does pi_a send every grid monomial of the chart back into the chart's ring?"""
    if a.q != q:
        raise ToricSplitError(f"denominator mismatch: {a.q} != {q}")
    rays = fan.cone_rays(cone)
    checked = 0
    for u in _grid(fan, cone, q, bound):
        s = [x + y for x, y in zip(a.numerators, u)]
        if any(x % q for x in s):
            continue
        checked += 1
        m = tuple(x // q for x in s)
        if any(dot(m, v) < 0 for v in rays):
            return OracleReport(
                "regularity",
                False,
                checked,
                {"chart": _chart_index(fan, cone), "element": list(u), "den": q, "image": list(m)},
            )
    return OracleReport("regularity", True, checked)


def verify_splitting_law(pi: SplittingMap, bound: int = DEFAULT_BOUND) -> OracleReport:
    """pi(x^u) == x^u for every lattice point u of every truncated chart."""
    fan, q = pi.ambient, pi.q
    checked = 0
    for idx, cone in enumerate(fan.max_cones):
        for m in _grid(fan, cone, 1, bound):
            checked += 1
            image = pi.apply_numerators(tuple(q * x for x in m))
            if image != {m: 1}:
                return OracleReport(
                    "splitting-law",
                    False,
                    checked,
                    {"chart": idx, "element": list(m), "image": LaurentPolynomial(image).to_json()},
                )
    return OracleReport("splitting-law", True, checked)


def _merge(image: dict, lo: int, mid: int, hi: int) -> dict:
    out: dict[Vector, int] = {}
    for e, c in image.items():
        k = e[:lo] + tuple(x + y for x, y in zip(e[lo:mid], e[mid:hi])) + e[hi:]
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def _power_rays(fan: Fan, n: int) -> tuple[Vector, ...]:
    d = fan.dim
    return tuple((0,) * (s * d) + v + (0,) * ((n - s - 1) * d) for s in range(n) for v in fan.rays)


def verify_semidiagonal_compatibility(
    fan: Fan, q: int, n: int, i: int, pi: SplittingMap, bound: int = DEFAULT_BOUND
) -> OracleReport:
    """Check pi(F_* I) restricts to zero on Delta_i, on every chart sigma^n.

    The elements tested are the binomials x^b - x^b' of the truncated chart
    with b and b' equal outside slots i, i+1 and with equal slot-sums there;
    they span the chart part of F_* I(Delta_i) up to the bound.  Within each
    group of equal restrictions, the base element is the first integral one
    (else the first one), so a failure reads as x^b * pi(1 - x^(u,-u)).
    """
    d = fan.dim
    if not 1 <= i < n:
        raise ToricSplitError(f"need 1 <= i < n, got i={i}, n={n}")
    if pi.q != q:
        raise ToricSplitError(f"map has q={pi.q}, expected {q}")
    if pi.ambient.rays != _power_rays(fan, n):
        raise ToricSplitError(f"map is not defined on the {n}-fold power of this fan")
    lo, mid, hi = (i - 1) * d, i * d, (i + 1) * d
    name = "diagonal" if n == 2 else f"semidiagonal-{i}"
    checked = 0
    for idx, cone in enumerate(fan.max_cones):
        groups: dict[Vector, list[Vector]] = {}
        for b in _grid(pi.ambient, diagonal_cone(fan, cone, n), q, bound):
            key = b[:lo] + tuple(x + y for x, y in zip(b[lo:mid], b[mid:hi])) + b[hi:]
            groups.setdefault(key, []).append(b)
        for key, members in groups.items():
            if len(members) < 2:
                continue
            base = next((b for b in members if not any(x % q for x in b)), members[0])
            ref = _merge(pi.apply_numerators(base), lo, mid, hi)
            for b in members:
                if b is base:
                    continue
                checked += 1
                other = _merge(pi.apply_numerators(b), lo, mid, hi)
                if other != ref:
                    image = LaurentPolynomial(ref) - LaurentPolynomial(other)
                    normalized = None
                    if not any(x % q for x in key):
                        normalized = image.shifted([-(x // q) for x in key]).to_json()
                    return OracleReport(
                        name,
                        False,
                        checked,
                        {
                            "chart": idx,
                            "slot": i,
                            "base": list(base),
                            "other": list(b),
                            "den": q,
                            "shift": [y - x for x, y in zip(base, b)],
                            "image": image.to_json(),
                            "normalized": normalized,
                        },
                    )
    return OracleReport(name, True, checked)


def verify_diagonal_compatibility(fan: Fan, q: int, pi: SplittingMap, bound: int = DEFAULT_BOUND) -> OracleReport:
    """Compatibility of a map on X x X with the diagonal, on the charts sigma x sigma."""
    return verify_semidiagonal_compatibility(fan, q, 2, 1, pi, bound)


def compatible_semidiagonal_splitting_exists(fan: Fan, q: int, n: int, characteristic: int = 0) -> bool:
    """Is there any splitting of X^n compatible with every Delta_i at this q?

    Exact linear algebra instead of a search.  A map on X^n is a
    combination of pi_a over the interior points a = (a_1, ..., a_n) of
    P_{-K}^n, and the compatibility conditions only couple points with the
    same slot total, so it is enough to look at terms with total zero.
    On the torus, compatibility with Delta_i says: for fixed slots outside
    i, i+1 and fixed a_i + a_{i+1}, the coefficient sum over a_i in a
    class of (1/q)M/M is the same for every class.  Together with c_0 = 1
    this is a linear system; the answer is whether it is consistent over
    Q (``characteristic=0``) or over GF(p).  For n = 2 it reproduces the
    diagonal criterion.
    """
    if n < 2:
        raise ToricSplitError(f"need n >= 2 factors, got {n}")
    d = fan.dim
    pts = [p.numerators for p in interior_points(anticanonical_polytope(fan), q)]
    inside = set(pts)
    terms = []
    for head in itertools.product(pts, repeat=n - 1):
        last = tuple(-sum(c) for c in zip(*head))
        if last in inside:
            terms.append(head + (last,))
    col = {t: j for j, t in enumerate(terms)}
    classes = list(itertools.product(range(q), repeat=d))
    rows: list[dict[int, int]] = []
    for i in range(n - 1):
        groups: dict[tuple, dict[Vector, list[int]]] = {}
        for t in terms:
            merged = tuple(x + y for x, y in zip(t[i], t[i + 1]))
            key = t[:i] + (merged,) + t[i + 2:]
            cls = tuple(x % q for x in t[i])
            groups.setdefault(key, {}).setdefault(cls, []).append(col[t])
        for by_class in groups.values():
            base = by_class.get(classes[0], [])
            for c in classes[1:]:
                row: dict[int, int] = {}
                for j in by_class.get(c, []):
                    row[j] = row.get(j, 0) + 1
                for j in base:
                    row[j] = row.get(j, 0) - 1
                row = {j: v for j, v in row.items() if v}
                if row:
                    rows.append(row)
    zero = ((0,) * d,) * n
    rows.append({col[zero]: 1})
    dom = QQ if characteristic == 0 else GF(characteristic)
    m = len(terms)
    entries = {r: {j: dom(v) for j, v in row.items()} for r, row in enumerate(rows)}
    a = DomainMatrix(entries, (len(rows), m), dom)
    augmented = {r: dict(row) for r, row in entries.items()}
    augmented[len(rows) - 1][m] = dom(1)
    ab = DomainMatrix(augmented, (len(rows), m + 1), dom)
    return a.rank() == ab.rank()


class IdealPredicate(Protocol):
    name: str

    def __call__(self, fan: Fan, cone: Cone, nums: Sequence[int], q: int) -> bool: ...


@dataclass(frozen=True)
class DivisorUnion:
    """Ideal of the union of the invariant divisors: u in the interior of the dual cone."""

    name: str = "divisors"

    def __call__(self, fan, cone, nums, q):
        return all(dot(nums, fan.rays[i]) > 0 for i in cone.ray_indices)


@dataclass(frozen=True)
class OrbitClosure:
    """Ideal of the orbit closure V(tau): u not in tau-perp.

    On charts whose cone does not contain tau the orbit closure is absent
    and the ideal is the whole ring.
    """

    face: Cone

    @property
    def name(self) -> str:
        return "orbit:" + ",".join(map(str, self.face.ray_indices))

    def __call__(self, fan, cone, nums, q):
        if not set(self.face.ray_indices) <= set(cone.ray_indices):
            return True
        return any(dot(nums, fan.rays[i]) != 0 for i in self.face.ray_indices)


def orbit_closure_predicates(fan: Fan) -> list[OrbitClosure]:
    return [OrbitClosure(c) for c in all_cones(fan)]


def ideal_predicate(fan: Fan, name: str) -> IdealPredicate:
    """Look up ``divisors`` or ``orbit:<i,j,...>`` (ray indices of a cone of the fan)."""
    if name == "divisors":
        return DivisorUnion()
    if name.startswith("orbit:"):
        try:
            face = Cone(tuple(int(x) for x in name[len("orbit:"):].split(",")))
        except ValueError:
            raise ToricSplitError(f"unknown predicate {name!r}") from None
        if face not in all_cones(fan):
            raise ToricSplitError(f"unknown predicate {name!r}: not a cone of the fan")
        return OrbitClosure(face)
    raise ToricSplitError(f"unknown predicate {name!r}")


def verify_monomial_ideal_compatibility(
    pi: SplittingMap, fan: Fan, predicate: IdealPredicate, bound: int = DEFAULT_BOUND
) -> OracleReport:
    """Every monomial of pi(x^u), for x^u in F_* I on a chart, must lie in I again."""
    if isinstance(predicate, str):
        predicate = ideal_predicate(fan, predicate)
    q = pi.q
    checked = 0
    for idx, cone in enumerate(fan.max_cones):
        for u in _grid(fan, cone, q, bound):
            if not predicate(fan, cone, u, q):
                continue
            checked += 1
            image = pi.apply_numerators(u)
            for m in sorted(image):
                if not predicate(fan, cone, m, 1):
                    return OracleReport(
                        f"ideal:{predicate.name}",
                        False,
                        checked,
                        {
                            "chart": idx,
                            "element": list(u),
                            "den": q,
                            "image": LaurentPolynomial(image).to_json(),
                            "monomial": list(m),
                        },
                    )
    return OracleReport(f"ideal:{predicate.name}", True, checked)
