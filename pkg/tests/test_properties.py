"""Hypothesis checks of the invariants stated for each module."""

from math import gcd

from hypothesis import assume, given
from hypothesis import strategies as st

from toricsplit.fan import builtin, dual_cone_contains, product_fan
from toricsplit.lattice import FractionalPoint, coset_class, enumerate_classes, pairing, primitive
from toricsplit.oracle import brute_force_regularity
from toricsplit.polytope import anticanonical_polytope, bounding_box, diagonal_splitting_polytope, interior_points
from toricsplit.sections import find_decomposition, normality_check, polygon_from_points
from toricsplit.splitting import (
    LaurentPolynomial,
    NonSplitWitness,
    SplitCertificate,
    apply,
    apply_element,
    canonical_splitting,
    decide_by_enumeration,
    diagonal_splitting,
    is_diagonally_split,
    regular_on_chart,
    restrict_semidiagonal,
)

FAN_NAMES = ["pn:1", "pn:2", "hirzebruch:0", "hirzebruch:1", "hirzebruch:2", "hirzebruch:3", "hirzebruch:5"]
SPLIT_CASES = [("pn:1", 2), ("pn:1", 3), ("pn:2", 2), ("hirzebruch:1", 2), ("hirzebruch:1", 3), ("hirzebruch:2", 3)]

fans = st.sampled_from(FAN_NAMES).map(builtin)
qs = st.integers(2, 6)
ints = st.integers(-30, 30)


def points(dim, q):
    return st.lists(ints, min_size=dim, max_size=dim).map(lambda v: FractionalPoint(tuple(v), q))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=4).filter(any))
def test_primitive_is_primitive_and_idempotent(v):
    p = primitive(v)
    assert gcd(*p) == 1
    assert primitive(p) == p


@given(st.data(), st.integers(1, 3), qs)
def test_coset_class_translation_invariant(data, n, q):
    u = data.draw(points(n, q))
    m = data.draw(st.lists(ints, min_size=n, max_size=n))
    assert coset_class(u + tuple(m)) == coset_class(u)
    assert coset_class(u).representative().numerators == tuple(x % q for x in u.numerators)


@given(st.integers(1, 3), st.integers(2, 4), st.lists(st.integers(0, 64), max_size=4))
def test_class_partitions_concatenate(n, q, cuts):
    total = q**n
    bounds = sorted({0, total, *[min(c, total) for c in cuts]})
    pieces = [c for a, b in zip(bounds, bounds[1:]) for c in enumerate_classes(n, q, a, b)]
    full = list(enumerate_classes(n, q))
    assert pieces == full and len(set(full)) == total


@given(st.data(), st.integers(1, 3), qs)
def test_pairing_bilinear(data, n, q):
    u, w = data.draw(points(n, q)), data.draw(points(n, q))
    v = tuple(data.draw(st.lists(ints, min_size=n, max_size=n)))
    assert pairing(u + w, v) == pairing(u, v) + pairing(w, v)


@given(st.data(), fans)
def test_dual_cone_membership(data, fan):
    cone = data.draw(st.sampled_from(fan.max_cones))
    q = data.draw(qs)
    u = data.draw(points(fan.dim, q))
    inside = all(pairing(u, fan.rays[i]) >= 0 for i in cone.ray_indices)
    assert dual_cone_contains(fan, cone, u) == inside


@given(st.data(), fans, qs)
def test_splitting_polytope_is_intersection(data, fan, q):
    u = data.draw(points(fan.dim, q).filter(lambda p: max(map(abs, p.numerators)) <= 3 * q))
    f, k = diagonal_splitting_polytope(fan), anticanonical_polytope(fan)
    assert f.contains(u) == (k.contains(u) and k.contains(-u))
    assert f.contains_strict(u) == (k.contains_strict(u) and k.contains_strict(-u))
    assert f.contains_strict(u) == f.contains_strict(-u)


@given(fans, qs)
def test_interior_points_are_interior(fan, q):
    f = diagonal_splitting_polytope(fan)
    pts = interior_points(f, q)
    assert FractionalPoint.zero(fan.dim, q) in pts
    assert FractionalPoint.zero(fan.dim, q) in interior_points(anticanonical_polytope(fan), q)
    assert all(f.contains_strict(u) for u in pts)
    assert len(pts) == len(set(pts))
    box = bounding_box(f)
    assert all(lo * q <= x <= hi * q for u in pts for x, lo, hi in zip(u.numerators, box.lower, box.upper))


@given(fans, qs)
def test_certificates_revalidate_and_algorithms_agree(fan, q):
    result = is_diagonally_split(fan, q)
    assert result == decide_by_enumeration(fan, q)
    assert result.problems(fan) == []
    if isinstance(result, SplitCertificate):
        assert len(result.representatives) == q**fan.dim
    else:
        assert isinstance(result, NonSplitWitness)


@given(st.data(), st.sampled_from(SPLIT_CASES))
def test_splitting_law_on_lattice_points(data, case):
    fan, q = builtin(case[0]), case[1]
    pi = diagonal_splitting(fan, q)
    m = tuple(data.draw(st.lists(st.integers(-5, 5), min_size=2 * fan.dim, max_size=2 * fan.dim)))
    assert apply(pi, FractionalPoint.from_lattice(m, q)) == LaurentPolynomial.monomial(m)


@given(st.data(), st.sampled_from(SPLIT_CASES))
def test_diagonal_key_identity(data, case):
    fan, q = builtin(case[0]), case[1]
    d = fan.dim
    pi = diagonal_splitting(fan, q)
    b = data.draw(points(2 * d, q))
    image = restrict_semidiagonal(apply(pi, b), 1, d)
    s = tuple(x + y for x, y in zip(b.numerators[:d], b.numerators[d:]))
    if all(x % q == 0 for x in s):
        assert image == LaurentPolynomial.monomial(tuple(x // q for x in s))
    else:
        assert image.is_zero()


@given(st.data(), fans, qs)
def test_canonical_splitting_not_compatible_with_diagonal(data, fan, q):
    u = data.draw(points(fan.dim, q).filter(lambda p: not p.is_integral()))
    pi0 = canonical_splitting(product_fan(fan, fan), q)
    element = {FractionalPoint.zero(2 * fan.dim, q): 1, FractionalPoint(u.numerators + (-u).numerators, q): -1}
    assert restrict_semidiagonal(apply_element(pi0, element), 1, fan.dim) == 1


@given(st.data(), st.sampled_from(SPLIT_CASES))
def test_constructed_terms_are_regular(data, case):
    fan, q = builtin(case[0]), case[1]
    pi = diagonal_splitting(fan, q)
    a, _ = data.draw(st.sampled_from(pi.terms))
    assert all(regular_on_chart(a, pi.ambient, c) for c in pi.ambient.max_cones)


@given(st.data(), fans, st.integers(2, 3))
def test_regularity_oracle_matches_closed_form(data, fan, q):
    box = bounding_box(anticanonical_polytope(fan))
    nums = tuple(data.draw(st.integers(q * lo, q * hi)) for lo, hi in zip(box.lower, box.upper))
    a = FractionalPoint(nums, q)
    cone = data.draw(st.sampled_from(fan.max_cones))
    worst = max(abs(pairing(a, v)) for v in fan.rays)
    bound = q * (1 + int(-(-worst // 1)))
    assert brute_force_regularity(a, fan, cone, q, bound).passed == regular_on_chart(a, fan, cone)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=7))
def test_lattice_polygons_are_normal(pts):
    assert normality_check(polygon_from_points(pts), 3).passed


@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=5), st.data())
def test_decompositions_readd(pts, data):
    poly = polygon_from_points(pts)
    k = data.draw(st.integers(1, 3))
    summands = [data.draw(st.sampled_from(sorted(set(pts)))) for _ in range(k)]
    target = tuple(map(sum, zip(*summands)))
    parts = find_decomposition(poly, target, k)
    assume(parts is not None)
    assert tuple(map(sum, zip(*parts))) == target and len(parts) == k
