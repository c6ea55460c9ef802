import itertools
from fractions import Fraction

import pytest

from toricsplit.errors import (
    IncompleteFanError,
    NotDiagonallySplitError,
    NotRegularError,
    ToricSplitError,
    UnboundedPolytopeError,
)
from toricsplit.fan import Cone, build_fan, hirzebruch, product_fan, projective_space
from toricsplit.lattice import CosetClass, FractionalPoint
from toricsplit.polytope import IntegerBox
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
    make_splitting,
    regular_on_chart,
    restrict_semidiagonal,
    semidiagonal_splitting,
    split_q_scan,
    splitting_basis,
    telescoping_splitting,
    witness_for_class,
)


def P(*nums, q):
    return FractionalPoint(tuple(nums), q)


# -- Laurent polynomials and restriction ----------------------------------


def test_laurent_arithmetic():
    x = LaurentPolynomial.monomial((1, 0))
    one = LaurentPolynomial.one(2)
    assert (x - x).is_zero()
    assert (one - x) * 2 == LaurentPolynomial({(0, 0): 2, (1, 0): -2})
    assert (x * x) == LaurentPolynomial.monomial((2, 0))
    assert LaurentPolynomial.from_json((one + x).to_json()) == one + x
    assert x.shifted((0, 3)) == LaurentPolynomial.monomial((1, 3))
    assert LaurentPolynomial({(0,): 0}) == 0


def test_restrict_examples():
    u = (2, -1)
    p = LaurentPolynomial.monomial(u + tuple(-x for x in u))
    assert restrict_semidiagonal(p, 1, 2) == LaurentPolynomial.one(2)
    assert restrict_semidiagonal(LaurentPolynomial.one(4) - p, 1, 2).is_zero()
    q = LaurentPolynomial({(1, 0, 0, 1): 2})
    assert restrict_semidiagonal(q, 1, 2) == LaurentPolynomial({(1, 1): 2})
    with pytest.raises(ToricSplitError):
        restrict_semidiagonal(q, 2, 2)


# -- regularity and maps -------------------------------------------------


def test_regular_on_chart_examples():
    f1 = hirzebruch(1)
    for cone in f1.max_cones:
        assert regular_on_chart(FractionalPoint.zero(2, 2), f1, cone)
    assert not regular_on_chart(P(1, -1, q=2), f1, Cone((2, 3)))
    assert regular_on_chart(P(-1, -1, q=2), f1, Cone((0, 1)))


def test_make_splitting_examples():
    p2 = projective_space(2)
    pi0 = make_splitting(p2, 2, {FractionalPoint.zero(2, 2): 1})
    assert pi0 == canonical_splitting(p2, 2) and pi0.is_splitting
    with pytest.raises(NotRegularError, match="not regular on X"):
        make_splitting(p2, 2, {FractionalPoint.zero(2, 2): 1, P(-2, 0, q=2): 1})
    doubled = make_splitting(p2, 2, {FractionalPoint.zero(2, 2): 2})
    assert not doubled.is_splitting and doubled.to_json()["splitting"] is False
    with pytest.raises(ToricSplitError, match="integers"):
        make_splitting(p2, 2, {FractionalPoint.zero(2, 2): Fraction(1, 2)})
    with pytest.raises(ToricSplitError):
        make_splitting(p2, 3, {FractionalPoint.zero(2, 2): 1})


def test_apply_examples():
    p2 = projective_space(2)
    pi0 = canonical_splitting(p2, 2)
    assert apply(pi0, FractionalPoint.from_lattice((3, -1), 2)) == LaurentPolynomial.monomial((3, -1))
    assert apply(pi0, P(1, 0, q=2)).is_zero()
    # (1/2, 1/2) pairs to -1 with (-1, -1): not regular on P^2, fine on P^1 x P^1
    with pytest.raises(NotRegularError):
        make_splitting(p2, 2, {FractionalPoint.zero(2, 2): 1, P(1, 1, q=2): 1})
    pi = make_splitting(hirzebruch(0), 2, {FractionalPoint.zero(2, 2): 1, P(1, 1, q=2): 1})
    assert apply(pi, P(1, 1, q=2)) == LaurentPolynomial.monomial((1, 1))
    with pytest.raises(ToricSplitError):
        apply(pi, P(1, 1, q=3))


# -- decision ------------------------------------------------------------


def test_decision_examples():
    assert isinstance(is_diagonally_split(hirzebruch(1), 7), SplitCertificate)
    w = is_diagonally_split(hirzebruch(2), 2)
    assert isinstance(w, NonSplitWitness) and w.cls.residues == (0, 1)
    w = is_diagonally_split(hirzebruch(4), 5)
    assert w.cls.residues == (0, 2)


def test_p1_certificate_prefers_unit_cube():
    cert = is_diagonally_split(projective_space(1), 2)
    assert [rep.numerators for _, rep in cert.representatives] == [(0,), (1,)]


def test_scan_examples():
    assert [q for q, r in split_q_scan(hirzebruch(2), 2, 7) if isinstance(r, SplitCertificate)] == [3, 5, 7]
    assert all(isinstance(r, NonSplitWitness) for _, r in split_q_scan(hirzebruch(3), 2, 9))
    assert all(isinstance(r, SplitCertificate) for _, r in split_q_scan(projective_space(2), 2, 5))
    with pytest.raises(ToricSplitError):
        split_q_scan(hirzebruch(2), 5, 3)


def test_two_algorithms_agree():
    for fan in [projective_space(1), projective_space(2), hirzebruch(0), hirzebruch(2), hirzebruch(3)]:
        for q in range(2, 6):
            assert is_diagonally_split(fan, q) == decide_by_enumeration(fan, q)


def test_workers_do_not_change_result():
    for q in (4, 5):
        assert is_diagonally_split(hirzebruch(2), q, workers=2) == is_diagonally_split(hirzebruch(2), q)
    assert split_q_scan(hirzebruch(2), 2, 6, workers=2) == split_q_scan(hirzebruch(2), 2, 6)


def test_incomplete_fans_are_refused():
    plane = build_fan(2, [(1, 0), (0, 1)], [[0, 1]])
    with pytest.raises(IncompleteFanError):
        is_diagonally_split(plane, 2)
    # the quadrant fan has a bounded F_X, so the override lets the search run
    assert isinstance(is_diagonally_split(plane, 2, assume_complete=True), SplitCertificate)
    half = build_fan(2, [(1, 0)], [[0]])
    with pytest.raises(UnboundedPolytopeError):
        is_diagonally_split(half, 2, assume_complete=True)


def test_bad_q():
    with pytest.raises(ToricSplitError):
        is_diagonally_split(hirzebruch(0), 1)


def test_certificate_roundtrip_and_validation():
    fan = hirzebruch(1)
    cert = is_diagonally_split(fan, 3)
    assert cert.problems(fan) == []
    data = cert.to_json()
    assert data["q"] == 3 and len(data["classes"]) == 9
    assert SplitCertificate.from_json(data) == cert
    bad = dict(data, classes=[dict(c) for c in data["classes"]])
    bad["classes"][1]["rep"] = [3, 3]  # outside F_X
    assert any("interior" in p for p in SplitCertificate.from_json(bad).problems(fan))
    bad["classes"] = data["classes"][:-1]
    assert any("classes covered" in p for p in SplitCertificate.from_json(bad).problems(fan))
    dup = dict(data, classes=data["classes"] + data["classes"][:1])
    assert any("twice" in p for p in SplitCertificate.from_json(dup).problems(fan))
    wrong = dict(data, classes=[dict(c) for c in data["classes"]])
    wrong["classes"][1]["class"] = [2, 2]
    assert any("does not reduce" in p for p in SplitCertificate.from_json(wrong).problems(fan))


def test_witness_roundtrip_and_validation():
    fan = hirzebruch(2)
    w = is_diagonally_split(fan, 4)
    assert w.to_json() == {"q": 4, "class": [0, 2], "box": [[-1, 1], [-1, 1]]}
    assert NonSplitWitness.from_json(w.to_json()) == w
    assert w.problems(fan) == []
    small = NonSplitWitness(4, w.cls, IntegerBox((0, 0), (0, 0)))
    assert any("bounding box" in p for p in small.problems(fan))
    assert any("represented" in p for p in NonSplitWitness(4, CosetClass((0, 1), 4), w.box).problems(fan))


def test_witness_for_class():
    assert witness_for_class(hirzebruch(3), 6, CosetClass((0, 3), 6)) is not None
    assert witness_for_class(hirzebruch(1), 6, CosetClass((0, 3), 6)) is None


def test_splitting_basis_examples():
    assert len(splitting_basis(projective_space(2), 2)) == 10
    assert [u.coords for u in splitting_basis(projective_space(1), 2)] == [
        (Fraction(-1, 2),),
        (Fraction(0),),
        (Fraction(1, 2),),
    ]
    for q in (2, 3, 7):
        assert FractionalPoint.zero(2, q) in splitting_basis(hirzebruch(3), q)


# -- explicit splittings -------------------------------------------------


def test_diagonal_splitting_examples():
    pi = diagonal_splitting(projective_space(1), 2)
    assert pi.coefficients() == {P(0, 0, q=2): 1, P(1, -1, q=2): 1}
    assert len(diagonal_splitting(hirzebruch(1), 2).terms) == 4
    for fan, q in [(projective_space(2), 3), (hirzebruch(2), 5)]:
        assert len(diagonal_splitting(fan, q).terms) == q**fan.dim


def test_diagonal_splitting_requires_split():
    with pytest.raises(NotDiagonallySplitError):
        diagonal_splitting(hirzebruch(2), 2)


def test_semidiagonal_splitting_examples():
    pi = semidiagonal_splitting(projective_space(1), 2, 3)
    assert pi.coefficients() == {P(0, 0, 0, q=2): 1, P(1, -1, 0, q=2): 1, P(0, 1, -1, q=2): 1}
    for fan, q, n in [(hirzebruch(1), 3, 3), (projective_space(2), 2, 4)]:
        assert len(semidiagonal_splitting(fan, q, n).terms) == 1 + (n - 1) * (q**fan.dim - 1)
    assert semidiagonal_splitting(hirzebruch(2), 3, 2) == diagonal_splitting(hirzebruch(2), 3)
    with pytest.raises(ToricSplitError):
        semidiagonal_splitting(hirzebruch(1), 2, 1)


def test_telescoping_splitting():
    assert telescoping_splitting(hirzebruch(2), 3, 2) == diagonal_splitting(hirzebruch(2), 3)
    pi = telescoping_splitting(projective_space(1), 3, 4)
    assert pi.is_splitting and len(pi.terms) == 27
    # differences of representatives leave P_{-K} for F_2 at q = 3
    with pytest.raises(NotRegularError):
        telescoping_splitting(hirzebruch(2), 3, 3)


def test_terms_regular_on_every_chart():
    maps = [
        diagonal_splitting(hirzebruch(1), 3),
        semidiagonal_splitting(hirzebruch(2), 3, 3),
        telescoping_splitting(projective_space(1), 2, 3),
    ]
    for pi in maps:
        for a, _ in pi.terms:
            assert all(regular_on_chart(a, pi.ambient, c) for c in pi.ambient.max_cones)


def test_diagonal_key_identity_small():
    fan, q = hirzebruch(1), 2
    pi = diagonal_splitting(fan, q)
    for nums in itertools.product(range(-2, 3), repeat=4):
        image = restrict_semidiagonal(apply(pi, FractionalPoint(nums, q)), 1, 2)
        s = (nums[0] + nums[2], nums[1] + nums[3])
        if all(x % q == 0 for x in s):
            assert image == LaurentPolynomial.monomial(tuple(x // q for x in s))
        else:
            assert image.is_zero()


def test_canonical_splitting_not_diagonal():
    fan, q = projective_space(2), 3
    pi0 = canonical_splitting(product_fan(fan, fan), q)
    u = (1, 2)
    element = {FractionalPoint.zero(4, q): 1, FractionalPoint(u + tuple(-x for x in u), q): -1}
    assert restrict_semidiagonal(apply_element(pi0, element), 1, 2) == 1
