import json

import pytest

from toricsplit.errors import FanError
from toricsplit.fan import (
    Completeness,
    Cone,
    all_cones,
    build_fan,
    builtin,
    dual_cone_contains,
    faces,
    fan_from_json,
    hirzebruch,
    load_fan,
    power_fan,
    product_fan,
    projective_space,
)
from toricsplit.lattice import FractionalPoint


def test_p1_fan():
    f = build_fan(1, [(1,), (-1,)], [[0], [1]])
    assert f.rays == ((1,), (-1,))
    assert f.completeness is Completeness.COMPLETE


def test_hirzebruch_is_complete():
    for a in range(6):
        f = hirzebruch(a)
        assert f.is_complete
        assert f.rays[3] == (-1, a)
    assert (-1, 3) in hirzebruch(3).rays


def test_non_pointed_cone():
    with pytest.raises(FanError, match="not pointed"):
        build_fan(2, [(1, 0), (-1, 0)], [[0, 1]])


def test_bad_inputs():
    with pytest.raises(FanError, match="not a ray direction"):
        build_fan(2, [(0, 0), (1, 0)], [[0, 1]])
    with pytest.raises(FanError, match="duplicate rays"):
        build_fan(2, [(1, 0), (2, 0)], [[0], [1]])
    with pytest.raises(FanError, match="not used"):
        build_fan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1]])
    with pytest.raises(FanError, match="inside cone"):
        build_fan(2, [(1, 0), (1, 1), (0, 1)], [[0, 2], [1]])
    with pytest.raises(FanError, match="bad ray indices"):
        build_fan(2, [(1, 0), (0, 1)], [[0, 5]])


def test_non_primitive_ray_is_replaced(caplog):
    f = build_fan(1, [(3,), (-1,)], [[0], [1]])
    assert f.rays[0] == (1,)
    assert "not primitive" in caplog.text


def test_completeness_examples():
    assert projective_space(2).completeness is Completeness.COMPLETE
    assert build_fan(2, [(1, 0), (0, 1)], [[0, 1]]).completeness is Completeness.INCOMPLETE
    rays = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    octants = [[i, j, k] for i in (0, 1) for j in (2, 3) for k in (4, 5)]
    assert build_fan(3, rays, octants).completeness is Completeness.COMPLETE
    assert build_fan(3, rays, octants[:-1]).completeness is Completeness.UNVERIFIED
    assert projective_space(3).is_complete


def test_products():
    f = product_fan(projective_space(1), projective_space(1))
    assert sorted(f.rays) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert len(f.max_cones) == 4 and f.is_complete
    g = product_fan(hirzebruch(1), hirzebruch(1))
    assert len(g.rays) == 8 and len(g.max_cones) == 16 and g.is_complete
    assert sorted(hirzebruch(0).rays) == sorted(f.rays)
    assert len(power_fan(projective_space(1), 3).max_cones) == 8


def test_product_associative_up_to_order():
    a, b, c = projective_space(1), hirzebruch(1), projective_space(2)
    left = product_fan(product_fan(a, b), c)
    right = product_fan(a, product_fan(b, c))
    assert sorted(left.rays) == sorted(right.rays)
    assert len(left.max_cones) == len(right.max_cones)


def test_projective_space():
    p2 = projective_space(2)
    assert len(p2.rays) == 3 and len(p2.max_cones) == 3


def test_builtin_selectors():
    assert builtin("pn:2") == projective_space(2)
    assert builtin("hirzebruch:3") == hirzebruch(3)
    assert builtin("product:pn:1xpn:1").dim == 2
    for bad in ["foo:1", "pn:x", "product:pn:1"]:
        with pytest.raises(FanError):
            builtin(bad)


def test_dual_cone_contains():
    f = hirzebruch(1)
    for cone in f.max_cones:
        assert dual_cone_contains(f, cone, FractionalPoint.zero(2, 2))
    quadrant = Cone((0, 1))
    assert dual_cone_contains(f, quadrant, FractionalPoint((1, 1), 2))
    chart = Cone((2, 3))  # rays (0,-1) and (-1,1)
    assert not dual_cone_contains(f, chart, FractionalPoint((1, 0), 2))


def test_faces_and_all_cones():
    f = projective_space(2)
    assert len(faces(f, f.max_cones[0])) == 3
    assert len(all_cones(f)) == 6


def test_fan_json_roundtrip(tmp_path):
    f = hirzebruch(2)
    path = tmp_path / "f.json"
    path.write_text(json.dumps(f.to_json()))
    assert load_fan(path) == f
    assert fan_from_json(f.to_json()) == f
    with pytest.raises(FanError):
        load_fan(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(FanError, match="not valid JSON"):
        load_fan(tmp_path / "bad.json")
    with pytest.raises(FanError, match="malformed"):
        fan_from_json({"dim": 2})
