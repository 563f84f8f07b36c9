"""Polytope geometry tests.

Frozen oracle values are derived by hand: shoelace areas, explicit
Minkowski sums of small polygons, and the box identity
vol(r*[0,a]x[0,b]x[0,c] + unit cube) = (ar+1)(br+1)(cr+1).
"""

import random
from fractions import Fraction

import pytest

from toric_degrees.errors import PreconditionError, SchemaError
from toric_degrees.exact_linalg import IntegerMatrix
from toric_degrees.polytope import (
    EdgeNormalFan,
    Fan,
    LatticePolytope,
    ToricDivisor,
    edge_normal_fan,
    is_ample,
    linear_image,
    minkowski_sum,
    mixed_area_sam,
    mixed_volume_vector,
    polytope_from_divisor,
    product_p1_fan,
    projective_space_fan,
    volume,
)

F = Fraction


def poly(*pts):
    return LatticePolytope.from_points(list(pts))


def unit_simplex(d):
    pts = [tuple(0 for _ in range(d))]
    for j in range(d):
        pts.append(tuple(1 if i == j else 0 for i in range(d)))
    return LatticePolytope.from_points(pts)


def cube(d, lo=0, hi=1):
    pts = [[]]
    for _ in range(d):
        pts = [p + [c] for p in pts for c in (lo, hi)]
    return LatticePolytope.from_points(pts)


def random_polygon(rng, spread=4, count=6):
    pts = [(rng.randint(-spread, spread), rng.randint(-spread, spread))
           for _ in range(count)]
    return LatticePolytope.from_points(pts)


# ---------------------------------------------------------------------------
# construction / canonical form


def test_vertices_are_extreme_and_sorted():
    p = poly((0, 0), (2, 0), (1, 0), (0, 2), (0, 1), (1, 1))
    # (1,1) lies on the edge (2,0)-(0,2); interior/edge points are dropped
    assert p.vertices == (
        (F(0), F(0)), (F(0), F(2)), (F(2), F(0)))


def test_degenerate_inputs():
    seg = poly((0, 0), (1, 1), (2, 2), (3, 3))
    assert seg.vertices == ((F(0), F(0)), (F(3), F(3)))
    assert seg.affine_rank == 1
    pt = poly((5, 7))
    assert pt.vertices == ((F(5), F(7)),)
    assert pt.affine_rank == 0


def test_rational_vertices_supported():
    p = poly((F(1, 2), 0), (0, F(1, 2)), (0, 0))
    assert p.volume == F(1, 8)


def test_support_function():
    sq = cube(2, -1, 1)
    assert sq.support((3, -2)) == 5
    assert sq.support((0, 0)) == 0


def test_contains():
    sq = cube(2)
    assert sq.contains((F(1, 2), F(1, 2)))
    assert sq.contains((0, 0))
    assert not sq.contains((2, 0))
    seg = poly((0, 0), (2, 2))
    assert seg.contains((1, 1))
    assert not seg.contains((1, 0))


# ---------------------------------------------------------------------------
# volumes


def test_volume_frozen_examples():
    assert unit_simplex(2).volume == F(1, 2)
    assert unit_simplex(3).volume == F(1, 6)
    assert unit_simplex(4).volume == F(1, 24)
    assert cube(2, -1, 1).volume == 4
    assert poly((0, 0), (2, 0), (0, 3)).volume == 3
    assert cube(3).volume == 1
    assert cube(4).volume == 1


def test_volume_degenerate_is_zero():
    assert poly((0, 0), (1, 1)).volume == 0
    assert poly((1, 2, 3)).volume == 0
    assert poly((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)).volume == 0


def test_volume_cross_polytopes():
    # conv{+-e_i}: volume 2^d / d!
    oct3 = LatticePolytope.from_points(
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    assert oct3.volume == F(4, 3)
    cross4 = LatticePolytope.from_points(
        [tuple(s if i == j else 0 for i in range(4))
         for j in range(4) for s in (1, -1)])
    assert cross4.volume == F(2, 3)


def test_volume_determinant_scaling():
    rng = random.Random(11)
    for _ in range(12):
        p = random_polygon(rng)
        rows = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        a = IntegerMatrix(tuple(tuple(r) for r in rows))
        if a.det() == 0:
            continue
        assert linear_image(p, a).volume == abs(a.det()) * p.volume


def test_facets_of_square():
    sq = cube(2)
    assert set(sq.facets) == {
        ((-1, 0), F(0)), ((0, -1), F(0)), ((1, 0), F(1)), ((0, 1), F(1))}
    degenerate = poly((0, 0), (1, 1))
    with pytest.raises(PreconditionError):
        degenerate.facets


# ---------------------------------------------------------------------------
# linear images and Minkowski sums


def test_linear_image_examples():
    sq = cube(2)
    assert linear_image(sq, IntegerMatrix(((1, 0), (0, 1)))) == sq
    img = linear_image(sq, IntegerMatrix(((2, 0), (0, 3))))
    assert img == poly((0, 0), (2, 0), (0, 3), (2, 3))
    tri = linear_image(unit_simplex(2), IntegerMatrix(((1, -1), (1, 1))))
    assert tri == poly((0, 0), (1, 1), (-1, 1))
    with pytest.raises(PreconditionError):
        linear_image(sq, IntegerMatrix(((1, 1), (1, 1))))


def test_minkowski_sum_examples():
    sq = cube(2)
    origin = poly((0, 0))
    assert minkowski_sum(sq, origin) == sq
    assert minkowski_sum(poly((0, 0), (1, 0)), poly((0, 0), (0, 1))) == sq
    s = unit_simplex(2)
    assert minkowski_sum(s, s) == poly((0, 0), (2, 0), (0, 2))
    with pytest.raises(PreconditionError):
        minkowski_sum(sq, unit_simplex(3))


# ---------------------------------------------------------------------------
# fans, divisors, ampleness


def test_fan_validation():
    with pytest.raises(SchemaError):
        Fan(2, ((2, 0), (0, 1)), ((0, 1),))  # non-primitive ray
    with pytest.raises(SchemaError):
        Fan(2, ((1, 0), (1, 0)), ((0, 1),))  # duplicate
    with pytest.raises(SchemaError):
        Fan(2, ((1, 0), (0, 1)), ((0, 5),))  # bad index


def test_fan_completeness():
    assert projective_space_fan(2).verify_complete(samples=40)
    assert product_p1_fan().verify_complete(samples=40)
    partial = Fan(2, ((1, 0), (0, 1)), ((0, 1),))
    assert not partial.verify_complete(samples=10)
    assert projective_space_fan(3).positively_spans()


def test_polytope_from_divisor_p2():
    fan = projective_space_fan(2)
    p = polytope_from_divisor(ToricDivisor(fan, (F(0), F(0), F(1))))
    assert p.vertices == ((F(-1), F(0)), (F(0), F(-1)), (F(0), F(0)))
    assert p.volume == F(1, 2)
    origin = polytope_from_divisor(ToricDivisor(fan, (F(0), F(0), F(0))))
    assert origin.vertices == ((F(0), F(0)),)


def test_polytope_from_divisor_p1xp1():
    p = polytope_from_divisor(ToricDivisor(product_p1_fan(), (F(1),) * 4))
    assert p == cube(2, -1, 1)


def test_polytope_from_divisor_errors():
    partial = Fan(2, ((1, 0), (0, 1)), ((0, 1),))
    with pytest.raises(PreconditionError):
        polytope_from_divisor(ToricDivisor(partial, (F(1), F(1))))
    fan = product_p1_fan()
    with pytest.raises(PreconditionError):
        polytope_from_divisor(ToricDivisor(fan, (F(0), F(-1), F(0), F(0))))


def test_is_ample():
    p2 = projective_space_fan(2)
    assert is_ample(ToricDivisor(p2, (F(0), F(0), F(1))))
    assert not is_ample(ToricDivisor(p2, (F(0), F(0), F(0))))
    q = product_p1_fan()
    assert is_ample(ToricDivisor(q, (F(1), F(1), F(1), F(1))))
    assert not is_ample(ToricDivisor(q, (F(1), F(1), F(0), F(0))))
    assert is_ample(ToricDivisor(projective_space_fan(3), (F(0),) * 3 + (F(1),)))


# ---------------------------------------------------------------------------
# mixed volumes


def test_mixed_volume_diagonal_case():
    s = unit_simplex(2)
    mv = mixed_volume_vector(s, s)
    assert mv.values == (F(1, 2), F(1, 2), F(1, 2))


def test_mixed_volume_segments():
    mv = mixed_volume_vector(poly((0, 0), (1, 0)), poly((0, 0), (0, 1)))
    assert mv.values == (F(0), F(1, 2), F(0))


def test_mixed_volume_triangle_vs_simplex():
    p = poly((0, 0), (2, 0), (0, 3))
    mv = mixed_volume_vector(p, unit_simplex(2))
    assert mv.values == (F(1, 2), F(3, 2), F(3))
    # endpoint invariants: V_0 = vol(Q), V_d = vol(P)
    assert mv.v(0) == F(1, 2) and mv.v(2) == 3


def test_mixed_volume_boxes_3d():
    p = LatticePolytope.from_points(
        [(x, y, z) for x in (0, 1) for y in (0, 2) for z in (0, 3)])
    mv = mixed_volume_vector(p, cube(3))
    # vol(rP + Q) = (r+1)(2r+1)(3r+1) = 6r^3 + 11r^2 + 6r + 1
    assert mv.values == (F(1), F(2), F(11, 3), F(6))
    back = mixed_volume_vector(cube(3), p)
    assert back.values == tuple(reversed(mv.values))


def test_mixed_volume_symmetry_random():
    rng = random.Random(23)
    for _ in range(10):
        p, q = random_polygon(rng), random_polygon(rng)
        a = mixed_volume_vector(p, q).values
        b = mixed_volume_vector(q, p).values
        assert a == tuple(reversed(b))


def test_mixed_volume_translation_invariance():
    rng = random.Random(29)
    for _ in range(8):
        p, q = random_polygon(rng), random_polygon(rng)
        base = mixed_volume_vector(p, q).values
        assert mixed_volume_vector(p.translate((3, -2)), q).values == base
        assert mixed_volume_vector(p, q.translate((-1, 5))).values == base


def test_mixed_volume_multilinearity_2d():
    rng = random.Random(31)
    for _ in range(8):
        p1, p2, q = (random_polygon(rng) for _ in range(3))
        lhs = mixed_volume_vector(minkowski_sum(p1, p2), q).v(1)
        assert lhs == mixed_volume_vector(p1, q).v(1) + mixed_volume_vector(p2, q).v(1)


def test_mixed_volume_scaling_in_first_argument():
    rng = random.Random(37)
    for _ in range(6):
        p, q = random_polygon(rng), random_polygon(rng)
        base = mixed_volume_vector(p, q)
        doubled = mixed_volume_vector(p.scale(2), q)
        assert doubled.values == tuple(2 ** k * v for k, v in enumerate(base.values))


def test_mixed_volume_monotonicity():
    rng = random.Random(41)
    for _ in range(8):
        big = random_polygon(rng, spread=5, count=8)
        sub = LatticePolytope.from_points(big.vertices[: max(1, len(big.vertices) - 1)])
        mv_sub = mixed_volume_vector(sub, big)
        mv_big = mixed_volume_vector(big, big)
        assert all(a <= b for a, b in zip(mv_sub.values, mv_big.values))


# ---------------------------------------------------------------------------
# surface-area-measure mixed areas


def test_sam_frozen_examples():
    sq = cube(2)
    assert mixed_area_sam(sq, sq) == 1
    p = poly((0, 0), (2, 0), (0, 3))
    assert mixed_area_sam(p, unit_simplex(2)) == F(3, 2)
    assert mixed_area_sam(p, poly((0, 0))) == 0
    assert mixed_area_sam(poly((0, 0), (1, 0)), poly((0, 0), (0, 1))) == F(1, 2)


def test_three_way_agreement_random():
    rng = random.Random(47)
    for _ in range(40):
        p, q = random_polygon(rng), random_polygon(rng)
        v1 = mixed_volume_vector(p, q).v(1)
        sam = mixed_area_sam(p, q)
        incl = (minkowski_sum(p, q).volume - p.volume - q.volume) / 2
        assert v1 == sam == incl


def test_edge_normal_fan_square_and_closing():
    enf = edge_normal_fan(cube(2))
    assert sorted(enf.items) == [
        ((-1, 0), F(1)), ((0, -1), F(1)), ((0, 1), F(1)), ((1, 0), F(1))]
    tri = edge_normal_fan(poly((0, 0), (2, 0), (0, 3)))
    assert sorted(tri.items) == [((-1, 0), F(3)), ((0, -1), F(2)), ((3, 2), F(1))]
    with pytest.raises(SchemaError):
        EdgeNormalFan((((0, 1), F(1)),))  # single edge cannot close
    with pytest.raises(PreconditionError):
        edge_normal_fan(poly((0, 0), (1, 1)))


# ---------------------------------------------------------------------------
# serialization


def test_fan_round_trip():
    fan = projective_space_fan(2)
    assert Fan.from_dict(fan.to_dict()) == fan
    with pytest.raises(SchemaError):
        Fan.from_dict({"dim": 2, "rays": [[1, 0]]})


def test_divisor_round_trip():
    div = ToricDivisor(product_p1_fan(), (F(1), F(1, 2), F(3), F(0)))
    again = ToricDivisor.from_dict(div.to_dict())
    assert again == div


def test_polytope_round_trip():
    p = poly((F(1, 2), 0), (0, F(3, 4)), (0, 0))
    assert LatticePolytope.from_dict(p.to_dict()) == p
    with pytest.raises(SchemaError):
        LatticePolytope.from_dict({"vertices": []})
