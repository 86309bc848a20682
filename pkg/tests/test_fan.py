import random
from fractions import Fraction

import pytest

from zardec.exact import support_eval
from zardec.fan import (
    AlreadyARayError,
    Fan,
    NonPrimitiveError,
    NonSmoothError,
    ZeroVectorError,
    as_divisor,
    cartier_data,
    is_big,
    is_nef,
    primitive_vectors_in_box,
    pullback,
    section_polytope,
    star_subdivide,
    surface_intersection,
    trace_value,
    validate_fan,
)

from conftest import (
    f2_fan,
    p2_fan,
    p3_fan,
    random_effective_divisor,
    random_simplicial_fan_3d,
    random_smooth_surface_fan,
)


def test_validate_p2():
    ok, problems = validate_fan(p2_fan())
    assert ok and problems == []


def test_validate_missing_cone():
    fan = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)])
    ok, problems = validate_fan(fan)
    assert not ok
    assert any("facet" in p for p in problems)


def test_validate_nonprimitive_ray():
    fan = Fan(2, [(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    ok, problems = validate_fan(fan, deep=False)
    assert not ok
    assert any("primitive" in p for p in problems)


def test_validate_overlapping_cones():
    # facet pairing holds but the third cone folds back over the first two
    fan = Fan(2, [(1, 0), (0, 1), (-1, 1)], [(0, 1), (1, 2), (2, 0)])
    ok, problems = validate_fan(fan, deep=False)
    assert ok
    ok, problems = validate_fan(fan)
    assert not ok
    assert any("overlap" in p for p in problems)


def test_cartier_data_p2():
    fan = p2_fan()
    data = cartier_data(fan, as_divisor(fan, [1, 0, 0]))
    assert data[fan.cones.index((0, 1))] == (-1, 0)
    data11 = cartier_data(fan, as_divisor(fan, [1, 1, 0]))
    assert data11[fan.cones.index((0, 1))] == (-1, -1)
    zero = cartier_data(fan, as_divisor(fan, [0, 0, 0]))
    assert all(m == (0, 0) for m in zero)


def test_is_nef_examples():
    fan = p2_fan()
    assert is_nef(fan, as_divisor(fan, [1, 0, 0]))
    assert not is_nef(fan, as_divisor(fan, [-1, 0, 0]))
    assert is_nef(fan, as_divisor(fan, [0, 0, 0]))


def test_is_nef_closed_under_sum_and_scaling():
    # nef divisors via the surface engine: the positive part of any
    # effective divisor on a smooth toric surface is nef as a torus divisor
    from zardec.surface import SurfaceModel, zariski_decompose
    rng = random.Random(21)
    for _ in range(8):
        fan = random_smooth_surface_fan(rng)
        n = len(fan.rays)
        model = SurfaceModel([f"C{i}" for i in range(n)],
                             surface_intersection(fan))
        p1 = tuple(zariski_decompose(
            model, random_effective_divisor(rng, n)).positive)
        p2 = tuple(zariski_decompose(
            model, random_effective_divisor(rng, n)).positive)
        assert is_nef(fan, p1) and is_nef(fan, p2)
        assert is_nef(fan, tuple(a + b for a, b in zip(p1, p2)))
        assert is_nef(fan, tuple(Fraction(5, 2) * a for a in p1))


def test_trace_examples():
    fan = p2_fan()
    d = as_divisor(fan, [1, 0, 0])
    assert trace_value(fan, d, (1, 1)) == 1
    assert trace_value(fan, d, (1, 0)) == 1
    assert trace_value(fan, d, (0, 1)) == 0
    assert trace_value(fan, as_divisor(fan, [1, 1, 0]), (1, 1)) == 2
    with pytest.raises(ZeroVectorError):
        trace_value(fan, d, (0, 0))


def test_trace_well_defined_on_walls():
    rng = random.Random(22)
    for _ in range(6):
        fan = random_smooth_surface_fan(rng)
        d = random_effective_divisor(rng, len(fan.rays))
        # rays lie on walls between cones; the internal assert must hold
        for r in fan.rays:
            assert trace_value(fan, as_divisor(fan, d), r) == \
                as_divisor(fan, d)[fan.rays.index(r)]


def test_star_subdivide_p2():
    fan = p2_fan()
    sub, wi = star_subdivide(fan, (1, 1))
    assert wi == 3
    assert sub.rays == ((1, 0), (0, 1), (-1, -1), (1, 1))
    assert set(map(frozenset, sub.cones)) == \
        {frozenset(c) for c in [(0, 3), (3, 1), (1, 2), (2, 0)]}
    ok, problems = validate_fan(sub)
    assert ok, problems


def test_star_subdivide_errors():
    fan = p2_fan()
    with pytest.raises(AlreadyARayError):
        star_subdivide(fan, (1, 0))
    with pytest.raises(NonPrimitiveError):
        star_subdivide(fan, (2, 2))
    with pytest.raises(ZeroVectorError):
        star_subdivide(fan, (0, 0))


def test_pullback_consistency():
    # Cartier-closure stability: traces are unchanged by refinement
    rng = random.Random(23)
    for make, box in ((random_smooth_surface_fan, 4),
                      (random_simplicial_fan_3d, 2)):
        for _ in range(4):
            fan = make(rng)
            d = as_divisor(fan, random_effective_divisor(rng, len(fan.rays)))
            cone = fan.cones[rng.randrange(len(fan.cones))]
            w = tuple(sum(fan.rays[i][k] for i in cone)
                      for k in range(fan.dim))
            from zardec.exact import primitive_vector
            w, _ = primitive_vector(w)
            if w in fan.rays:
                continue
            sub, wi = star_subdivide(fan, w)
            dp = pullback(fan, d, sub)
            assert dp[:len(d)] == d
            assert dp[wi] == trace_value(fan, d, w)
            for v in primitive_vectors_in_box(fan.dim, box):
                assert trace_value(sub, dp, v) == trace_value(fan, d, v)


def test_section_polytope_examples():
    fan = p2_fan()
    p = section_polytope(fan, as_divisor(fan, [1, 0, 0]), 1)
    assert p.vertices() == [(-1, 0), (-1, 1), (0, 0)]
    z = section_polytope(fan, as_divisor(fan, [0, 0, 0]), 1)
    assert z.vertices() == [(0, 0)]
    f2 = f2_fan()
    pt = section_polytope(f2, as_divisor(f2, [0, 1, 0, 0]), 1)
    assert pt.vertices() == [(0, 0)]


def test_section_polytope_scaling():
    fan = f2_fan()
    d = as_divisor(fan, [1, 1, 0, 0])
    p1 = section_polytope(fan, d, 1)
    p3 = section_polytope(fan, d, 3)
    assert p3.vertices() == p1.scaled(3).vertices()


def test_support_function_identity_for_nef():
    fan = p2_fan()
    d = as_divisor(fan, [1, 1, 0])
    assert is_nef(fan, d)
    p = section_polytope(fan, d, 1)
    for v in primitive_vectors_in_box(2, 4):
        assert trace_value(fan, d, v) == -support_eval(p, v)


def test_is_big_examples():
    p2 = p2_fan()
    assert is_big(p2, as_divisor(p2, [1, 0, 0]))
    assert not is_big(p2, as_divisor(p2, [0, 0, 0]))
    f2 = f2_fan()
    assert not is_big(f2, as_divisor(f2, [0, 1, 0, 0]))
    assert is_big(f2, as_divisor(f2, [1, 1, 0, 0]))


def test_surface_intersection_p2():
    mat = surface_intersection(p2_fan())
    assert all(x == 1 for row in mat for x in row)


def test_surface_intersection_f2():
    fan = f2_fan()
    mat = surface_intersection(fan)
    assert mat[1][1] == -2   # the section through ray (0, 1)
    assert mat[0][0] == 0    # the fiber through ray (1, 0)
    assert mat[3][3] == 2    # opposite section
    assert mat[0][1] == 1 and mat[0][2] == 0


def test_surface_intersection_nonsmooth():
    fan = Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    ok, _ = validate_fan(fan)
    assert ok
    with pytest.raises(NonSmoothError):
        surface_intersection(fan)


def test_p3_and_3d_subdivision():
    fan = p3_fan()
    ok, problems = validate_fan(fan)
    assert ok, problems
    sub, wi = star_subdivide(fan, (1, 1, 1))
    ok, problems = validate_fan(sub)
    assert ok, problems
    assert len(sub.cones) == 6
    d = as_divisor(fan, [1, 0, 0, 0])
    dp = pullback(fan, d, sub)
    assert dp[wi] == trace_value(fan, d, (1, 1, 1)) == 1
