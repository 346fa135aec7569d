import pytest

from toric_contact.builders import (
    fan_hirzebruch,
    fan_p1_power,
    fan_projective_space,
    fan_projectivized_split_bundle,
    fan_projectivized_tangent_p1_power,
    point_fan,
    product_fan,
    split_tangent_degrees,
)
from toric_contact.classify import fan_isomorphic, has_split_tangent
from toric_contact.divisor import anticanonical_class, divide_class, picard_rank
from toric_contact.errors import HypothesisError, ToricError
from toric_contact.fan import is_complete, is_projective, is_smooth, validate
from toric_contact.models import TDivisor


def _divisor(*coeffs):
    return TDivisor.from_sequence(coeffs)


def test_projective_space():
    p1 = fan_projective_space(1)
    assert p1.rays == ((1,), (-1,))
    assert len(p1.max_cones) == 2
    p2 = fan_projective_space(2)
    assert (p2.num_rays, len(p2.max_cones), picard_rank(p2)) == (3, 3, 1)
    with pytest.raises(ToricError):
        fan_projective_space(0)


def test_p1_power():
    square = fan_p1_power(2)
    assert (square.num_rays, len(square.max_cones)) == (4, 4)
    assert has_split_tangent(square)
    assert picard_rank(fan_p1_power(3)) == 3
    with pytest.raises(ToricError):
        fan_p1_power(0)


def test_product_fan():
    p1, p2 = fan_projective_space(1), fan_projective_space(2)
    product = product_fan(p1, p2)
    assert (product.rank, product.num_rays, len(product.max_cones)) == (3, 5, 6)
    assert fan_isomorphic(product_fan(p1, p1), fan_p1_power(2)) is not None
    assert product_fan(p2, point_fan()) == p2


def test_hirzebruch():
    assert fan_isomorphic(fan_hirzebruch(0), fan_p1_power(2)) is not None
    assert fan_isomorphic(fan_hirzebruch(1), fan_hirzebruch(2)) is None
    with pytest.raises(ToricError):
        fan_hirzebruch(-1)


def test_split_bundle_over_p1_gives_hirzebruch():
    p1 = fan_projective_space(1)
    f2 = fan_projectivized_split_bundle(p1, [_divisor(0, 0), _divisor(2, 0)])
    assert fan_isomorphic(f2, fan_hirzebruch(2)) is not None
    trivial = fan_projectivized_split_bundle(p1, [_divisor(0, 0), _divisor(0, 0)])
    assert fan_isomorphic(trivial, fan_p1_power(2)) is not None


def test_split_bundle_requires_normalized_degrees():
    p1 = fan_projective_space(1)
    with pytest.raises(HypothesisError) as excinfo:
        fan_projectivized_split_bundle(p1, [_divisor(1, 0), _divisor(2, 0)])
    assert excinfo.value.hypothesis == "normalized"
    with pytest.raises(ToricError):
        fan_projectivized_split_bundle(p1, [_divisor(0, 0)])
    with pytest.raises(ToricError):
        fan_projectivized_split_bundle(p1, [_divisor(0, 0), _divisor(1, 0, 0)])


def test_split_tangent_degrees_are_normalized():
    degrees = split_tangent_degrees(2)
    assert [d.as_tuple() for d in degrees] == [(0, 0, 0, 0), (-2, 2, 0, 0)]


@pytest.mark.parametrize("m", [2, 3])
def test_projectivized_tangent(m):
    fan = fan_projectivized_tangent_p1_power(m)
    base = fan_p1_power(m)
    assert fan.rank == 2 * m - 1
    assert validate(fan).is_valid
    assert is_smooth(fan) and is_complete(fan) and is_projective(fan)
    assert picard_rank(fan) == picard_rank(base) + 1

    base_rays = set(base.rays)
    for ray in fan.rays:
        projected = ray[:m]
        assert not any(projected) or projected in base_rays

    assert divide_class(anticanonical_class(fan), m) is not None


def test_projectivized_tangent_needs_two_factors():
    with pytest.raises(ToricError):
        fan_projectivized_tangent_p1_power(1)
