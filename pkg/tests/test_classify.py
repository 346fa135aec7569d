import random

import pytest

from conftest import CATALOG_FANS, CATALOG_IDS
from toric_contact.builders import (
    fan_hirzebruch,
    fan_p1_power,
    fan_projective_space,
    fan_projectivized_tangent_p1_power,
    product_fan,
)
from toric_contact.classify import (
    classify_contact,
    fan_isomorphic,
    has_split_tangent,
    is_p1_power,
    verify_isomorphism,
)
from toric_contact.errors import HypothesisError
from toric_contact.fan import transform_fan
from toric_contact.lattice import random_unimodular
from toric_contact.models import Fan, FanIsomorphism, VerdictKind


def _random_image(fan, rng):
    return transform_fan(fan, random_unimodular(fan.rank, 5, rng))


def test_split_tangent_on_standard_fans():
    assert has_split_tangent(fan_p1_power(3))
    assert not has_split_tangent(fan_projective_space(2))
    assert not has_split_tangent(fan_hirzebruch(1))
    assert has_split_tangent(fan_p1_power(2), strict=True)


def test_split_tangent_requires_smoothness():
    weighted = Fan(rank=2, rays=((1, 0), (0, 1), (-1, -2)), max_cones=((0, 1), (1, 2), (0, 2)))
    with pytest.raises(HypothesisError):
        has_split_tangent(weighted)


def test_is_p1_power():
    assert is_p1_power(fan_p1_power(3)) == 3
    assert is_p1_power(fan_projective_space(3)) is None
    rng = random.Random(3)
    for _ in range(5):
        assert is_p1_power(_random_image(fan_p1_power(3), rng)) == 3


@pytest.mark.parametrize("fan", CATALOG_FANS, ids=CATALOG_IDS)
def test_split_tangent_iff_p1_power(fan):
    assert has_split_tangent(fan) == (is_p1_power(fan) is not None)


def test_isomorphism_rejects_different_shapes():
    assert fan_isomorphic(fan_projective_space(2), fan_p1_power(2)) is None
    assert fan_isomorphic(fan_projective_space(2), fan_projective_space(3)) is None


@pytest.mark.parametrize("fan", [
    fan_projective_space(3),
    fan_p1_power(3),
    fan_hirzebruch(2),
    product_fan(fan_projective_space(1), fan_projective_space(2)),
    fan_projectivized_tangent_p1_power(2),
], ids=["P3", "P1^3", "F2", "P1xP2", "P(T_P1xP1)"])
def test_isomorphism_survives_recoordinatization(fan):
    assert verify_isomorphism(fan, fan, fan_isomorphic(fan, fan))
    rng = random.Random(20)
    for _ in range(10):
        image = _random_image(fan, rng)
        forward = fan_isomorphic(image, fan)
        assert forward is not None
        assert verify_isomorphism(image, fan, forward)
        assert verify_isomorphism(fan, image, forward.inverse())


def test_isomorphisms_compose():
    rng = random.Random(5)
    f = fan_projectivized_tangent_p1_power(2)
    g = _random_image(f, rng)
    h = _random_image(f, rng)
    fg = fan_isomorphic(f, g)
    gh = fan_isomorphic(g, h)
    assert verify_isomorphism(f, h, fg.compose(gh))


def test_verify_isomorphism_rejects_wrong_witness():
    fan = fan_projective_space(2)
    swap = FanIsomorphism(matrix=((0, 1), (1, 0)), ray_permutation=(0, 1, 2))
    assert not verify_isomorphism(fan, fan, swap)
    assert verify_isomorphism(fan, fan, FanIsomorphism(matrix=((0, 1), (1, 0)), ray_permutation=(1, 0, 2)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_space_is_contact(n):
    report = classify_contact(fan_projective_space(2 * n + 1))
    assert report.verdict.kind == VerdictKind.PROJECTIVE_SPACE
    assert report.verdict.n == n
    assert report.verdict.line == f"CONTACT: P^{2 * n + 1}"
    assert report.evidence.isomorphism is not None
    assert report.evidence.anticanonical_divisible
    assert report.evidence.extremal_lengths == [2 * n + 2]
    assert report.evidence.length_dichotomy


@pytest.mark.parametrize("n", [1, 2])
def test_projectivized_tangent_is_contact(n):
    fan = fan_projectivized_tangent_p1_power(n + 1)
    report = classify_contact(fan)
    assert report.verdict.kind == VerdictKind.PROJECTIVIZED_TANGENT
    assert report.verdict.n == n
    assert report.verdict.line == f"CONTACT: P(T_(P1)^{n + 1})"
    assert verify_isomorphism(fan, fan_projectivized_tangent_p1_power(n + 1), report.evidence.isomorphism)
    assert n + 1 in report.evidence.extremal_lengths
    assert report.evidence.length_dichotomy


def test_p1_cube_is_not_contact_despite_divisibility():
    report = classify_contact(fan_p1_power(3))
    assert report.verdict.kind == VerdictKind.NOT_CONTACT
    assert report.verdict.line == "NOT-CONTACT"
    assert report.evidence.anticanonical_divisible
    assert report.evidence.projective_space_test is False
    assert report.evidence.p1_tangent_test is False
    assert report.evidence.isomorphism is None


def test_full_evidence_runs_both_tests():
    fan = product_fan(fan_projective_space(1), fan_projective_space(2))
    short = classify_contact(fan)
    assert short.verdict.kind == VerdictKind.NOT_CONTACT
    assert short.evidence.anticanonical_divisible is False
    assert short.evidence.projective_space_test is None

    full = classify_contact(fan, full_evidence=True)
    assert full.verdict.kind == VerdictKind.NOT_CONTACT
    assert full.evidence.projective_space_test is False
    assert full.evidence.p1_tangent_test is False


@pytest.mark.parametrize("fan", [f for f in CATALOG_FANS if f.rank % 2 == 0],
                         ids=[i for i, f in zip(CATALOG_IDS, CATALOG_FANS) if f.rank % 2 == 0])
def test_even_dimension_is_not_contact(fan):
    report = classify_contact(fan)
    assert report.verdict.kind == VerdictKind.NOT_CONTACT
    assert report.evidence.odd_dimension is False
    assert report.evidence.notes


def test_curve_is_outside_the_range():
    report = classify_contact(fan_projective_space(1))
    assert report.verdict.kind == VerdictKind.NOT_CONTACT
    assert report.evidence.odd_dimension is True


def test_classification_needs_a_complete_fan():
    missing = Fan(rank=3, rays=fan_projective_space(3).rays, max_cones=((0, 1, 2), (0, 1, 3), (0, 2, 3)))
    with pytest.raises(HypothesisError) as excinfo:
        classify_contact(missing)
    assert excinfo.value.hypothesis == "complete"


@pytest.mark.parametrize("fan", [
    fan_projective_space(3),
    fan_p1_power(3),
    fan_projectivized_tangent_p1_power(2),
], ids=["P3", "P1^3", "P(T_P1xP1)"])
def test_verdict_is_invariant_under_recoordinatization(fan):
    expected = classify_contact(fan).verdict
    rng = random.Random(42)
    for _ in range(5):
        assert classify_contact(_random_image(fan, rng)).verdict == expected
