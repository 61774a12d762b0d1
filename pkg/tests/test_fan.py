import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorfan.errors import InputError
from colorfan.fan import (
    WeightedCycle,
    build_fan,
    check_balancing,
    check_unimodular,
    corrupt_fan,
    describe,
    ray_vector,
)
from colorfan.ground import GroundSet, is_chain
from colorfan.linalg import det, elementary_divisors

B2 = GroundSet([["1", "1bar"], ["2", "2bar"]])
ABC = GroundSet([["a", "b", "c"], ["1", "2"]])


def test_b2_rays_match_the_picture():
    fan = build_fan(B2)
    vec = {B2.labels_of(s): v for s, v in fan.rays.items()}
    assert vec[("1",)] == (1, 0)
    assert vec[("1bar",)] == (-1, 0)
    assert vec[("2",)] == (0, 1)
    assert vec[("2bar",)] == (0, -1)
    assert vec[("1", "2")] == (1, 1)
    assert len(fan.rays) == 8 and len(fan.maximal_cones) == 8


def test_abc12_counts():
    fan = build_fan(ABC)
    assert fan.ambient_dim == 3
    assert [len(c) for c in fan.cones] == [1, 11, 12]


def test_ray_of_empty_set_is_refused():
    with pytest.raises(InputError):
        ray_vector(B2, 0)


def test_square_cones_have_unit_determinant():
    # independent of Smith form: all blocks of size 2 give square generator matrices
    for sizes in ([2, 2], [2, 2, 2]):
        fan = build_fan(GroundSet.from_sizes(sizes))
        for chain in fan.maximal_cones:
            assert abs(det(fan.generators(chain))) == 1


def test_elementary_divisors():
    assert elementary_divisors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert elementary_divisors([[1, 0], [0, 1], [1, 1]]) == [1, 1]
    assert elementary_divisors([[0, 0]]) == []


def test_corrupted_fan_reports_the_bad_cone():
    fan = build_fan(B2)
    bad = corrupt_fan(fan)
    verdict = check_unimodular(bad)
    assert not verdict.ok
    assert verdict.witness == (fan.maximal_cones[0], 2)
    assert fan.certify()[0].ok


def test_nonuniform_weights_are_unbalanced():
    fan = build_fan(B2)
    weights = {c: 1 for c in fan.maximal_cones}
    weights[fan.maximal_cones[0]] = 2
    assert not check_balancing(fan, WeightedCycle(2, weights)).ok
    assert check_balancing(fan, WeightedCycle(2, {c: 3 for c in fan.maximal_cones})).ok


def test_singleton_blocks_are_degenerate():
    fan = build_fan(GroundSet([["1"], ["2"]]))
    assert fan.ambient_dim == 0
    verdict = check_unimodular(fan)
    assert not verdict.ok and verdict.witness[1] == 0


def test_describe_is_json_ready():
    out = describe(build_fan(B2))
    assert out["unimodular"] and out["balanced"]
    assert out["cone_counts"] == [1, 8, 8]
    assert out["unimodular_witness"] is None


@settings(max_examples=25, deadline=None)
@given(sizes=st.lists(st.integers(2, 3), min_size=1, max_size=3))
def test_certification(sizes):
    fan = build_fan(GroundSet.from_sizes(sizes))
    uni, bal = fan.certify()
    assert uni.ok and bal.ok
    assert all(is_chain(c) for dim in fan.cones for c in dim)


@settings(max_examples=25, deadline=None)
@given(sizes=st.lists(st.integers(2, 3), min_size=1, max_size=3), data=st.data())
def test_block_rays_sum_to_zero(sizes, data):
    g = GroundSet.from_sizes(sizes)
    block = data.draw(st.sampled_from(g.blocks))
    total = [0] * build_fan(g).ambient_dim
    for label in block:
        for k, x in enumerate(ray_vector(g, g.colored_set([label]))):
            total[k] += x
    assert total == [0] * len(total)


def test_ray_of_union_is_sum():
    s = ABC.colored_set(["b", "2"])
    u = [x + y for x, y in zip(ray_vector(ABC, ABC.colored_set(["b"])), ray_vector(ABC, ABC.colored_set(["2"])))]
    assert list(ray_vector(ABC, s)) == u
