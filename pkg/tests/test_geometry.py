from fractions import Fraction
from itertools import combinations, product
from math import atan2

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorfan import fixtures
from colorfan.chow import Divisor, sum_of_h
from colorfan.errors import BudgetExceeded, HypothesisViolated, InputError
from colorfan.geometry import (
    ExactPolytope,
    globally_bounded_piece,
    independence_polytope,
    ipc_volume,
    ipc_volume_via_transversals,
    minkowski_sum,
    mixed_volume_simplices,
    normal_complex_equals_ipc,
    normal_complex_piece,
    normalized_volume,
    same_polytope,
    simplex,
    vertices_brute_force,
    vertices_from_hrep,
)
from colorfan.ground import GroundSet, bits, enumerate_max_chains, has_sdr, subsets_of
from colorfan.multimatroid import (
    PSEUDO_CUBICAL,
    boolean_multimatroid,
    quadratic_rank,
    random_R_multimatroid,
    sum_h_rank,
)

B2 = GroundSet([["1", "1bar"], ["2", "2bar"]])
T12 = B2.colored_set(["1", "2"])
F = Fraction


def pts(*rows):
    return sorted(tuple(F(x) for x in r) for r in rows)


def shoelace_normalized(points):
    # 2! times the polygon area, vertices sorted by angle around the centroid
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    ring = sorted(points, key=lambda p: atan2(p[1] - cy, p[0] - cx))
    twice = sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(ring, ring[1:] + ring[:1]))
    return abs(F(twice))


def box(n, sides):
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((e, sides[i]))
        rows.append(([-x for x in e], 0))
    return rows


def test_pentagon_of_the_real_example():
    rk = fixtures.ranks("b2_real_multimatroid")
    ip = independence_polytope(rk, T12)
    assert ip.vertices() == pts((0, 0), (5, 0), (5, 1), (2, 4), (0, 4))
    assert normalized_volume(ip) == 31 == shoelace_normalized(ip.vertices())
    assert len(ip.hrep) == 2 + 3


def test_boolean_gives_unit_square():
    ip = independence_polytope(boolean_multimatroid(B2), T12)
    assert ip.vertices() == pts((0, 0), (1, 0), (0, 1), (1, 1))
    assert normalized_volume(ip) == 2


def test_zero_rank_gives_origin():
    zero = boolean_multimatroid(B2) * 0
    ip = independence_polytope(zero, T12)
    assert ip.vertices() == pts((0, 0))
    assert normalized_volume(ip) == 0
    assert ipc_volume(zero) == 0 == ipc_volume_via_transversals(zero)


def test_sum_h_pentagon_is_17():
    ip = independence_polytope(sum_h_rank(B2), T12)
    assert ip.vertices() == pts((0, 0), (3, 0), (3, 2), (2, 3), (0, 3))
    assert normalized_volume(ip) == 17 == shoelace_normalized(ip.vertices())


def test_standard_simplex_has_volume_one():
    for n in (1, 2, 3, 4):
        g = GroundSet.uniform(n, 2)
        t = g.maximal_sets[0]
        assert normalized_volume(simplex(t, t)) == 1


def test_infeasible_and_unbounded():
    assert vertices_from_hrep([((F(1),), F(-1)), ((F(-1),), F(0))], 1) == []
    with pytest.raises(InputError):
        vertices_from_hrep([((F(-1),), F(0))], 1)


def test_ipc_volumes():
    assert ipc_volume(boolean_multimatroid(B2)) == 8
    assert ipc_volume(fixtures.ranks("b2_real_multimatroid")) == 124
    assert ipc_volume(sum_h_rank(B2)) == 68


def test_transversal_route_matches():
    for rk in (boolean_multimatroid(B2), fixtures.ranks("b2_real_multimatroid"), sum_h_rank(B2)):
        assert ipc_volume_via_transversals(rk) == ipc_volume(rk)


def test_transversal_budget():
    g = GroundSet.uniform(5, 2)
    with pytest.raises(BudgetExceeded, match="triangulation"):
        ipc_volume_via_transversals(boolean_multimatroid(g))


def test_minkowski_decomposition_of_pentagon():
    one, two = B2.colored_set(["1"]), B2.colored_set(["2"])
    total = minkowski_sum([simplex(T12, one, 2), simplex(T12, two, 1), simplex(T12, T12, 3)])
    assert total.vertices() == pts((0, 0), (5, 0), (5, 1), (2, 4), (0, 4))
    square = minkowski_sum([simplex(T12, one), simplex(T12, two)])
    assert square.vertices() == pts((0, 0), (1, 0), (0, 1), (1, 1))
    origin = ExactPolytope.from_points(T12, [(0, 0)])
    assert same_polytope(minkowski_sum([square, origin]), square)


def test_minkowski_needs_same_orthant():
    other = B2.colored_set(["1bar", "2"])
    with pytest.raises(InputError):
        minkowski_sum([simplex(T12, T12), simplex(other, other)])


def test_mixed_volume_examples():
    one, two = B2.colored_set(["1"]), B2.colored_set(["2"])
    assert mixed_volume_simplices(T12, [one, two]) == 1
    assert mixed_volume_simplices(T12, [one, one]) == 0
    assert mixed_volume_simplices(T12, [T12, T12]) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mixed_volume_routes_agree_exhaustively(n):
    g = GroundSet.uniform(n, 2)
    t = g.maximal_sets[0]
    subsets = [s for s in subsets_of(t) if s]
    cache: dict = {}
    for sets in product(subsets, repeat=n):
        assert mixed_volume_simplices(t, list(sets), cache) == int(has_sdr(list(sets), t))


def test_mixed_volume_routes_agree_n4_sample():
    g = GroundSet.uniform(4, 2)
    t = g.maximal_sets[0]
    subsets = [s for s in subsets_of(t) if s]
    cache: dict = {}
    for sets in list(combinations(subsets, 4))[::40]:
        assert mixed_volume_simplices(t, list(sets), cache) == int(has_sdr(list(sets), t))


def test_sum_h_piece():
    chain = (B2.colored_set(["1"]), T12)
    piece = normal_complex_piece(sum_of_h(B2), chain)
    assert piece.vertices() == pts((0, 0), (3, 0), (3, 2), (F(5, 2), F(5, 2)))


def test_boolean_piece_is_truncated_cone():
    g = GroundSet.uniform(3, 2)
    rk = boolean_multimatroid(g)
    chain = enumerate_max_chains(g, g.maximal_sets[0])[0]
    piece = normal_complex_piece(Divisor(g, "X", {s: rk(s) for s in g.nonempty_sets}), chain)
    # x_{j1} ≥ x_{j2} ≥ x_{j3} ≥ 0 with partial sums ≤ 1, 2, 3: a unit-cube chamber
    assert normalized_volume(piece) == 1


def test_zero_divisor_piece_is_origin():
    chain = (B2.colored_set(["1"]), T12)
    piece = normal_complex_piece(Divisor(B2, "X", {}), chain)
    assert piece.vertices() == pts((0, 0))


def test_negative_coefficients_are_refused():
    with pytest.raises(InputError):
        normal_complex_piece(Divisor(B2, "X", {T12: -1}), (B2.colored_set(["1"]), T12))


def test_normal_complex_fixtures():
    assert normal_complex_equals_ipc(fixtures.ranks("b2_multimatroid"))
    assert normal_complex_equals_ipc(fixtures.ranks("b2_real_multimatroid"))
    assert normal_complex_equals_ipc(sum_h_rank(B2))


def test_cubical_example_has_one_interior_vertex_per_cone():
    rk = fixtures.ranks("b2_real_multimatroid")
    for chain in enumerate_max_chains(B2, T12):
        piece = normal_complex_piece(Divisor(B2, "X", rk.values), chain)
        order = [next(iter(bits(b & ~a))) for a, b in zip((0,) + chain, chain)]
        coords = list(bits(T12))
        inside = [
            v for v in piece.vertices()
            if all(v[coords.index(order[i])] > v[coords.index(order[i + 1])] for i in range(len(order) - 1))
            and all(x > 0 for x in v)
        ]
        assert len(inside) == 1


def test_counterexample():
    bad = fixtures.ranks("singletons_ranks")
    with pytest.raises(HypothesisViolated, match="hypothesis violated"):
        normal_complex_equals_ipc(bad)
    report: list = []
    assert not normal_complex_equals_ipc(bad, force=True, report=report)
    assert report[0][0] == "piece differs from globally bounded polytope"
    g = bad.ground
    chain = (g.colored_set(["1"]), g.colored_set(["1", "2"]))
    assert not same_polytope(normal_complex_piece(Divisor(g, "X", bad.values), chain), globally_bounded_piece(bad, chain))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 3), data=st.data())
def test_dd_matches_brute_force(n, data):
    rows = box(n, [data.draw(st.integers(1, 4)) for _ in range(n)])
    for _ in range(data.draw(st.integers(0, 3))):
        a = [data.draw(st.integers(-2, 2)) for _ in range(n)]
        rows.append((a, data.draw(st.integers(0, 6))))
    hrep = [(tuple(F(x) for x in a), F(b)) for a, b in rows]
    assert vertices_from_hrep(hrep, n) == vertices_brute_force(hrep, n)


@settings(max_examples=20, deadline=None)
@given(sizes=st.lists(st.integers(2, 3), min_size=1, max_size=3), seed=st.integers(0, 10**6))
def test_volume_routes_agree(sizes, seed):
    rk = random_R_multimatroid(GroundSet.from_sizes(sizes), seed)
    assert ipc_volume(rk) == ipc_volume_via_transversals(rk)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), data=st.data())
def test_volume_is_permutation_and_triangulation_invariant(seed, data):
    g = GroundSet.uniform(3, 2)
    rk = random_R_multimatroid(g, seed)
    ip = independence_polytope(rk, g.maximal_sets[0])
    verts = ip.vertices()
    perm = data.draw(st.permutations(range(3)))
    swapped = ExactPolytope.from_points(ip.ambient, [tuple(v[p] for p in perm) for v in verts])
    assert normalized_volume(swapped) == normalized_volume(ip)
    order = data.draw(st.permutations(range(len(verts))))
    assert normalized_volume(ip, order) == normalized_volume(ip)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), data=st.data())
def test_faces_of_the_complex(seed, data):
    # IP(M(T)) restricted to the coordinates of S ⊆ T is IP(M(S))
    g = GroundSet.uniform(3, 2)
    rk = random_R_multimatroid(g, seed)
    t = data.draw(st.sampled_from(g.maximal_sets))
    s = data.draw(st.sampled_from([u for u in subsets_of(t) if u]))
    coords = list(bits(t))
    keep = [coords.index(k) for k in bits(s)]
    face = sorted({tuple(v[i] for i in keep) for v in independence_polytope(rk, t).vertices()
                   if all(v[i] == 0 for i in range(len(coords)) if i not in keep)})
    assert face == independence_polytope(rk, s).vertices()


@settings(max_examples=15, deadline=None)
@given(sizes=st.lists(st.integers(2, 3), min_size=1, max_size=3), seed=st.integers(0, 10**6))
def test_pseudo_cubical_complexes(sizes, seed):
    rk = random_R_multimatroid(GroundSet.from_sizes(sizes), seed, PSEUDO_CUBICAL)
    assert normal_complex_equals_ipc(rk)


def test_quadratic_volume_routes():
    rk = quadratic_rank(GroundSet.uniform(3, 2))
    assert ipc_volume(rk) == ipc_volume_via_transversals(rk)


def test_polytope_contains_and_permutations():
    ip = independence_polytope(fixtures.ranks("b2_real_multimatroid"), T12)
    assert ip.contains((5, 1)) and not ip.contains((5, 2))
    assert ip.contains((1, 1)) and not ip.contains((-1, 0))
