"""Exact polytopes in orthant coordinates, their volumes, and the independence complex.

A polytope lives in the coordinates of a colored set ``ambient``: coordinate
``p`` corresponds to the ``p``-th label of ``ambient`` in canonical order.
For a maximal colored set this is one coordinate per block.

Vertices come from the double description method on the homogenized cone
(exact, integer arithmetic), volumes from a pulling triangulation built on
the face lattice read off the tight constraint sets.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial, prod
from typing import Iterable, Sequence

from .chow import Divisor, convert, restrict_to_boolean
from .errors import BudgetExceeded, HypothesisViolated, InputError, InternalConsistencyError
from .ground import Chain, GroundSet, bits, enumerate_max_chains, has_sdr, subsets_of
from .linalg import common_denominator, det, independent_rows, inverse, nullspace, primitive, rank, row_echelon, solve
from .multimatroid import divisor_of, is_pseudo_cubical

Point = tuple[Fraction, ...]
Row = tuple[tuple[Fraction, ...], Fraction]


def _row(a: Iterable[object], b: object) -> Row:
    return tuple(Fraction(x) for x in a), Fraction(b)


class ExactPolytope:
    """H-representation ``a·x ≤ b`` with a lazily computed, cached vertex list."""

    def __init__(self, ambient: int, hrep: Sequence[Row], vertices: Sequence[Point] | None = None):
        self.ambient = ambient
        self.dim = ambient.bit_count()
        self.hrep: list[Row] = [_row(a, b) for a, b in hrep]
        for a, _ in self.hrep:
            if len(a) != self.dim:
                raise InputError(f"row of length {len(a)} in a {self.dim}-dimensional polytope")
        self._vertices = sorted(set(vertices)) if vertices is not None else None
        self._int_rows: list[tuple[tuple[int, ...], int]] | None = None

    @classmethod
    def from_points(cls, ambient: int, points: Iterable[Sequence[object]]) -> "ExactPolytope":
        pts = sorted({tuple(Fraction(x) for x in p) for p in points})
        if not pts:
            raise InputError("convex hull of no points")
        hrep, verts = convex_hull(pts, ambient.bit_count())
        return cls(ambient, hrep, verts)

    def vertices(self) -> list[Point]:
        if self._vertices is None:
            self._vertices = vertices_from_hrep(self.hrep, self.dim)
        return self._vertices

    def integer_rows(self) -> list[tuple[tuple[int, ...], int]]:
        """The H-representation with each row scaled to a primitive integer row."""
        if self._int_rows is None:
            self._int_rows = [(r[:-1], r[-1]) for r in (primitive(list(a) + [b]) for a, b in self.hrep)]
        return self._int_rows

    def contains(self, point: Sequence[object]) -> bool:
        point = [Fraction(x) for x in point]
        den = common_denominator(point)
        ints = [int(x * den) for x in point]
        return all(sum(x * y for x, y in zip(a, ints)) <= b * den for a, b in self.integer_rows())

    def __repr__(self) -> str:
        return f"ExactPolytope(dim={self.dim}, rows={len(self.hrep)}, vertices={self._vertices})"


# -- double description ------------------------------------------------------


def extreme_rays(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{y : r·y ≤ 0 for every row r}``.

    Rows must be integer vectors spanning the whole space (otherwise the cone
    has a lineality space).  Adjacency of rays is decided combinatorially
    from their sets of tight rows.
    """
    d = len(rows[0])
    basis = independent_rows(rows)
    if len(basis) < d:
        raise InputError("cone is not pointed (constraints do not span the space)")
    binv = inverse([rows[i] for i in basis])
    rays = [primitive([-binv[r][c] for r in range(d)]) for c in range(d)]
    all_basis = sum(1 << i for i in basis)
    zeros = [all_basis & ~(1 << basis[c]) for c in range(d)]
    in_basis = set(basis)
    for i, row in enumerate(rows):
        if i in in_basis:
            continue
        values = [sum(a * b for a, b in zip(row, r)) for r in rays]
        pos = [k for k, v in enumerate(values) if v > 0]
        neg = [k for k, v in enumerate(values) if v < 0]
        new_rays, new_zeros = [], []
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if common.bit_count() < d - 2:
                    continue
                if any(k != p and k != q and common & zeros[k] == common for k in range(len(rays))):
                    continue
                vp, vq = values[p], values[q]
                new_rays.append(primitive([vp * a - vq * b for a, b in zip(rays[q], rays[p])]))
                new_zeros.append(common | 1 << i)
        keep = [k for k, v in enumerate(values) if v <= 0]
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | (1 << i if values[k] == 0 else 0) for k in keep] + new_zeros
    return rays


def vertices_from_hrep(hrep: Sequence[Row], dim: int) -> list[Point]:
    """Vertices of a bounded H-polytope (sorted); empty list when infeasible."""
    if dim == 0:
        return [()] if all(b >= 0 for _, b in hrep) else []
    rows = [primitive(list(a) + [-b]) for a, b in hrep]
    rows.append(tuple([0] * dim + [-1]))
    if rank(rows) < dim + 1:
        raise InputError("polytope is unbounded (its constraints have a lineality space)")
    rays = extreme_rays(rows)
    finite = [r for r in rays if r[-1] > 0]
    if not finite:
        return []
    if any(r[-1] == 0 for r in rays):
        raise InputError("polytope is unbounded")
    return sorted({tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in finite})


def vertices_brute_force(hrep: Sequence[Row], dim: int) -> list[Point]:
    """Vertices by solving every dim-subset of rows as equalities (bounded input only)."""
    found = set()
    for subset in combinations(hrep, dim):
        x = solve([a for a, _ in subset], [b for _, b in subset])
        if x is None:
            continue
        if all(sum(p * q for p, q in zip(a, x)) <= b for a, b in hrep):
            found.add(tuple(x))
    return sorted(found)


def vertices(polytope: ExactPolytope) -> list[Point]:
    return polytope.vertices()


# -- convex hulls --------------------------------------------------------------


def convex_hull(points: Sequence[Point], dim: int) -> tuple[list[Row], list[Point]]:
    """Facet rows (plus equalities of the affine hull) and vertices of conv(points)."""
    p0 = points[0]
    directions = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    echelon, pivots = row_echelon(directions) if directions else ([], [])
    k = len(pivots)
    equalities: list[Row] = []
    for c in nullspace(echelon, dim) if k < dim else []:
        rhs = sum(x * y for x, y in zip(c, p0))
        equalities.append((tuple(c), rhs))
        equalities.append((tuple(-x for x in c), -rhs))
    if k == 0:
        return equalities, [p0]
    chart = [tuple(p[c] for c in pivots) for p in points]
    polar = [primitive(list(p) + [-1]) for p in chart]
    facets: list[Row] = []
    for ray in extreme_rays(polar):
        normal = ray[:-1]
        if any(normal):
            full = [Fraction(0)] * dim
            for c, x in zip(pivots, normal):
                full[c] = Fraction(x)
            facets.append((tuple(full), Fraction(ray[-1])))
    verts = []
    for p, q in zip(points, chart):
        tight = [a for a, b in facets if sum(x * y for x, y in zip(a, p)) == b]
        if rank([[a[c] for c in pivots] for a in tight]) == k:
            verts.append(p)
    return facets + equalities, sorted(set(verts))


def minkowski_sum(polytopes: Sequence[ExactPolytope]) -> ExactPolytope:
    if not polytopes:
        raise InputError("Minkowski sum of no polytopes")
    ambient = polytopes[0].ambient
    if any(p.ambient != ambient for p in polytopes):
        raise InputError("Minkowski summands live in different orthants")
    points = polytopes[0].vertices()
    for p in polytopes[1:]:
        sums = {tuple(a + b for a, b in zip(u, v)) for u in points for v in p.vertices()}
        points = ExactPolytope.from_points(ambient, sums).vertices()
    return ExactPolytope.from_points(ambient, points)


def simplex(ambient: int, subset: int, scale: object = 1) -> ExactPolytope:
    """``scale`` times conv(0, unit vectors of ``subset``)."""
    if subset & ~ambient or not subset:
        raise InputError("simplex support must be a nonempty subset of the ambient set")
    scale = Fraction(scale)
    if scale < 0:
        raise InputError("negative multiples of a simplex are not polytopes")
    coords = list(bits(ambient))
    points = [tuple([Fraction(0)] * len(coords))]
    for k in bits(subset):
        v = [Fraction(0)] * len(coords)
        v[coords.index(k)] = scale
        points.append(tuple(v))
    return ExactPolytope.from_points(ambient, points)


# -- volumes -------------------------------------------------------------------


def _affine_rank(points: Sequence[Point]) -> int:
    if not points:
        return -1
    return rank([[a - b for a, b in zip(p, points[0])] for p in points[1:]]) if len(points) > 1 else 0


def triangulate(polytope: ExactPolytope, order: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Pulling triangulation: simplices as tuples of vertex indices.

    Faces are vertex-index sets; the facets of a face are the inclusion-maximal
    proper intersections with the tight sets of the constraint rows.  ``order``
    ranks the vertices for choosing apexes (default: index order).
    """
    verts = polytope.vertices()
    n = polytope.dim
    if _affine_rank(verts) < n:
        return []
    rank_of = {v: i for i, v in enumerate(order)} if order is not None else {v: v for v in range(len(verts))}
    den = common_denominator(x for v in verts for x in v)
    scaled = [[int(x * den) for x in v] for v in verts]
    tight = [
        frozenset(i for i, v in enumerate(scaled) if sum(x * y for x, y in zip(a, v)) == b * den)
        for a, b in polytope.integer_rows()
    ]
    memo: dict[frozenset, list[tuple[int, ...]]] = {}

    def facets(face: frozenset) -> list[frozenset]:
        cands = {face & t for t in tight}
        cands = {c for c in cands if c and c != face}
        return [c for c in cands if not any(c < other for other in cands)]

    def pull(face: frozenset, k: int) -> list[tuple[int, ...]]:
        if face in memo:
            return memo[face]
        if k == 0:
            if len(face) != 1:
                raise InternalConsistencyError("a 0-dimensional face with several vertices")
            memo[face] = [tuple(face)]
            return memo[face]
        apex = min(face, key=rank_of.__getitem__)
        out = []
        for f in sorted(facets(face), key=sorted):
            if apex not in f:
                out.extend(s + (apex,) for s in pull(f, k - 1))
        memo[face] = out
        return out

    return pull(frozenset(range(len(verts))), n)


def normalized_volume(polytope: ExactPolytope, order: Sequence[int] | None = None) -> Fraction:
    """n! times the Euclidean volume; 0 for lower-dimensional polytopes."""
    verts = polytope.vertices()
    if not verts:
        return Fraction(0)
    if polytope.dim == 0:
        return Fraction(1)
    den = common_denominator(x for v in verts for x in v)
    scaled = [[int(x * den) for x in v] for v in verts]
    total = 0
    for s in triangulate(polytope, order):
        base = scaled[s[-1]]
        total += abs(det([[a - b for a, b in zip(scaled[i], base)] for i in s[:-1]]))
    return Fraction(total) / den ** polytope.dim


def same_polytope(p: ExactPolytope, q: ExactPolytope) -> bool:
    """Equal vertex sets and each vertex list satisfies the other H-representation."""
    if p.ambient != q.ambient:
        return False
    pv, qv = p.vertices(), q.vertices()
    return pv == qv and all(q.contains(v) for v in pv) and all(p.contains(v) for v in qv)


# -- independence polytopes and the complex ------------------------------------


def independence_polytope(rk, top: int) -> ExactPolytope:
    """x ≥ 0 and Σ_{i∈X} x_i ≤ rk(X) for every nonempty X ⊆ top."""
    coords = list(bits(top))
    n = len(coords)
    rows: list[Row] = []
    for p in range(n):
        a = [0] * n
        a[p] = -1
        rows.append(_row(a, 0))
    for x in sorted(subsets_of(top), key=GroundSet.sort_key):
        if x:
            rows.append(_row([1 if x >> k & 1 else 0 for k in coords], rk(x)))
    return ExactPolytope(top, rows)


def ipc_volume(rk) -> Fraction:
    """Σ over maximal T of the normalized volume of the independence polytope."""
    return sum((normalized_volume(independence_polytope(rk, t)) for t in rk.ground.maximal_sets), Fraction(0))


def mixed_volume_simplices(top: int, sets: Sequence[int], _cache: dict | None = None) -> int:
    """Normalized mixed volume of the simplices Δ_{S_1},…,Δ_{S_n}, computed two ways.

    The matching route says 1 if the S_i have distinct representatives and 0
    otherwise.  The geometric route is the inclusion–exclusion formula over
    Minkowski sums of subfamilies; with normalized volumes it has to be
    divided by n!.  A disagreement raises an internal-consistency error.
    """
    n = top.bit_count()
    if len(sets) != n:
        raise InputError(f"need {n} simplices, got {len(sets)}")
    if any(not s or s & ~top for s in sets):
        raise InputError("each simplex support must be a nonempty subset of the ambient set")
    by_matching = int(has_sdr(list(sets), top))
    cache = _cache if _cache is not None else {}
    total = Fraction(0)
    for size in range(1, n + 1):
        for family in combinations(range(n), size):
            key = tuple(sorted(sets[j] for j in family))
            if key not in cache:
                cache[key] = normalized_volume(minkowski_sum([simplex(top, s) for s in key]))
            total += cache[key] if (n - size) % 2 == 0 else -cache[key]
    by_volume = total / factorial(n)
    if by_volume != by_matching:
        raise InternalConsistencyError(
            f"mixed volume routes disagree: matching {by_matching}, inclusion-exclusion {by_volume}"
        )
    return by_matching


_SDR_FAMILIES: dict[int, list[tuple[tuple[int, ...], int]]] = {}


def _sdr_families(n: int) -> list[tuple[tuple[int, ...], int]]:
    """Multisets of n nonempty subsets of range(n) with an SDR, with their ordering counts."""
    if n not in _SDR_FAMILIES:
        full = (1 << n) - 1
        out = []
        for family in combinations_with_replacement(range(1, full + 1), n):
            if has_sdr(family, full):
                counts = [family.count(s) for s in set(family)]
                out.append((family, factorial(n) // prod(factorial(c) for c in counts)))
        _SDR_FAMILIES[n] = out
    return _SDR_FAMILIES[n]


def orthant_volume_via_transversals(coefficients: dict[int, object], top: int) -> Fraction:
    """Σ over ordered n-sequences of nonempty S_i ⊆ T of ∏ a_{S_i} · [SDR exists].

    Summed as multisets weighted by the number of their orderings.
    """
    coords = list(bits(top))
    n = len(coords)

    def lift(local: int) -> int:
        return sum(1 << coords[p] for p in bits(local))

    total = Fraction(0)
    for family, orderings in _sdr_families(n):
        term = orderings
        for local in family:
            term *= coefficients.get(lift(local), 0)
            if not term:
                break
        total += term
    return total


def ipc_volume_via_transversals(rk, budget_n: int = 4) -> Fraction:
    n = rk.ground.n
    if n > budget_n:
        raise BudgetExceeded(
            f"transversal expansion for n={n} exceeds budget n≤{budget_n}; use the triangulation route"
        )
    d = divisor_of(rk)
    return sum(
        (orthant_volume_via_transversals(restrict_to_boolean(d, t), t) for t in rk.ground.maximal_sets),
        Fraction(0),
    )


def normal_complex_piece(divisor: Divisor, chain: Chain) -> ExactPolytope:
    """The cone of ``chain`` cut by Σ_{i∈S_k} x_i ≤ c(S_k), in coordinates of its top."""
    g = divisor.ground
    top = chain[-1]
    if len(chain) != g.n or not g.is_maximal(top):
        raise InputError("normal complex pieces are indexed by maximal chains")
    c = convert(divisor, "X")
    negative = [s for s, v in c.coeffs.items() if v < 0]
    if negative:
        raise InputError(f"negative coefficient on {g.format(negative[0])}; pieces need c(S) ≥ 0")
    coords = list(bits(top))
    n = len(coords)
    order = []
    prev = 0
    for s in chain:
        (k,) = bits(s & ~prev)
        order.append(coords.index(k))
        prev = s
    rows: list[Row] = []
    for a, b in zip(order, order[1:]):
        row = [0] * n
        row[b], row[a] = 1, -1
        rows.append(_row(row, 0))
    last = [0] * n
    last[order[-1]] = -1
    rows.append(_row(last, 0))
    for s in chain:
        rows.append(_row([1 if s >> k & 1 else 0 for k in coords], c.coefficient(s)))
    return ExactPolytope(top, rows)


def globally_bounded_piece(rk, chain: Chain) -> ExactPolytope:
    """The piece with every rank constraint of its orthant added."""
    piece = normal_complex_piece(divisor_of(rk), chain)
    ip = independence_polytope(rk, chain[-1])
    return ExactPolytope(piece.ambient, piece.hrep + ip.hrep)


def normal_complex_equals_ipc(rk, force: bool = False, report: list | None = None) -> bool:
    """Check that the normal complex of D_M coincides with the independence complex.

    For every maximal T: each piece equals its globally bounded version, the
    piece volumes add up to the orthant volume, and the hull of all piece
    vertices has the same vertices as the independence polytope.  Requires a
    pseudo-cubical rank unless ``force`` is set; ``report`` collects the
    failures.
    """
    if not force and not is_pseudo_cubical(rk):
        raise HypothesisViolated("hypothesis violated: the rank function is not pseudo-cubical")
    g = rk.ground
    d = divisor_of(rk)
    ok = True
    for t in g.maximal_sets:
        ip = independence_polytope(rk, t)
        volume = Fraction(0)
        corners = set()
        for chain in enumerate_max_chains(g, t):
            piece = normal_complex_piece(d, chain)
            if not same_polytope(piece, globally_bounded_piece(rk, chain)):
                ok = False
                if report is not None:
                    report.append(("piece differs from globally bounded polytope", chain))
            volume += normalized_volume(piece)
            corners.update(piece.vertices())
        if volume != normalized_volume(ip):
            ok = False
            if report is not None:
                report.append(("volume mismatch", t, volume, normalized_volume(ip)))
        if ExactPolytope.from_points(t, corners).vertices() != ip.vertices():
            ok = False
            if report is not None:
                report.append(("vertex mismatch", t))
    return ok
