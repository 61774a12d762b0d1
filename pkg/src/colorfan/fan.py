"""The colored fan of a partitioned ground set, in integer lattice coordinates.

Coordinates: block ``E_i`` contributes ``|E_i| - 1`` coordinates, one per
label except its lexicographically greatest, whose basis vector maps to
minus the sum of the others.  Cones are keyed by chains of nonempty colored
sets; the cone of ``(S_1 ⊊ ... ⊊ S_k)`` is spanned by the ray vectors of the
``S_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

from .errors import InputError
from .ground import Chain, GroundSet, bits
from .linalg import elementary_divisors, in_span


@dataclass
class WeightedCycle:
    """Rational weights on the k-dimensional cones (absent cones weigh 0)."""

    dim: int
    weights: dict[Chain, Fraction | int] = field(default_factory=dict)

    def support(self) -> dict[Chain, Fraction | int]:
        return {c: w for c, w in self.weights.items() if w != 0}


class CheckResult(NamedTuple):
    ok: bool
    witness: Any = None


class Fan:
    def __init__(self, ground: GroundSet):
        self.ground = ground
        self._coord_of_bit, self.block_coords, self.ambient_dim = _coordinates(ground)
        self.rays: dict[int, tuple[int, ...]] = {
            s: self._lattice_vector(s) for s in ground.nonempty_sets
        }
        self.cones: list[list[Chain]] = self._build_cones()
        self.facets: dict[Chain, tuple[tuple[Chain, int], ...]] = {
            sigma: tuple((sigma[:p] + sigma[p + 1:], sigma[p]) for p in range(len(sigma)))
            for cones in self.cones[1:]
            for sigma in cones
        }
        self.generator_overrides: dict[Chain, list[tuple[int, ...]]] = {}
        self._certificate: tuple[CheckResult, CheckResult] | None = None

    @property
    def n(self) -> int:
        return self.ground.n

    def _lattice_vector(self, mask: int) -> tuple[int, ...]:
        return _vector(self.ground, self._coord_of_bit, self.block_coords, self.ambient_dim, mask)

    def _build_cones(self) -> list[list[Chain]]:
        g = self.ground
        cones: list[list[Chain]] = [[()]]
        for _ in range(g.n):
            nxt = []
            for chain in cones[-1]:
                if chain:
                    nxt.extend(chain + (z,) for z in g.supersets(chain[-1]) if z != chain[-1])
                else:
                    nxt.extend((s,) for s in g.nonempty_sets)
            nxt.sort(key=lambda ch: tuple(g.sort_key(s) for s in ch))
            cones.append(nxt)
        return cones

    def ray_vector(self, mask: int) -> tuple[int, ...]:
        if mask == 0:
            raise InputError("the empty set has no ray")
        return self.rays[mask]

    def generators(self, chain: Chain) -> list[tuple[int, ...]]:
        if chain in self.generator_overrides:
            return self.generator_overrides[chain]
        return [self.rays[s] for s in chain]

    @property
    def maximal_cones(self) -> list[Chain]:
        return self.cones[self.n]

    def top_cycle(self) -> WeightedCycle:
        return WeightedCycle(self.n, {c: 1 for c in self.maximal_cones})

    def certify(self) -> tuple[CheckResult, CheckResult]:
        """Unimodularity and top-cycle balancing, computed once per fan."""
        if self._certificate is None:
            self._certificate = (check_unimodular(self), check_balancing(self, self.top_cycle()))
        return self._certificate


def build_fan(ground: GroundSet) -> Fan:
    return Fan(ground)


def _coordinates(ground: GroundSet):
    """Map each label bit to its coordinate (None for a block's dropped label)."""
    coord_of_bit: dict[int, int | None] = {}
    block_coords: list[tuple[int, ...]] = []
    c = 0
    for block in ground.blocks:
        dropped = max(block)
        coords = []
        for label in block:
            k = ground.index(label)
            if label == dropped:
                coord_of_bit[k] = None
            else:
                coord_of_bit[k] = c
                coords.append(c)
                c += 1
        block_coords.append(tuple(coords))
    return coord_of_bit, block_coords, c


def _vector(ground, coord_of_bit, block_coords, dim, mask) -> tuple[int, ...]:
    v = [0] * dim
    for k in bits(mask):
        c = coord_of_bit[k]
        if c is None:
            for cc in block_coords[ground.block_of[k]]:
                v[cc] -= 1
        else:
            v[c] += 1
    return tuple(v)


def ray_vector(ground: GroundSet, mask: int) -> tuple[int, ...]:
    """Image of Σ_{i∈S} e_i in dropped-label coordinates."""
    if mask == 0:
        raise InputError("the empty set has no ray")
    return _vector(ground, *_coordinates(ground), mask)


def check_unimodular(fan: Fan) -> CheckResult:
    """Every maximal cone's generators extend to a lattice basis.

    For a square generator matrix this is ``det = ±1``; in general it means
    all invariant factors of the (n × ambient) matrix equal 1.  The witness
    on failure is ``(chain, product of invariant factors)``, 0 if the
    generators are dependent.
    """
    n = fan.n
    for chain in fan.maximal_cones:
        divisors = elementary_divisors(fan.generators(chain))
        if len(divisors) < n:
            return CheckResult(False, (chain, 0))
        prod = 1
        for d in divisors:
            prod *= d
        if prod != 1:
            return CheckResult(False, (chain, prod))
    return CheckResult(True)


def coface_sums(fan: Fan, cycle: WeightedCycle) -> dict[Chain, list[Fraction | int]]:
    """For each (k-1)-face τ of the support, Σ_{σ ⊃ τ} w(σ) u_{σ∖τ}."""
    acc: dict[Chain, list[Fraction | int]] = {}
    for sigma, w in cycle.weights.items():
        if w == 0:
            continue
        gens = fan.generators(sigma)
        for p, (tau, _removed) in enumerate(fan.facets[sigma]):
            vec = acc.setdefault(tau, [0] * fan.ambient_dim)
            for c, x in enumerate(gens[p]):
                if x:
                    vec[c] += w * x
    return acc


def check_balancing(fan: Fan, cycle: WeightedCycle) -> CheckResult:
    """Exact balancing test; witness is the first violating face in canonical order."""
    if cycle.dim == 0:
        return CheckResult(True)
    acc = coface_sums(fan, cycle)
    for tau in fan.cones[cycle.dim - 1]:
        if tau in acc and not in_span(acc[tau], fan.generators(tau)):
            return CheckResult(False, tau)
    return CheckResult(True)


def corrupt_fan(fan: Fan, chain: Chain | None = None, factor: int = 2) -> Fan:
    """A copy of ``fan`` where one maximal cone's first generator is scaled by ``factor``."""
    bad = Fan.__new__(Fan)
    bad.__dict__.update(fan.__dict__)
    bad.generator_overrides = dict(fan.generator_overrides)
    bad._certificate = None
    chain = chain if chain is not None else fan.maximal_cones[0]
    gens = list(fan.generators(chain))
    gens[0] = tuple(factor * x for x in gens[0])
    bad.generator_overrides[chain] = gens
    return bad


def describe(fan: Fan) -> dict[str, Any]:
    g = fan.ground
    uni, bal = fan.certify()
    return {
        "ambient_dimension": fan.ambient_dim,
        "rays": [{"set": list(g.labels_of(s)), "vector": list(v)} for s, v in fan.rays.items()],
        "cone_counts": [len(c) for c in fan.cones],
        "unimodular": uni.ok,
        "balanced": bal.ok,
        "unimodular_witness": None if uni.ok else _chain_json(g, uni.witness[0]) + [uni.witness[1]],
        "balancing_witness": None if bal.ok else _chain_json(g, bal.witness),
    }


def _chain_json(g: GroundSet, chain: Chain) -> list:
    return [list(g.labels_of(s)) for s in chain]
