"""Rank functions on colored sets: axioms, cubicality, generators and samplers."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb
from typing import Iterator, Mapping, NamedTuple

from .chow import Divisor, convert, sum_of_h
from .errors import BudgetExceeded, InputError
from .fan import CheckResult
from .ground import Chain, GroundSet, all_max_chains, bits, subsets_of

PSEUDO_CUBICAL = "pseudo_cubical"
CUBICAL = "cubical"
NOT_PSEUDO_CUBICAL = "not_pseudo_cubical"


class RankFunction:
    """Values rk(S) for every colored set S, with rk(∅) = 0.

    No axiom is assumed; invalid candidates are representable so that the
    checks below have something to reject.
    """

    def __init__(self, ground: GroundSet, values: Mapping[int, object]):
        values = {s: Fraction(v) for s, v in dict(values).items()}
        if values.get(0, 0) != 0:
            raise InputError("rk(∅) must be 0")
        values[0] = Fraction(0)
        missing = [s for s in ground.colored_sets if s not in values]
        if missing:
            raise InputError(f"rank missing on {ground.format(missing[0])} ({len(missing)} sets without a value)")
        extra = [s for s in values if not ground.is_colored(s) or s & ~ground.full_mask]
        if extra:
            raise InputError(f"rank given on a set that is not colored: {extra[0]}")
        self.ground = ground
        self.values: dict[int, Fraction] = values

    def __call__(self, mask: int) -> Fraction:
        return self.values[mask]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RankFunction) and self.ground == other.ground and self.values == other.values

    def __repr__(self) -> str:
        body = ", ".join(f"{self.ground.format(s)}: {v}" for s, v in sorted(self.values.items(), key=lambda kv: self.ground.sort_key(kv[0])) if s)
        return f"RankFunction({body})"

    def __add__(self, other: "RankFunction") -> "RankFunction":
        return RankFunction(self.ground, {s: v + other.values[s] for s, v in self.values.items()})

    def __mul__(self, scalar) -> "RankFunction":
        return RankFunction(self.ground, {s: v * scalar for s, v in self.values.items()})

    __rmul__ = __mul__


class AxiomReport(dict):
    """Map from axiom name to CheckResult."""

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.values())


class Cubicality(NamedTuple):
    kind: str
    chain: Chain | None
    detail: str


def _covering_pairs(g: GroundSet) -> Iterator[tuple[int, int]]:
    for s in g.colored_sets:
        for bm in g.block_masks:
            if s & bm:
                continue
            for k in bits(bm):
                yield s, s | 1 << k


def _first_monotone_failure(rk: RankFunction, bounded: bool) -> CheckResult:
    for s, t in _covering_pairs(rk.ground):
        if rk(t) < rk(s) or (bounded and rk(t) > rk(s) + 1):
            return CheckResult(False, (s, t))
    return CheckResult(True)


def _first_submodular_failure(rk: RankFunction) -> CheckResult:
    g = rk.ground
    sets = g.colored_sets
    for i, s in enumerate(sets):
        for t in sets[i + 1:]:
            u = s | t
            if u == s or u == t or not g.is_colored(u):
                continue
            if rk(u) + rk(s & t) > rk(s) + rk(t):
                return CheckResult(False, (s, t))
    return CheckResult(True)


def check_R_axioms(rk: RankFunction) -> AxiomReport:
    """R1 rk(∅)=0, R2 monotone on covering pairs, R3 submodular when S∪T is colored."""
    return AxiomReport(
        R1=CheckResult(rk(0) == 0, None if rk(0) == 0 else (0,)),
        R2=_first_monotone_failure(rk, bounded=False),
        R3=_first_submodular_failure(rk),
    )


def check_multimatroid_axioms(rk: RankFunction) -> AxiomReport:
    """Integrality plus BR1-BR4."""
    g = rk.ground
    bad = next((s for s in g.colored_sets if rk(s).denominator != 1 or rk(s) < 0), None)
    report = AxiomReport(
        integrality=CheckResult(bad is None, None if bad is None else (bad,)),
        BR1=CheckResult(rk(0) == 0, None if rk(0) == 0 else (0,)),
        BR2=_first_monotone_failure(rk, bounded=True),
        BR3=_first_submodular_failure(rk),
    )
    report["BR4"] = CheckResult(True)
    for s in g.colored_sets:
        for bm in g.block_masks:
            if s & bm:
                continue
            elems = list(bits(bm))
            for a in range(len(elems)):
                for b in range(a + 1, len(elems)):
                    x, y = s | 1 << elems[a], s | 1 << elems[b]
                    if rk(x) - rk(s) != 1 and rk(y) - rk(s) != 1:
                        report["BR4"] = CheckResult(False, (s, x, y))
                        return report
    return report


def restrict(rk: RankFunction, top: int) -> dict[int, Fraction]:
    """rk on the power set of the colored set ``top``."""
    if not rk.ground.is_colored(top):
        raise InputError(f"{top} is not a colored set")
    return {s: rk(s) for s in subsets_of(top)}


def check_matroid_axioms(values: Mapping[int, object], top: int) -> AxiomReport:
    """M1-M3 for a rank function on the subsets of ``top``."""
    subs = sorted(subsets_of(top), key=GroundSet.sort_key)
    m1 = values[0] == 0
    m2 = next(((s, s | 1 << k) for s in subs for k in bits(top & ~s) if values[s | 1 << k] < values[s]), None)
    m3 = next(
        ((s, t) for s in subs for t in subs if values[s | t] + values[s & t] > values[s] + values[t]),
        None,
    )
    return AxiomReport(
        M1=CheckResult(m1, None if m1 else (0,)),
        M2=CheckResult(m2 is None, m2),
        M3=CheckResult(m3 is None, m3),
    )


def divisor_of(rk: RankFunction) -> Divisor:
    return Divisor(rk.ground, "X", {s: v for s, v in rk.values.items() if s})


def cubicality(rk: RankFunction) -> Cubicality:
    """Classify by chainwise concavity and monotonicity along every maximal chain.

    Witness: the first violated inequality if any, otherwise the first tight
    one, otherwise the first chain.
    """
    g = rk.ground
    tight: Cubicality | None = None
    chains = all_max_chains(g)
    for chain in chains:
        r = [Fraction(0)] + [rk(s) for s in chain]
        n = len(chain)
        for i in range(1, n):
            lhs, rhs = 2 * r[i], r[i - 1] + r[i + 1]
            if lhs < rhs:
                return Cubicality(NOT_PSEUDO_CUBICAL, chain, f"2·{r[i]} < {r[i - 1]}+{r[i + 1]}")
            if lhs == rhs and tight is None:
                tight = Cubicality(PSEUDO_CUBICAL, chain, f"2·{r[i]} = {r[i - 1]}+{r[i + 1]}")
        for j in range(1, n + 1):
            if r[j] < r[j - 1]:
                return Cubicality(NOT_PSEUDO_CUBICAL, chain, f"{r[j]} < {r[j - 1]}")
            if r[j] == r[j - 1] and tight is None:
                tight = Cubicality(PSEUDO_CUBICAL, chain, f"{r[j]} = {r[j - 1]}")
    if tight is not None:
        return tight
    return Cubicality(CUBICAL, chains[0], "all inequalities strict")


def is_pseudo_cubical(rk: RankFunction) -> bool:
    return cubicality(rk).kind != NOT_PSEUDO_CUBICAL


def boolean_multimatroid(ground: GroundSet) -> RankFunction:
    return RankFunction(ground, {s: s.bit_count() for s in ground.colored_sets})


def quadratic_rank(ground: GroundSet) -> RankFunction:
    n = ground.n
    return RankFunction(ground, {s: comb(n + 1, 2) - comb(n + 1 - s.bit_count(), 2) for s in ground.colored_sets})


def sum_h_rank(ground: GroundSet) -> RankFunction:
    """X-coefficients of the sum of all h_S, read as a rank candidate."""
    x = convert(sum_of_h(ground), "X")
    return RankFunction(ground, {s: x.coefficient(s) for s in ground.colored_sets})


def _pseudo_cubical_candidate(g: GroundSet, rng: random.Random) -> RankFunction:
    n = g.n
    # weakly decreasing positive increments along |S|, then per-set noise
    steps = sorted((rng.randint(1, 3 * n + 3) for _ in range(n)), reverse=True)
    if rng.random() < 0.2:
        steps = [steps[0]] * n
    noise_scale = Fraction(rng.choice([0, 1, 1, 2]), 2)
    partial = [0]
    for step in steps:
        partial.append(partial[-1] + step)
    values = {}
    for s in g.colored_sets:
        eps = noise_scale * rng.randint(-1, 1) if s else 0
        values[s] = partial[s.bit_count()] + eps
    return RankFunction(g, values)


def _general_candidate(g: GroundSet, rng: random.Random) -> RankFunction:
    labels = range(len(g.labels))
    terms = []
    for _ in range(rng.randint(1, 3)):
        weights = [rng.randint(0, 3) for _ in labels]
        cap = rng.randint(1, 2 * g.n + 1)
        scale = Fraction(rng.randint(1, 4), rng.choice([1, 1, 2]))
        terms.append((weights, cap, scale))
    values = {}
    for s in g.colored_sets:
        values[s] = sum(scale * min(cap, sum(weights[k] for k in bits(s))) for weights, cap, scale in terms)
    if rng.random() < 0.5:
        for _ in range(rng.randint(1, 3)):
            s = rng.choice(g.nonempty_sets)
            values[s] += Fraction(rng.choice([-1, 1]), 2)
    return RankFunction(g, values)


def random_R_multimatroid(ground: GroundSet, seed: int, mode: str = "general", budget: int = 1000) -> RankFunction:
    """Seeded sample of a rank function passing R1-R3.

    ``pseudo_cubical`` draws chainwise concave candidates; ``general`` draws
    nonnegative combinations of truncated modular functions with occasional
    perturbations.  Both reject candidates that fail their checks.
    """
    if mode not in (PSEUDO_CUBICAL, "general"):
        raise InputError(f"unknown sampling mode {mode!r}")
    rng = random.Random(f"{seed}:{mode}:{ground.blocks}")
    for _ in range(budget):
        if mode == PSEUDO_CUBICAL:
            rk = _pseudo_cubical_candidate(ground, rng)
            if is_pseudo_cubical(rk):
                return rk
        else:
            rk = _general_candidate(ground, rng)
            if check_R_axioms(rk).ok:
                return rk
    raise BudgetExceeded(f"no {mode} sample accepted within {budget} attempts (seed {seed})")


def enumerate_multimatroids(ground: GroundSet) -> Iterator[RankFunction]:
    """Every integer rank function satisfying BR1-BR4.

    Backtracking over the colored sets by size; BR2 bounds each value by
    its immediate subsets, and BR3/BR4 are checked as soon as all sets
    involved have values, which keeps the search small for tiny ground sets.
    """
    g = ground
    order = list(g.nonempty_sets)
    rank: dict[int, int] = {0: 0}
    # submodularity pairs (a, b) with union u, checked when u is assigned
    pairs_for: dict[int, list[tuple[int, int]]] = {u: [] for u in order}
    for u in order:
        subs = [s for s in subsets_of(u) if s != u]
        for i, a in enumerate(subs):
            for b in subs[i + 1:]:
                if a | b == u and a & b != a and a & b != b:
                    pairs_for[u].append((a, b))
    # BR4 obligations: for u = s+x, pairs (s, s+y) with y in x's block
    br4_for: dict[int, list[tuple[int, int]]] = {u: [] for u in order}
    position = {s: i for i, s in enumerate(order)}
    for s in g.colored_sets:
        for bm in g.block_masks:
            if s & bm:
                continue
            elems = [s | 1 << k for k in bits(bm)]
            for a in range(len(elems)):
                for b in range(a + 1, len(elems)):
                    x, y = elems[a], elems[b]
                    later = x if position[x] > position[y] else y
                    br4_for[later].append((x, y))

    def ok(u: int) -> bool:
        for a, b in pairs_for[u]:
            if rank[u] + rank[a & b] > rank[a] + rank[b]:
                return False
        for x, y in br4_for[u]:
            base = rank[x & y]
            if rank[x] - base != 1 and rank[y] - base != 1:
                return False
        return True

    def search(i: int) -> Iterator[RankFunction]:
        if i == len(order):
            yield RankFunction(g, dict(rank))
            return
        u = order[i]
        below = [rank[u & ~(1 << k)] for k in bits(u)]
        for value in range(max(below), min(below) + 2):
            rank[u] = value
            if ok(u):
                yield from search(i + 1)
        rank.pop(u, None)

    yield from search(0)
