"""Partitioned ground sets, colored sets, chains and transversal counts.

A colored set is stored as an ``int`` bitmask over the ground set's labels
in canonical (block, position) order: bit ``k`` is the ``k``-th label of
``GroundSet.labels``.  Chains are tuples of such masks, strictly increasing.
"""

from __future__ import annotations

from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Sequence

from .errors import InputError

Chain = tuple[int, ...]


class GroundSet:
    """The partition E = E_1 ⊔ ... ⊔ E_n with opaque string labels."""

    def __init__(self, blocks: Iterable[Iterable[str]]):
        blocks = tuple(tuple(str(x) for x in b) for b in blocks)
        if not blocks:
            raise InputError("a ground set needs at least one block")
        seen: set[str] = set()
        for b in blocks:
            if not b:
                raise InputError("blocks must be nonempty")
            for x in b:
                if x in seen:
                    raise InputError(f"label {x!r} occurs more than once")
                seen.add(x)
        self.blocks = blocks
        self.labels: tuple[str, ...] = tuple(x for b in blocks for x in b)
        self._index = {x: k for k, x in enumerate(self.labels)}
        block_of = []
        block_masks = []
        k = 0
        for i, b in enumerate(blocks):
            block_masks.append(((1 << len(b)) - 1) << k)
            block_of.extend([i] * len(b))
            k += len(b)
        self.block_of: tuple[int, ...] = tuple(block_of)
        self.block_masks: tuple[int, ...] = tuple(block_masks)

    def __repr__(self) -> str:
        return f"GroundSet({[list(b) for b in self.blocks]!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroundSet) and other.blocks == self.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    @classmethod
    def uniform(cls, n: int, r: int) -> "GroundSet":
        """n blocks of size r with labels like ``"2.1"`` (block 2, element 1)."""
        return cls([[f"{i}.{j}" for j in range(1, r + 1)] for i in range(1, n + 1)])

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "GroundSet":
        return cls([[f"{i}.{j}" for j in range(1, s + 1)] for i, s in enumerate(sizes, 1)])

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown label {label!r}") from None

    def block(self, label: str) -> int:
        return self.block_of[self.index(label)]

    def is_colored(self, mask: int) -> bool:
        return all((mask & bm) & ((mask & bm) - 1) == 0 for bm in self.block_masks)

    def is_maximal(self, mask: int) -> bool:
        return self.is_colored(mask) and mask.bit_count() == self.n

    def colored_set(self, labels: Iterable[str]) -> int:
        mask = 0
        for x in labels:
            mask |= 1 << self.index(x)
        if not self.is_colored(mask):
            raise InputError(f"{sorted(labels)!r} has two labels from the same block")
        return mask

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[k] for k in bits(mask))

    def format(self, mask: int) -> str:
        return "{" + ",".join(self.labels_of(mask)) + "}"

    @staticmethod
    def sort_key(mask: int) -> tuple[int, tuple[int, ...]]:
        return (mask.bit_count(), tuple(bits(mask)))

    @cached_property
    def colored_sets(self) -> tuple[int, ...]:
        """All colored sets, ∅ first, in canonical order."""
        choices = [[0] + [1 << k for k in bits(bm)] for bm in self.block_masks]
        masks = [sum(c) for c in product(*choices)]
        return tuple(sorted(masks, key=self.sort_key))

    @cached_property
    def nonempty_sets(self) -> tuple[int, ...]:
        return self.colored_sets[1:]

    @cached_property
    def maximal_sets(self) -> tuple[int, ...]:
        return tuple(s for s in self.colored_sets if s.bit_count() == self.n)

    @cached_property
    def _supersets(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {s: [] for s in self.colored_sets}
        for z in self.colored_sets:
            for s in subsets_of(z):
                out[s].append(z)
        return {s: tuple(sorted(v, key=self.sort_key)) for s, v in out.items()}

    def supersets(self, mask: int) -> tuple[int, ...]:
        """Colored sets containing ``mask`` (including itself)."""
        return self._supersets[mask]


def bits(mask: int) -> Iterable[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def subsets_of(mask: int) -> list[int]:
    """All submasks of ``mask`` including 0 and ``mask``."""
    out = []
    s = mask
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    return out


def enumerate_colored_sets(ground: GroundSet) -> list[tuple[int, bool]]:
    """All colored sets with a flag telling whether each one is maximal."""
    return [(s, s.bit_count() == ground.n) for s in ground.colored_sets]


def enumerate_max_chains(ground: GroundSet, top: int) -> list[Chain]:
    """The n! maximal chains ending at the maximal colored set ``top``."""
    if not ground.is_maximal(top):
        raise InputError(f"{ground.format(top)} is not a maximal colored set")
    chains = []
    for order in permutations(bits(top)):
        acc = 0
        chain = []
        for k in order:
            acc |= 1 << k
            chain.append(acc)
        chains.append(tuple(chain))
    return chains


def all_max_chains(ground: GroundSet) -> list[Chain]:
    return [c for t in ground.maximal_sets for c in enumerate_max_chains(ground, t)]


def is_chain(chain: Sequence[int]) -> bool:
    return all(a != b and a & b == a for a, b in zip(chain, chain[1:])) and all(chain)


def has_perfect_matching(options: Sequence[Sequence[int]], right_size: int) -> bool:
    """Whether left node i can be matched injectively into ``options[i]``.

    Plain augmenting-path search (Kuhn's algorithm); right nodes are
    ``0..right_size-1``.
    """
    if len(options) != right_size:
        return False
    match_right = [-1] * right_size

    def augment(i: int, seen: list[bool]) -> bool:
        for t in options[i]:
            if not seen[t]:
                seen[t] = True
                if match_right[t] < 0 or augment(match_right[t], seen):
                    match_right[t] = i
                    return True
        return False

    return all(augment(i, [False] * right_size) for i in range(len(options)))


def has_sdr(sets: Sequence[int], universe: int) -> bool:
    """Whether the masks in ``sets`` admit distinct representatives covering ``universe``.

    ``len(sets)`` must equal the size of ``universe`` for this to be a
    bijection; elements outside ``universe`` are ignored.
    """
    positions = {k: p for p, k in enumerate(bits(universe))}
    options = [[positions[k] for k in bits(s & universe)] for s in sets]
    return has_perfect_matching(options, len(positions))


def transversal_count(ground: GroundSet, sets: Sequence[int]) -> int:
    """Number of maximal T admitting a bijection ι: [n] → T with ι(i) ∈ S_i."""
    if len(sets) != ground.n:
        raise InputError(f"expected {ground.n} colored sets, got {len(sets)}")
    for s in sets:
        if not s or not ground.is_colored(s):
            raise InputError("transversal_count needs nonempty colored sets")
    union = 0
    for s in sets:
        union |= s
    per_block = [[1 << k for k in bits(union & bm)] for bm in ground.block_masks]
    return sum(has_sdr(sets, sum(t)) for t in product(*per_block))


def underlying(ground: GroundSet, mask: int) -> frozenset[int]:
    """Indices (0-based) of the blocks that ``mask`` meets."""
    return frozenset(ground.block_of[k] for k in bits(mask))
