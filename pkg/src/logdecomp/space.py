"""Outcome spaces and partitions (random variables) on them.

Outcomes are indexed ``0..N-1`` in construction order and every subset of
outcomes is encoded as an integer bitmask over those indices.  Partitions are
stored as a canonical tuple of block bitmasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DuplicateLabelError,
    LengthMismatchError,
    MissingOutcomeError,
    NegativeWeightError,
    OverlapError,
    PartitionError,
    SpaceMismatchError,
    SpaceTooLargeError,
    UnknownLabelError,
)

DEFAULT_MAX_OUTCOMES = 24


@dataclass(frozen=True)
class OutcomeSpace:
    """A finite labelled outcome set with a nonnegative weight per outcome.

    Weights are not required to sum to one.  Use :func:`new_space` to build
    one; the constructor performs the same validation.
    """

    labels: tuple[str, ...]
    probs: tuple[float, ...]
    max_outcomes: int = DEFAULT_MAX_OUTCOMES

    def __post_init__(self):
        if len(self.labels) != len(self.probs):
            raise LengthMismatchError(
                f"{len(self.labels)} labels but {len(self.probs)} weights")
        seen = set()
        for lab in self.labels:
            if lab in seen:
                raise DuplicateLabelError(f"duplicate outcome label {lab!r}")
            seen.add(lab)
        for lab, p in zip(self.labels, self.probs):
            if not (p >= 0) or math.isinf(p):
                raise NegativeWeightError(
                    f"weight of outcome {lab!r} must be finite and >= 0, got {p}")
        if len(self.labels) > self.max_outcomes:
            raise SpaceTooLargeError(
                f"{len(self.labels)} outcomes exceeds the cap of {self.max_outcomes} "
                f"(the atom space has 2^N - N - 1 elements)")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def total(self) -> float:
        return math.fsum(self.probs)

    @cached_property
    def weights(self) -> np.ndarray:
        arr = np.array(self.probs, dtype=float)
        arr.flags.writeable = False
        return arr

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabelError(f"unknown outcome label {label!r}") from None

    def weight(self, label: str) -> float:
        return self.probs[self.index(label)]

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def members(self, mask: int) -> list[int]:
        return [i for i in range(self.n) if mask >> i & 1]

    def labels_of(self, mask: int) -> list[str]:
        return [self.labels[i] for i in self.members(mask)]

    def mask_weight(self, mask: int) -> float:
        return math.fsum(self.probs[i] for i in self.members(mask))

    def render(self, mask: int) -> str:
        """Canonical text for an outcome subset: member labels in index order,
        comma separated when any label is longer than one character."""
        labs = self.labels_of(mask)
        sep = "" if all(len(lab) == 1 for lab in self.labels) else ","
        return sep.join(labs)

    def normalized(self) -> "OutcomeSpace":
        t = self.total
        if t <= 0:
            raise NegativeWeightError("cannot normalize a space of total weight 0")
        return OutcomeSpace(self.labels, tuple(p / t for p in self.probs),
                            self.max_outcomes)


def new_space(labels: Sequence[str], probs: Sequence[float], *,
              max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> OutcomeSpace:
    """Build a validated, immutable :class:`OutcomeSpace`."""
    return OutcomeSpace(tuple(str(lab) for lab in labels),
                        tuple(float(p) for p in probs), max_outcomes)


def _canonical(blocks: Iterable[int]) -> tuple[int, ...]:
    # sorted by smallest member == sorted by lowest set bit
    return tuple(sorted(blocks, key=lambda b: b & -b))


@dataclass(frozen=True)
class Partition:
    """A random variable: disjoint nonempty blocks covering the outcome set.

    ``blocks`` holds bitmasks in canonical order (by smallest member), so two
    partitions are equal iff they are the same set of blocks.
    """

    space: OutcomeSpace
    blocks: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for b in self.blocks:
            if b == 0:
                raise PartitionError("empty block")
            if b & seen:
                raise OverlapError(
                    "blocks overlap on outcomes "
                    + ", ".join(self.space.labels_of(b & seen)))
            seen |= b
        if seen != self.space.full_mask:
            missing = self.space.full_mask & ~seen
            if seen & ~self.space.full_mask:
                raise PartitionError("block refers to an outcome index outside the space")
            raise MissingOutcomeError(
                "outcomes not covered by any block: "
                + ", ".join(self.space.labels_of(missing)))
        object.__setattr__(self, "blocks", _canonical(self.blocks))

    def __len__(self):
        return len(self.blocks)

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        """Block index of every outcome."""
        out = [0] * self.space.n
        for j, b in enumerate(self.blocks):
            for i in self.space.members(b):
                out[i] = j
        return tuple(out)

    def block_weights(self) -> list[float]:
        return [self.space.mask_weight(b) for b in self.blocks]

    def block_labels(self) -> list[list[str]]:
        return [self.space.labels_of(b) for b in self.blocks]

    def sort_key(self) -> tuple:
        """Deterministic order: fewest blocks, then lexicographic member lists."""
        return (len(self.blocks),
                tuple(tuple(self.space.members(b)) for b in self.blocks))

    def refines(self, other: "Partition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        _check_same(self, other)
        return all(any(b & ~c == 0 for c in other.blocks) for b in self.blocks)

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(bl) + "}" for bl in self.block_labels()) + "}"


def _check_same(*parts: Partition) -> None:
    first = parts[0].space
    for p in parts[1:]:
        if p.space != first:
            raise SpaceMismatchError("partitions belong to different outcome spaces")


def partition_from_blocks(space: OutcomeSpace,
                          blocks: Iterable[Iterable[str]]) -> Partition:
    """Build a partition from blocks given as collections of outcome labels."""
    masks = []
    for block in blocks:
        block = list(block)
        m = 0
        for lab in block:
            bit = 1 << space.index(lab)
            if m & bit:
                raise OverlapError(f"outcome {lab!r} repeated within a block")
            m |= bit
        masks.append(m)
    return Partition(space, tuple(masks))


def partition_from_masks(space: OutcomeSpace, masks: Iterable[int]) -> Partition:
    return Partition(space, tuple(masks))


def partition_from_labels(space: OutcomeSpace, value_of: Sequence) -> Partition:
    """Partition grouping outcomes by a per-outcome value (e.g. a symbol)."""
    groups: dict = {}
    for i, v in enumerate(value_of):
        groups[v] = groups.get(v, 0) | (1 << i)
    return Partition(space, tuple(groups.values()))


def trivial_partition(space: OutcomeSpace) -> Partition:
    if space.n == 0:
        return Partition(space, ())
    return Partition(space, (space.full_mask,))


def singleton_partition(space: OutcomeSpace) -> Partition:
    return Partition(space, tuple(1 << i for i in range(space.n)))


def common_refinement(p: Partition, q: Partition) -> Partition:
    """Join in the refinement order: all nonempty pairwise block intersections."""
    _check_same(p, q)
    return Partition(p.space, tuple(a & b for a in p.blocks for b in q.blocks if a & b))


def joint(partitions: Sequence[Partition]) -> Partition:
    """Common refinement of any number of partitions (the joint variable)."""
    if not partitions:
        raise ValueError("need at least one partition")
    out = partitions[0]
    for p in partitions[1:]:
        out = common_refinement(out, p)
    return out


def common_coarsening(partitions: Sequence[Partition]) -> Partition:
    """Finest partition coarser than every input.

    Outcomes are linked when some input puts them in the same block; the
    result's blocks are the connected components of that relation.
    """
    if not partitions:
        raise ValueError("common_coarsening needs a nonempty list of partitions")
    _check_same(*partitions)
    space = partitions[0].space
    parent = list(range(space.n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for p in partitions:
        for b in p.blocks:
            members = space.members(b)
            root = find(members[0])
            for i in members[1:]:
                r = find(i)
                if r != root:
                    parent[r] = root
    return partition_from_labels(space, [find(i) for i in range(space.n)])


def iter_partitions(space: OutcomeSpace) -> Iterator[Partition]:
    """All partitions of the outcome set, in restricted-growth-string order."""
    n = space.n
    if n == 0:
        yield Partition(space, ())
        return
    for rgs in restricted_growth_strings(n):
        blocks = [0] * (max(rgs) + 1)
        for i, a in enumerate(rgs):
            blocks[a] |= 1 << i
        yield Partition(space, tuple(blocks))


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n`` (a[0] = 0, a[i] <= 1 + max a[:i])."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    mx = [0] * n  # mx[i] = max(a[:i+1])

    def rec(i):
        if i == n:
            yield tuple(a)
            return
        for v in range(mx[i - 1] + 2):
            a[i] = v
            mx[i] = max(mx[i - 1], v)
            yield from rec(i + 1)

    yield from rec(1)


def bell(n: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
