"""Refinements of the outcome space and the operators that live on them.

A refinement splits each parent outcome into finitely many child outcomes
whose weights sum to the parent's.  It acts on partitions (re-expressing each
block in child outcomes), on formal sums (expanding every atom over nonempty
choices of children), and commutes with contents and restriction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .atoms import AtomSet, FormalSum
from .errors import OverlapError, RefinementError, SpaceMismatchError
from .measure import measure_atom_set, mu_table, total_loss
from .quantities import InfoSystem, content_of_blocks
from .space import OutcomeSpace, Partition, new_space

_REL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RefinementMap:
    """``children[i]`` lists the child-outcome indices of parent outcome ``i``."""

    parent: OutcomeSpace
    child: OutcomeSpace
    children: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.children) != self.parent.n:
            raise RefinementError("every parent outcome needs a list of children")
        owner = [-1] * self.child.n
        for i, kids in enumerate(self.children):
            if not kids:
                raise RefinementError(f"parent {self.parent.labels[i]!r} has no children")
            for c in kids:
                if owner[c] != -1:
                    raise RefinementError(
                        f"child {self.child.labels[c]!r} has two parents")
                owner[c] = i
            got = math.fsum(self.child.probs[c] for c in kids)
            want = self.parent.probs[i]
            if abs(got - want) > _REL_TOL * max(abs(want), 1.0):
                raise RefinementError(
                    f"children of {self.parent.labels[i]!r} weigh {got}, parent weighs {want}")
        if -1 in owner:
            raise RefinementError(
                f"child {self.child.labels[owner.index(-1)]!r} has no parent")
        object.__setattr__(self, "_owner", tuple(owner))

    def parent_of(self, c: int) -> int:
        return self._owner[c]

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in self.parent.members(mask):
            for c in self.children[i]:
                out |= 1 << c
        return out

    def map_blocks(self, blocks: Iterable[int]) -> list[int]:
        return [self.image_mask(b) for b in blocks]

    def map_partition(self, p: Partition) -> Partition:
        """Re-express a parent partition in child outcomes."""
        if p.space != self.parent:
            raise SpaceMismatchError("partition is not on the parent space")
        return Partition(self.child, tuple(self.map_blocks(p.blocks)))

    def map_formal_sum(self, z: FormalSum, order="first") -> FormalSum:
        """Image of a formal sum, built from successive binary splits.

        Each split ``g -> g1, g2`` sends an atom ``S g`` to
        ``S g1 + S g2 + S g1 g2``.  ``order`` picks how a multi-way split is
        decomposed: ``"first"`` peels off the first child each time,
        ``"last"`` the last, and a :class:`random.Random` chooses random
        bipartitions.  The result does not depend on the choice.
        """
        if z.space != self.parent:
            raise SpaceMismatchError("formal sum is not on the parent space")
        # terms are keyed by the set of (disjoint) child groups they contain
        terms: dict[frozenset, int] = {}
        for m, c in z.coeffs.items():
            key = frozenset(self.image_mask(1 << i) for i in self.parent.members(m))
            terms[key] = terms.get(key, 0) + c
        for kids in self.children:
            for g, g1, g2 in _binary_splits(kids, order):
                nxt: dict[frozenset, int] = {}
                for key, c in terms.items():
                    if g in key:
                        rest = key - {g}
                        for rep in ((g1,), (g2,), (g1, g2)):
                            k2 = rest | frozenset(rep)
                            nxt[k2] = nxt.get(k2, 0) + c
                    else:
                        nxt[key] = nxt.get(key, 0) + c
                terms = nxt
        out: dict[int, int] = {}
        for key, c in terms.items():
            m = 0
            for g in key:
                m |= g
            out[m] = out.get(m, 0) + c
        return FormalSum(self.child, out)

    def psi(self, s: AtomSet) -> AtomSet:
        """Set-level image: support of the image of the indicator sum."""
        return self.map_formal_sum(FormalSum.from_set(s)).support()


def _binary_splits(kids: Sequence[int], order):
    """Yield (group, part1, part2) masks decomposing ``kids`` into singletons."""
    stack = [list(kids)]
    while stack:
        grp = stack.pop()
        if len(grp) < 2:
            continue
        if order == "first":
            a, b = grp[:1], grp[1:]
        elif order == "last":
            a, b = grp[:-1], grp[-1:]
        elif isinstance(order, random.Random):
            shuffled = grp[:]
            order.shuffle(shuffled)
            cut = order.randint(1, len(grp) - 1)
            a, b = shuffled[:cut], shuffled[cut:]
        else:
            raise ValueError(f"unknown split order {order!r}")
        yield _mask(grp), _mask(a), _mask(b)
        stack.extend([a, b])


def _mask(idx: Iterable[int]) -> int:
    m = 0
    for i in idx:
        m |= 1 << i
    return m


SplitSpec = Union[Mapping[str, Sequence], Sequence]


def refine_space(space: OutcomeSpace, split: SplitSpec) -> RefinementMap:
    """Build a refinement from ``{parent label: [(child label, weight), ...]}``.

    A list of ``(parent label, children)`` pairs works too.  Parents that are
    not mentioned keep a single child with their own label and weight.
    """
    items = split.items() if isinstance(split, Mapping) else split
    plan: dict[int, list] = {}
    for parent_label, kids in items:
        i = space.index(parent_label)
        if i in plan:
            raise RefinementError(f"parent {parent_label!r} split twice")
        norm = []
        for kid in kids:
            if isinstance(kid, Mapping):
                norm.append((str(kid["label"]), float(kid["p"])))
            else:
                lab, w = kid
                norm.append((str(lab), float(w)))
        plan[i] = norm
    labels, probs, children = [], [], []
    for i in range(space.n):
        kids = plan.get(i, [(space.labels[i], space.probs[i])])
        idx = []
        for lab, w in kids:
            idx.append(len(labels))
            labels.append(lab)
            probs.append(w)
        children.append(tuple(idx))
    child = new_space(labels, probs, max_outcomes=space.max_outcomes)
    return RefinementMap(space, child, tuple(children))


def identity_map(space: OutcomeSpace) -> RefinementMap:
    return RefinementMap(space, space, tuple((i,) for i in range(space.n)))


def compose(first: RefinementMap, second: RefinementMap) -> RefinementMap:
    """``second`` after ``first``; grandchildren are concatenated per parent."""
    if first.child != second.parent:
        raise SpaceMismatchError("maps do not chain")
    kids = tuple(tuple(g for c in cs for g in second.children[c]) for cs in first.children)
    return RefinementMap(first.parent, second.child, kids)


def _as_mask(space: OutcomeSpace, s) -> int:
    if isinstance(s, int):
        if s >> space.n:
            raise SpaceMismatchError("subset mask refers to outcomes outside the space")
        return s
    return space.mask_of(s)


def restrict(z, s):
    """Drop every atom not contained in the outcome subset ``s``.

    ``z`` is an :class:`AtomSet` or :class:`FormalSum`; ``s`` a mask or labels.
    """
    m = _as_mask(z.space, s)
    if isinstance(z, FormalSum):
        return FormalSum(z.space, {b: c for b, c in z.coeffs.items() if b & ~m == 0})
    idx = np.arange(1 << z.space.n)
    return AtomSet(z.space, z.bits & ((idx & ~m) == 0))


def restrict_blocks(p: Partition, s) -> list[int]:
    """The partition restricted to ``s``: nonempty block intersections."""
    m = _as_mask(p.space, s)
    return [b & m for b in p.blocks if b & m]


def equivalent_under_refinement(s1: AtomSet, map1: RefinementMap | None,
                                s2: AtomSet, map2: RefinementMap | None) -> bool:
    """Whether two atom sets have equal images in a shared refinement.

    ``map1``/``map2`` send each set's space into the same child space; pass
    None for a set already living on that space.
    """
    if map1 is None and map2 is None:
        if s1.space != s2.space:
            raise RefinementError("no common refinement supplied")
        return s1 == s2
    target = (map1 or map2).child
    for s, m in ((s1, map1), (s2, map2)):
        if m is None:
            if s.space != target:
                raise RefinementError("no common refinement supplied")
        else:
            if m.child != target:
                raise RefinementError("maps do not share a child space")
            if s.space != m.parent:
                raise SpaceMismatchError("atom set is not on its map's parent space")
    img1 = map1.psi(s1) if map1 else s1
    img2 = map2.psi(s2) if map2 else s2
    return img1 == img2


def star(space: OutcomeSpace, parts: Sequence) -> AtomSet:
    """Atoms inside the union of ``parts`` that meet at least two of them.

    For two parts these are the atoms lying across the boundary between them.
    ``parts`` are masks or label collections and must be pairwise disjoint.
    """
    masks = [_as_mask(space, p) for p in parts]
    if len(masks) < 2:
        raise ValueError("star needs at least two parts")
    seen = 0
    for m in masks:
        if m & seen:
            raise OverlapError("parts overlap")
        seen |= m
    return content_of_blocks(space, masks)


def micro_macro_split(system: InfoSystem, region: AtomSet, subsystems: Partition,
                      base=2) -> list[tuple[str, AtomSet, float]]:
    """Split a region into atoms local to each subsystem plus atoms across them.

    Returns ``(label, atoms, measure)`` rows: one ``inside:<block>`` row per
    block of ``subsystems`` and, when there are at least two blocks, a final
    ``across`` row.  The rows are disjoint and their union is ``region``.
    """
    space = system.space
    if subsystems.space != space or region.space != space:
        raise SpaceMismatchError("region and subsystems must share the system's space")
    table = mu_table(space, base)
    rows = []
    for b in subsystems.blocks:
        part = restrict(region, b)
        rows.append((f"inside:{space.render(b)}", part, measure_atom_set(table, part)))
    if len(subsystems.blocks) >= 2:
        part = region & star(space, subsystems.blocks)
        rows.append(("across", part, measure_atom_set(table, part)))
    return rows


_KL_TABLE_LIMIT = 16


def _measure_full_content(weights: Sequence[float], base) -> float:
    # sum of mu over every atom of the space; beyond the table limit use the
    # zeta identity sum_{b <= Omega} mu(b) = L(Omega)
    if len(weights) <= _KL_TABLE_LIMIT:
        space = new_space([str(i) for i in range(len(weights))], weights)
        return measure_atom_set(mu_table(space, base), AtomSet.full(space))
    return total_loss(weights, base)


def kl_via_measure(x_weights: Sequence[float], n_bins: int, base=2) -> float:
    """KL divergence from a binned distribution to the uniform one on the
    same bins, as the difference of the measures of their full contents."""
    w = [float(p) for p in x_weights]
    if n_bins != len(w):
        raise ValueError(f"n_bins={n_bins} but {len(w)} weights given")
    if abs(math.fsum(w) - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {math.fsum(w)}")
    return _measure_full_content([1.0 / n_bins] * n_bins, base) - _measure_full_content(w, base)


def kl_direct(x_weights: Sequence[float], base=2) -> float:
    """``sum_i p_i log(p_i n)``."""
    n = len(x_weights)
    lb = 1.0 if base in ("e", None) else math.log(float(base))
    return math.fsum(p * math.log(p * n) for p in x_weights if p > 0) / lb


__all__ = [
    "RefinementMap", "compose", "equivalent_under_refinement", "identity_map",
    "kl_direct", "kl_via_measure", "micro_macro_split", "refine_space", "restrict",
    "restrict_blocks", "star",
]
