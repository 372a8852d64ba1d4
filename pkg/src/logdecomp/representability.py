"""Representable atom sets and common information.

A set of atoms is representable when it is the content of some partition.
Gacs-Korner common information is the measure of the largest representable
subset of the variables' shared content (equivalently, the entropy of their
finest common coarsening).  Wyner common information is found by exhaustive
search over partitions of the outcome set.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .atoms import AtomSet
from .errors import ArityError, CapExceededError, SpaceMismatchError
from .measure import measure_atom_set, mu_table, total_loss
from .quantities import InfoSystem, content
from .space import (
    OutcomeSpace,
    Partition,
    common_coarsening,
    common_refinement,
    iter_partitions,
    joint,
    partition_from_labels,
    restricted_growth_strings,
    trivial_partition,
)

log = logging.getLogger(__name__)

MAX_REP_OUTCOMES = 10
MAX_WYNER_OUTCOMES = 8
CI_TOL = 1e-9
_TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CommonInfoResult:
    partition: Partition
    value: float
    witness_content: AtomSet


def is_representable(space: OutcomeSpace, s: AtomSet) -> Optional[Partition]:
    """Return the partition whose content is exactly ``s``, or None.

    Outcomes joined by a pair atom missing from ``s`` must share a block; the
    closure of that relation is the only candidate, which is then verified.
    """
    if s.space != space:
        raise SpaceMismatchError("atom set belongs to a different space")
    n = space.n
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(n), 2):
        if (1 << i | 1 << j) not in s:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri
    candidate = partition_from_labels(space, [find(i) for i in range(n)])
    return candidate if content(space, candidate) == s else None


def max_representable_subset(space: OutcomeSpace, s: AtomSet, *,
                             max_outcomes: int = MAX_REP_OUTCOMES,
                             base=2) -> CommonInfoResult:
    """Largest representable subset of ``s``, by exhaustive partition search.

    Raises :class:`CapExceededError` above ``max_outcomes`` outcomes (the
    search visits Bell(N) partitions).
    """
    if s.space != space:
        raise SpaceMismatchError("atom set belongs to a different space")
    if space.n > max_outcomes:
        raise CapExceededError(
            f"exhaustive partition search is capped at {max_outcomes} outcomes, got {space.n}")
    outside = [int(m) for m in s.complement()]
    best = trivial_partition(space)
    best_size = 0
    for p in iter_partitions(space):
        # content(p) <= s  iff  every atom outside s lies within one block
        if all(any(m & ~b == 0 for b in p.blocks) for m in outside):
            size = len(p.blocks)
            if size > best_size:
                best, best_size = p, size
    witness = content(space, best)
    return CommonInfoResult(best, measure_atom_set(mu_table(space, base), witness), witness)


def _check_vars(system: InfoSystem, vars: Sequence[str]) -> list[Partition]:
    if len(vars) < 2:
        raise ArityError(f"common information needs >= 2 variables, got {len(vars)}")
    return [system.var(v) for v in vars]


def gacs_korner(system: InfoSystem, vars: Sequence[str], base=2) -> CommonInfoResult:
    """Gacs-Korner common information via the meet of the partitions."""
    parts = _check_vars(system, vars)
    meet = common_coarsening(parts)
    witness = content(system.space, meet)
    return CommonInfoResult(meet, measure_atom_set(system.table(base), witness), witness)


def gacs_korner_exhaustive(system: InfoSystem, vars: Sequence[str], base=2,
                           max_outcomes: int = MAX_REP_OUTCOMES) -> CommonInfoResult:
    """Same quantity as :func:`gacs_korner`, found as Rep of the shared content."""
    _check_vars(system, vars)
    shared = system.content(vars[0])
    for v in vars[1:]:
        shared = shared & system.content(v)
    return max_representable_subset(system.space, shared, max_outcomes=max_outcomes, base=base)


def _symbols(parts: Sequence[Partition], n: int) -> list[tuple[int, ...]]:
    return [tuple(p.block_of[i] for p in parts) for i in range(n)]


def ci_residual(system: InfoSystem, vars: Sequence[str], w: Partition) -> float:
    """Largest ``|P(x_1..x_n | B) - prod_i P(x_i | B)|`` over blocks B of ``w``
    with positive weight and all combinations of the variables' values."""
    if w.space != system.space:
        raise SpaceMismatchError("conditioning partition belongs to a different space")
    parts = [system.var(v) for v in vars]
    sym = _symbols(parts, system.space.n)
    probs = system.space.probs
    worst = 0.0
    for b in w.blocks:
        members = system.space.members(b)
        pb = math.fsum(probs[i] for i in members)
        if pb <= 0:
            continue
        jointp: dict = {}
        margs = [dict() for _ in parts]
        for i in members:
            q = probs[i] / pb
            jointp[sym[i]] = jointp.get(sym[i], 0.0) + q
            for k, s in enumerate(sym[i]):
                margs[k][s] = margs[k].get(s, 0.0) + q
        for combo in itertools.product(*(sorted(m) for m in margs)):
            prod = math.prod(margs[k][s] for k, s in enumerate(combo))
            worst = max(worst, abs(jointp.get(combo, 0.0) - prod))
    return worst


def is_conditionally_independent(system: InfoSystem, vars: Sequence[str],
                                 w: Partition, tol: float = CI_TOL) -> bool:
    return ci_residual(system, vars, w) <= tol


def _mutual_information_with(system: InfoSystem, jp: Partition, w: Partition, base) -> float:
    H = lambda p: total_loss(p.block_weights(), base)  # noqa: E731
    return H(jp) + H(w) - H(common_refinement(jp, w))


def _coarsenings(p: Partition):
    """All partitions whose blocks are unions of blocks of ``p``."""
    for rgs in restricted_growth_strings(len(p.blocks)):
        merged = [0] * (max(rgs) + 1) if rgs else []
        for b, a in zip(p.blocks, rgs):
            merged[a] |= b
        yield Partition(p.space, tuple(merged))


def wyner(system: InfoSystem, vars: Sequence[str], base=2, tol: float = CI_TOL,
          max_outcomes: int = MAX_WYNER_OUTCOMES, over: str = "outcomes") -> CommonInfoResult:
    """Wyner common information by brute force over partitions W.

    ``over="outcomes"`` searches every partition of the outcome set;
    ``over="joint"`` only those that are functions of the joint variable
    (W never separates outcomes the variables cannot tell apart).

    Among partitions rendering the variables conditionally independent, the
    one minimizing ``I(X_1..X_n; W)`` wins; values within 1e-12 of each other
    count as ties, resolved by fewest blocks and then by the lexicographic
    order of the blocks' member lists.
    """
    parts = _check_vars(system, vars)
    space = system.space
    jp = joint(parts)
    if over == "outcomes":
        if space.n > max_outcomes:
            raise CapExceededError(
                f"Wyner search is capped at {max_outcomes} outcomes, got {space.n}")
        candidates = iter_partitions(space)
    elif over == "joint":
        if len(jp.blocks) > max_outcomes:
            raise CapExceededError(
                f"Wyner search is capped at {max_outcomes} joint values, got {len(jp.blocks)}")
        candidates = _coarsenings(jp)
    else:
        raise ValueError(f"unknown search domain {over!r}")
    best = None
    for w in candidates:
        if not is_conditionally_independent(system, vars, w, tol):
            continue
        val = _mutual_information_with(system, jp, w, base)
        if best is None:
            best = (val, w)
            continue
        bval, bw = best
        if val < bval - _TIE_TOL or (abs(val - bval) <= _TIE_TOL and w.sort_key() < bw.sort_key()):
            best = (val, w)
    val, w = best  # the finest candidate always qualifies
    witness = content(space, w)
    gk = gacs_korner(system, vars, base).value
    if gk > val + 1e-9:
        log.warning("Gacs-Korner value %.12g exceeds Wyner value %.12g", gk, val)
    return CommonInfoResult(w, val, witness)
