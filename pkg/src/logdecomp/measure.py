"""Total loss, interior loss, and the signed measure on atoms.

The total loss of a collection of weights is the entropy lost by merging
them into one event::

    L(p_1..p_n) = sum_i p_i log(P / p_i),   P = sum_i p_i

and the interior loss ``mu`` is its Moebius inversion over the subset
lattice.  All functions accept arbitrary nonnegative weights; nothing is
renormalized.  Values are in bits unless ``base`` says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .atoms import AtomSet, FormalSum, atom_indicator, popcounts
from .errors import NegativeWeightError, SpaceMismatchError
from .space import OutcomeSpace, Partition


def _ln_base(base) -> float:
    if base in ("e", None):
        return 1.0
    base = float(base)
    if base <= 0 or base == 1:
        raise ValueError(f"invalid logarithm base {base}")
    return math.log(base)


def _check_weights(weights: Sequence[float]) -> list[float]:
    out = [float(p) for p in weights]
    for p in out:
        if not (p >= 0) or math.isinf(p):
            raise NegativeWeightError(f"weights must be finite and >= 0, got {p}")
    return out


def total_loss(weights: Sequence[float], base=2) -> float:
    """Entropy lost when events with these weights are merged into one.

    Equals the Shannon entropy when the weights sum to 1; homogeneous of
    order 1 in general.  Zero weights contribute nothing.
    """
    w = _check_weights(weights)
    P = math.fsum(w)
    if P == 0:
        return 0.0
    terms = []
    for i, p in enumerate(w):
        if p <= 0:
            continue
        if 2 * p > P:
            # P/p is close to 1 here; log1p of the exact remainder keeps precision
            rest = math.fsum(w[:i] + w[i + 1:])
            terms.append(p * math.log1p(rest / p))
        else:
            terms.append(p * math.log(P / p))
    return math.fsum(terms) / _ln_base(base)


def shannon_entropy(weights: Sequence[float], base=2) -> float:
    """Plain ``sum p log(1/p)``; no normalization."""
    w = _check_weights(weights)
    return math.fsum(-p * math.log(p) for p in w if p > 0) / _ln_base(base)


def tsallis_loss(weights: Sequence[float], d: float, base="e") -> float:
    """Order-``d`` Tsallis loss ``P^d * H_d(p / P)``.

    ``H_d(q) = (1 - sum q_i^d) / (d - 1)``.  The result is divided by
    ``ln(base)``; with the default natural base that is the bare Tsallis
    form, and as ``d -> 1`` it tends to :func:`total_loss` in the same base.
    """
    if d <= 0:
        raise ValueError(f"Tsallis order must be > 0, got {d}")
    if d == 1:
        return total_loss(weights, base)
    w = _check_weights(weights)
    P = math.fsum(w)
    if P == 0:
        return 0.0
    return (P ** d - math.fsum(p ** d for p in w)) / ((d - 1) * _ln_base(base))


def _subset_alternating_sum(w: list[float], loss) -> float:
    n = len(w)
    terms = []
    for k in range(2, n + 1):
        sign = -1.0 if (n - k) % 2 else 1.0
        for sub in combinations(w, k):
            terms.append(sign * loss(sub))
    # subsets of size <= 1 have zero loss
    return math.fsum(terms)


def interior_loss(weights: Sequence[float], base=2) -> float:
    """Interior loss (the signed measure of one atom).

    Computed as ``sum_{S} (-1)^{n-|S|} L(S)`` over all subsets ``S`` of the
    arguments.  Returns exactly 0 for a single argument or when any weight is
    exactly 0.
    """
    w = _check_weights(weights)
    if len(w) <= 1 or any(p == 0 for p in w):
        return 0.0
    return _subset_alternating_sum(w, lambda s: total_loss(s, base))


def interior_loss_recursive(weights: Sequence[float], base=2) -> float:
    """Interior loss from the recursive definition ``mu(S) = L(S) - sum of
    mu over proper subsets``.  Exponential; kept as a cross-check."""
    w = _check_weights(weights)
    n = len(w)
    memo: dict[int, float] = {}
    for m in sorted(range(1 << n), key=int.bit_count):
        if m.bit_count() <= 1:
            memo[m] = 0.0
            continue
        sub = (m - 1) & m
        acc = []
        while sub:
            acc.append(memo[sub])
            sub = (sub - 1) & m
        memo[m] = total_loss([w[i] for i in range(n) if m >> i & 1], base) - math.fsum(acc)
    return memo[(1 << n) - 1] if n else 0.0


def tsallis_interior_loss(weights: Sequence[float], d: float, base="e") -> float:
    """:func:`interior_loss` with the Tsallis loss of order ``d`` substituted."""
    if d <= 0:
        raise ValueError(f"Tsallis order must be > 0, got {d}")
    w = _check_weights(weights)
    if len(w) <= 1 or any(p == 0 for p in w):
        return 0.0
    return _subset_alternating_sum(w, lambda s: tsallis_loss(s, d, base))


@dataclass(frozen=True, eq=False)
class MuTable:
    """Dense table of the signed measure of every atom of a space.

    ``values`` is indexed by outcome bitmask; non-atom entries hold 0.
    """

    space: OutcomeSpace
    values: np.ndarray
    base: object = 2

    def __getitem__(self, mask: int) -> float:
        return float(self.values[int(mask)])

    def atoms(self) -> np.ndarray:
        return np.flatnonzero(atom_indicator(self.space.n))

    def rows(self) -> list[tuple[int, float]]:
        """(mask, value) pairs sorted by (degree, mask)."""
        masks = self.atoms()
        order = np.lexsort((masks, popcounts(self.space.n)[masks]))
        return [(int(masks[i]), float(self.values[masks[i]])) for i in order]


def subset_sums(weights: np.ndarray) -> np.ndarray:
    """Sum of weights over every subset, indexed by bitmask."""
    n = len(weights)
    s = np.zeros(1 << n, dtype=float)
    for i in range(n):
        s[1 << i: 1 << (i + 1)] = s[: 1 << i] + weights[i]
    return s


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def moebius_inplace(v: np.ndarray, n: int) -> np.ndarray:
    """Subset-lattice Moebius transform: ``v[T] <- sum_{S<=T} (-1)^{|T-S|} v[S]``."""
    for i in range(n):
        view = v.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return v


def zeta_inplace(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`moebius_inplace`: ``v[T] <- sum_{S<=T} v[S]``."""
    for i in range(n):
        view = v.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return v


def subset_losses(space: OutcomeSpace, base=2) -> np.ndarray:
    """Total loss of every outcome subset, by bitmask, in O(N 2^N)."""
    w = space.weights
    n = space.n
    s = subset_sums(w)
    plogp = _xlogx(np.asarray(w, dtype=float))
    a = np.zeros(1 << n, dtype=float)
    for i in range(n):
        a[1 << i: 1 << (i + 1)] = a[: 1 << i] + plogp[i]
    # L(S) = P_S log P_S - sum_{i in S} p_i log p_i
    L = _xlogx(s)
    L -= a
    L /= _ln_base(base)
    return L


def _zero_support_mask(space: OutcomeSpace) -> int:
    return sum(1 << i for i, p in enumerate(space.probs) if p == 0)


@lru_cache(maxsize=8)
def mu_table(space: OutcomeSpace, base=2) -> MuTable:
    """Signed measure of every atom via a Moebius transform of subset losses.

    Cached per (space, base).  Atoms with a zero-weight member are set to
    exactly 0.
    """
    v = subset_losses(space, base)
    moebius_inplace(v, space.n)
    v[~atom_indicator(space.n)] = 0.0
    z = _zero_support_mask(space)
    if z:
        idx = np.arange(1 << space.n)
        v[(idx & z) != 0] = 0.0
    v.flags.writeable = False
    return MuTable(space, v, base)


def naive_mu_table(space: OutcomeSpace, base=2) -> MuTable:
    """O(3^N) reference: per-atom inclusion-exclusion over all submasks,
    with each subset loss evaluated directly from its member weights."""
    n = space.n
    L = [total_loss([space.probs[i] for i in range(n) if m >> i & 1], base)
         for m in range(1 << n)]
    v = np.zeros(1 << n, dtype=float)
    for b in range(1 << n):
        deg = b.bit_count()
        if deg < 2:
            continue
        if any(space.probs[i] == 0 for i in range(n) if b >> i & 1):
            continue
        terms = []
        sub = b
        while True:
            sign = -1.0 if (deg - sub.bit_count()) % 2 else 1.0
            terms.append(sign * L[sub])
            if sub == 0:
                break
            sub = (sub - 1) & b
        v[b] = math.fsum(terms)
    return MuTable(space, v, base)


def measure_atom_set(table: MuTable, s: AtomSet) -> float:
    """Sum of the table over the members of ``s``."""
    if table.space != s.space:
        raise SpaceMismatchError("atom set and table belong to different spaces")
    return math.fsum(table.values[s.bits].tolist())


def measure_formal_sum(table: MuTable, z: FormalSum) -> float:
    if table.space != z.space:
        raise SpaceMismatchError("formal sum and table belong to different spaces")
    return math.fsum(c * float(table.values[m]) for m, c in z.coeffs.items())


def entropy_partition_law(space: OutcomeSpace, p: Partition, base=2) -> float:
    """Entropy of a partition as ``L(Omega) - sum_i L(block_i)``; touches no atoms."""
    if p.space != space:
        raise SpaceMismatchError("partition belongs to a different space")
    whole = total_loss(space.probs, base)
    parts = [total_loss([space.probs[i] for i in space.members(b)], base) for b in p.blocks]
    return whole - math.fsum(parts)
