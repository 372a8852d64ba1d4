"""Atoms of the outcome simplex, atom sets, and integer formal sums.

An atom is an outcome subset with at least two members, keyed by its bitmask.
:class:`AtomSet` is a dense boolean vector indexed by bitmask (length 2^N);
entries at non-atom indices (the empty set and singletons) are always False.
:class:`FormalSum` is a sparse ``{mask: int}`` mapping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import SpaceMismatchError
from .space import OutcomeSpace


@lru_cache(maxsize=32)
def popcounts(n: int) -> np.ndarray:
    """Popcount of every mask in ``range(2**n)`` as uint8."""
    pc = np.zeros(1 << n, dtype=np.uint8)
    for i in range(n):
        pc[1 << i: 1 << (i + 1)] = pc[: 1 << i] + 1
    pc.flags.writeable = False
    return pc


@lru_cache(maxsize=32)
def atom_indicator(n: int) -> np.ndarray:
    ind = popcounts(n) >= 2
    ind.flags.writeable = False
    return ind


def num_atoms(n: int) -> int:
    return (1 << n) - n - 1


@dataclass(frozen=True, order=True)
class Atom:
    mask: int

    def __post_init__(self):
        if self.mask.bit_count() < 2:
            raise ValueError("an atom needs at least two outcomes")

    @property
    def degree(self) -> int:
        return self.mask.bit_count()

    def members(self) -> list[int]:
        return [i for i in range(self.mask.bit_length()) if self.mask >> i & 1]


def enumerate_atoms(space: OutcomeSpace) -> list[Atom]:
    """All 2^N - N - 1 atoms in increasing bitmask order."""
    return [Atom(int(m)) for m in np.flatnonzero(atom_indicator(space.n))]


def _check(a, b) -> None:
    if a.space != b.space:
        raise SpaceMismatchError("operands belong to different outcome spaces")


class AtomSet:
    """Immutable set of atoms of one space, stored as a bitset over masks."""

    __slots__ = ("space", "bits")

    def __init__(self, space: OutcomeSpace, bits: np.ndarray):
        bits = np.array(bits, dtype=bool)
        if bits.shape != (1 << space.n,):
            raise ValueError("bitset length must be 2^N")
        if np.any(bits & ~atom_indicator(space.n)):
            raise ValueError("atom sets may only contain subsets of size >= 2")
        bits.flags.writeable = False
        self.space = space
        self.bits = bits

    @classmethod
    def empty(cls, space: OutcomeSpace) -> "AtomSet":
        return cls(space, np.zeros(1 << space.n, dtype=bool))

    @classmethod
    def full(cls, space: OutcomeSpace) -> "AtomSet":
        return cls(space, atom_indicator(space.n).copy())

    @classmethod
    def from_masks(cls, space: OutcomeSpace, masks: Iterable[int]) -> "AtomSet":
        bits = np.zeros(1 << space.n, dtype=bool)
        idx = np.fromiter((int(m) for m in masks), dtype=np.int64)
        if idx.size:
            bits[idx] = True
        return cls(space, bits)

    @classmethod
    def from_labels(cls, space: OutcomeSpace, atoms: Iterable[Iterable[str]]) -> "AtomSet":
        return cls.from_masks(space, (space.mask_of(a) for a in atoms))

    def masks(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def __iter__(self) -> Iterator[int]:
        return (int(m) for m in self.masks())

    def __len__(self):
        return int(np.count_nonzero(self.bits))

    def __bool__(self):
        return bool(self.bits.any())

    def __contains__(self, mask) -> bool:
        mask = mask.mask if isinstance(mask, Atom) else int(mask)
        return 0 <= mask < self.bits.size and bool(self.bits[mask])

    def __eq__(self, other):
        if not isinstance(other, AtomSet):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.bits, other.bits)

    __hash__ = None

    def __or__(self, other: "AtomSet") -> "AtomSet":
        _check(self, other)
        return AtomSet(self.space, self.bits | other.bits)

    def __and__(self, other: "AtomSet") -> "AtomSet":
        _check(self, other)
        return AtomSet(self.space, self.bits & other.bits)

    def __sub__(self, other: "AtomSet") -> "AtomSet":
        _check(self, other)
        return AtomSet(self.space, self.bits & ~other.bits)

    def complement(self) -> "AtomSet":
        return AtomSet(self.space, atom_indicator(self.space.n) & ~self.bits)

    def issubset(self, other: "AtomSet") -> bool:
        _check(self, other)
        return not np.any(self.bits & ~other.bits)

    def render(self) -> list[str]:
        """Atoms as label strings, ordered by (degree, mask)."""
        ms = sorted(self, key=lambda m: (m.bit_count(), m))
        return [self.space.render(m) for m in ms]

    def __repr__(self):
        return "AtomSet{" + ", ".join(self.render()) + "}"


def atomset_algebra(op: str, a: AtomSet, b: AtomSet) -> AtomSet:
    """Apply ``union``, ``intersection`` or ``difference`` to two atom sets."""
    if op == "union":
        return a | b
    if op == "intersection":
        return a & b
    if op == "difference":
        return a - b
    raise ValueError(f"unknown set operation {op!r}")


@dataclass(frozen=True)
class FormalSum:
    """Integer combination of atoms; zero coefficients are never stored."""

    space: OutcomeSpace
    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            m, c = int(m), int(c)
            if m.bit_count() < 2 or m >> self.space.n:
                raise ValueError(f"mask {m} is not an atom of this space")
            if c:
                clean[m] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_set(cls, s: AtomSet, coeff: int = 1) -> "FormalSum":
        return cls(s.space, {m: coeff for m in s})

    def support(self) -> AtomSet:
        return AtomSet.from_masks(self.space, self.coeffs)

    def to_set(self) -> AtomSet:
        """Inverse of :meth:`from_set`; requires every coefficient to be 1."""
        if any(c != 1 for c in self.coeffs.values()):
            raise ValueError("formal sum is not an indicator of a set")
        return self.support()

    def __getitem__(self, mask: int) -> int:
        return self.coeffs.get(int(mask), 0)

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return formal_combine(self, other, 1, 1)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return formal_combine(self, other, 1, -1)

    def __neg__(self) -> "FormalSum":
        return FormalSum(self.space, {m: -c for m, c in self.coeffs.items()})

    def __mul__(self, k: int) -> "FormalSum":
        return FormalSum(self.space, {m: k * c for m, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.space == other.space and self.coeffs == other.coeffs

    __hash__ = None

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs, key=lambda m: (m.bit_count(), m)):
            c = self.coeffs[m]
            term = self.space.render(m)
            if "," in term:
                term = "(" + term + ")"
            mag = abs(c)
            sep = "*" if term[0].isdigit() else ""
            body = term if mag == 1 else f"{mag}{sep}{term}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


def formal_combine(a: FormalSum, b: FormalSum, ca: int, cb: int) -> FormalSum:
    """Coefficient-wise ``ca*a + cb*b``."""
    _check(a, b)
    out = {m: ca * c for m, c in a.coeffs.items()}
    for m, c in b.coeffs.items():
        out[m] = out.get(m, 0) + cb * c
    return FormalSum(a.space, out)
