"""Canonical example systems and the degree-n upper-set discriminator."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .atoms import AtomSet, popcounts
from .errors import ArityError
from .measure import measure_atom_set
from .quantities import InfoSystem
from .space import new_space, partition_from_labels


@dataclass(frozen=True, eq=False)
class CanonicalSystem:
    name: str
    system: InfoSystem


def _bits(v: int, width: int) -> str:
    return format(v, f"0{width}b")


def _from_sources(n_bits: int, f: Callable[..., tuple[int, ...]], names: Sequence[str],
                  width: int) -> InfoSystem:
    """Uniform independent source bits pushed through ``f``.

    ``f`` maps a tuple of source bits to one value per variable; each joint
    outcome is labelled by the concatenated values.  Only support points
    become outcomes, and equal joint values are merged.
    """
    weights: dict[tuple[int, ...], Fraction] = {}
    for src in product((0, 1), repeat=n_bits):
        vals = f(*src)
        weights[vals] = weights.get(vals, Fraction(0)) + Fraction(1, 2 ** n_bits)
    keys = sorted(weights)
    labels = ["".join(_bits(v, width) for v in k) for k in keys]
    space = new_space(labels, [float(weights[k]) for k in keys])
    variables = {nm: partition_from_labels(space, [k[j] for k in keys])
                 for j, nm in enumerate(names)}
    return InfoSystem(space, variables)


def _dyadic() -> InfoSystem:
    return _from_sources(3, lambda a, b, c: (2 * a + b, 2 * b + c, 2 * c + a), "XYZ", 2)


def _triadic() -> InfoSystem:
    return _from_sources(3, lambda s, u, v: (2 * s + u, 2 * s + v, 2 * s + (u ^ v)), "XYZ", 2)


def _xor() -> InfoSystem:
    return _from_sources(2, lambda x, y: (x, y, x ^ y), "XYZ", 1)


def _redundant_pair() -> InfoSystem:
    space = new_space(["00", "11"], [0.5, 0.5])
    ident = partition_from_labels(space, [0, 1])
    return InfoSystem(space, {"X": ident, "Y": ident})


_BUILDERS = {
    "dyadic": _dyadic,
    "triadic": _triadic,
    "xor": _xor,
    "redundant_pair": _redundant_pair,
}

CANONICAL_NAMES = tuple(_BUILDERS)


def build_canonical_system(name: str) -> CanonicalSystem:
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown system {name!r}; choose from {', '.join(_BUILDERS)}") from None
    return CanonicalSystem(name, build())


def upper_set(c: AtomSet, n: int) -> AtomSet:
    """Atoms of ``c`` containing some degree-``n`` atom that is also in ``c``."""
    if n < 2:
        raise ValueError(f"degree must be >= 2, got {n}")
    size = c.space.n
    # mark the generators, then close upward under supersets
    up = c.bits & (popcounts(size) == n)
    up = up.copy()
    for i in range(size):
        view = up.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return AtomSet(c.space, up & c.bits)


def discriminate(system: InfoSystem, vars: Sequence[str], base=2) -> float:
    """Measure of the degree-2 upper set of the variables' shared content."""
    if len(vars) < 2:
        raise ArityError(f"discriminate takes >= 2 variables, got {len(vars)}")
    shared = system.content(vars[0])
    for v in vars[1:]:
        shared = shared & system.content(v)
    return measure_atom_set(system.table(base), upper_set(shared, 2))


__all__ = ["CANONICAL_NAMES", "CanonicalSystem", "build_canonical_system",
           "discriminate", "upper_set"]
