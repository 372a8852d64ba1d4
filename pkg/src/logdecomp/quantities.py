"""Variable contents and the information quantities measured on them.

The content of a variable is the set of atoms whose members fall in at least
two of its blocks.  Every region of an I-diagram becomes a set expression over
contents, and its measure is the corresponding information quantity.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .atoms import AtomSet, FormalSum, atom_indicator
from .errors import ArityError, SpaceMismatchError, UnknownVariableError
from .expressions import EntropyExpr, SetExpr, parse_entropy_expr, parse_set_expr
from .measure import measure_atom_set, measure_formal_sum, mu_table, total_loss
from .space import OutcomeSpace, Partition, joint

_OUTSIDE = 1 << 40


def content_of_blocks(space: OutcomeSpace, blocks: Sequence[int]) -> AtomSet:
    """Atoms inside the union of ``blocks`` that meet at least two of them.

    ``blocks`` need not cover the space; this is what makes contents of
    restricted partitions expressible on the same atom universe.
    """
    n = space.n
    tag = [_OUTSIDE] * n
    for j, b in enumerate(blocks):
        for i in space.members(b):
            tag[i] = 1 << j
    touched = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        touched[1 << i: 1 << (i + 1)] = touched[: 1 << i] | tag[i]
    inside = (touched & _OUTSIDE) == 0
    crossing = (touched & (touched - 1)) != 0
    return AtomSet(space, inside & crossing & atom_indicator(n))


def content(space: OutcomeSpace, x: Partition) -> AtomSet:
    """Content of a variable: atoms crossing at least one of its boundaries."""
    if x.space != space:
        raise SpaceMismatchError("partition belongs to a different space")
    return content_of_blocks(space, x.blocks)


class InfoSystem:
    """An outcome space with named random variables on it."""

    def __init__(self, space: OutcomeSpace, variables: Mapping[str, Partition]):
        for name, p in variables.items():
            if p.space != space:
                raise SpaceMismatchError(f"variable {name!r} is not defined on this space")
        self.space = space
        self.variables = dict(variables)
        self._contents: dict[str, AtomSet] = {}

    def __repr__(self):
        return f"InfoSystem(N={self.space.n}, variables={list(self.variables)})"

    def var(self, name: str) -> Partition:
        try:
            return self.variables[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def content(self, name: str) -> AtomSet:
        if name not in self._contents:
            self._contents[name] = content(self.space, self.var(name))
        return self._contents[name]

    def joint_content(self, names) -> AtomSet:
        out = AtomSet.empty(self.space)
        for nm in names:
            out = out | self.content(nm)
        return out

    def table(self, base=2):
        return mu_table(self.space, base)


def eval_region(system: InfoSystem, expr) -> AtomSet:
    """Evaluate a set expression over variable contents.

    ``expr`` is a :class:`SetExpr` or a string such as ``"X & Y - Z"``
    (``∩``/``&``, ``∪``/``|``, ``\\``/``-``, parentheses).
    """
    if isinstance(expr, str):
        expr = parse_set_expr(expr)
    if expr.op == "var":
        return system.content(expr.name)
    left = eval_region(system, expr.left)
    right = eval_region(system, expr.right)
    if expr.op == "&":
        return left & right
    if expr.op == "|":
        return left | right
    return left - right


QUANTITY_KINDS = ("entropy", "joint_entropy", "conditional_entropy",
                  "mutual_information", "co_information",
                  "conditional_mutual_information")

_ARITY = {
    "entropy": (1, 1),
    "joint_entropy": (2, None),
    "conditional_entropy": (2, 2),
    "mutual_information": (2, None),
    "co_information": (2, None),
    "conditional_mutual_information": (3, None),
}


def _check_arity(kind: str, vars: Sequence[str], table=_ARITY) -> None:
    if kind not in table:
        raise ValueError(f"unknown quantity kind {kind!r}")
    lo, hi = table[kind]
    if len(vars) < lo or (hi is not None and len(vars) > hi):
        want = str(lo) if hi == lo else f">= {lo}" if hi is None else f"{lo}..{hi}"
        raise ArityError(f"{kind} takes {want} variables, got {len(vars)}")


def region(system: InfoSystem, kind: str, vars: Sequence[str]) -> AtomSet:
    """The atom set whose measure is the named quantity.

    ``mutual_information`` with more than two names is ``I(X1; X2,...,Xk)``;
    ``conditional_mutual_information`` is ``I(X1; X2 | X3,...,Xk)``.
    """
    _check_arity(kind, vars)
    for nm in vars:
        system.var(nm)
    c = system.content
    if kind == "entropy":
        return c(vars[0])
    if kind == "joint_entropy":
        out = system.joint_content(vars)
        assert out == content(system.space, joint([system.var(v) for v in vars]))
        return out
    if kind == "conditional_entropy":
        return c(vars[0]) - c(vars[1])
    if kind == "mutual_information":
        return c(vars[0]) & system.joint_content(vars[1:])
    if kind == "co_information":
        out = c(vars[0])
        for nm in vars[1:]:
            out = out & c(nm)
        return out
    return (c(vars[0]) & c(vars[1])) - system.joint_content(vars[2:])


def quantity(system: InfoSystem, kind: str, vars: Sequence[str], base=2) -> float:
    """Measure of :func:`region` for this kind."""
    return measure_atom_set(system.table(base), region(system, kind, vars))


def joint_entropy_direct(system: InfoSystem, names, base=2) -> float:
    """Entropy of the joint variable from block weights alone (no atoms)."""
    names = list(names)
    if not names:
        return 0.0
    return total_loss(joint([system.var(v) for v in names]).block_weights(), base)


def _co_information_direct(system, groups, base):
    # inclusion-exclusion over the groups' joint entropies
    acc = []
    for k in range(1, len(groups) + 1):
        for sub in combinations(groups, k):
            names = [v for g in sub for v in g]
            acc.append((-1) ** (k + 1) * joint_entropy_direct(system, names, base))
    return math.fsum(acc)


def direct_quantity(system: InfoSystem, kind: str, vars: Sequence[str], base=2) -> float:
    """The classical formula for each kind, from partition block weights."""
    _check_arity(kind, vars)
    H = lambda names: joint_entropy_direct(system, names, base)  # noqa: E731
    v = list(vars)
    if kind == "entropy":
        return H(v)
    if kind == "joint_entropy":
        return H(v)
    if kind == "conditional_entropy":
        return H(v) - H(v[1:])
    if kind == "mutual_information":
        return H(v[:1]) + H(v[1:]) - H(v)
    if kind == "co_information":
        return _co_information_direct(system, [[x] for x in v], base)
    cond = v[2:]
    return H([v[0]] + cond) + H([v[1]] + cond) - H(v) - H(cond)


MULTIPLICITY_KINDS = ("TC", "DTC", "O_information")


def multiplicity_sum(system: InfoSystem, kind: str, vars: Sequence[str]) -> FormalSum:
    """Formal sum (atoms with multiplicity) representing TC, DTC or O-information.

    TC is ``sum_i [content_i] - [union of contents]``; DTC is the indicator of
    atoms lying in at least two contents; O-information is ``TC - DTC``
    (positive when redundancy dominates).
    """
    if kind not in MULTIPLICITY_KINDS:
        raise ValueError(f"unknown multiplicity quantity {kind!r}")
    if len(vars) < 2:
        raise ArityError(f"{kind} takes >= 2 variables, got {len(vars)}")
    space = system.space
    tc = -FormalSum.from_set(system.joint_content(vars))
    for nm in vars:
        tc = tc + FormalSum.from_set(system.content(nm))
    if kind == "TC":
        return tc
    shared = AtomSet.empty(space)
    for a, b in combinations(vars, 2):
        shared = shared | (system.content(a) & system.content(b))
    dtc = FormalSum.from_set(shared)
    if kind == "DTC":
        return dtc
    return tc - dtc


def multiplicity_quantity(system: InfoSystem, kind: str, vars: Sequence[str], base=2) -> float:
    return measure_formal_sum(system.table(base), multiplicity_sum(system, kind, vars))


def direct_multiplicity(system: InfoSystem, kind: str, vars: Sequence[str], base=2) -> float:
    H = lambda names: joint_entropy_direct(system, names, base)  # noqa: E731
    v = list(vars)
    tc = math.fsum(H([x]) for x in v) - H(v)
    dtc = H(v) - math.fsum(H(v) - H([y for y in v if y != x]) for x in v)
    return {"TC": tc, "DTC": dtc, "O_information": tc - dtc}[kind]


def expression_to_formal_sum(system: InfoSystem, expr) -> FormalSum:
    """Element of the integer atom module matching an entropy expression.

    ``expr`` is a string like ``"I(X;Y) - H(X|Y) + H(X,Y)"`` or an
    :class:`EntropyExpr`.  Each joint entropy term contributes its coefficient
    to every atom of the joint content.
    """
    if isinstance(expr, str):
        expr = parse_entropy_expr(expr)
    acc = np.zeros(1 << system.space.n, dtype=np.int64)
    for names, coeff in expr.terms.items():
        acc[system.joint_content(sorted(names)).bits] += coeff
    nz = np.flatnonzero(acc)
    return FormalSum(system.space, {int(m): int(acc[m]) for m in nz})


def evaluate_expression_direct(system: InfoSystem, expr, base=2) -> float:
    if isinstance(expr, str):
        expr = parse_entropy_expr(expr)
    return math.fsum(c * joint_entropy_direct(system, sorted(names), base)
                     for names, c in expr.terms.items())


__all__ = [
    "EntropyExpr", "InfoSystem", "SetExpr", "content", "content_of_blocks",
    "direct_multiplicity", "direct_quantity", "eval_region",
    "evaluate_expression_direct", "expression_to_formal_sum",
    "joint_entropy_direct", "multiplicity_quantity", "multiplicity_sum",
    "quantity", "region",
]
