"""Parsers for set expressions over variables and for entropy expressions.

Set expressions::

    region  := term (("|" | "∪" | "-" | "\\") term)*
    term    := factor (("&" | "∩") factor)*
    factor  := NAME | "(" region ")"

Entropy expressions are signed integer combinations of::

    H(A)  H(A,B)  H(A|B)  I(A;B)  I(A;B|C)  I(A;B;C)

where each argument group is a comma-joined list of variable names.  Every
term is desugared into joint entropies, so an :class:`EntropyExpr` is just a
mapping ``frozenset(names) -> coefficient``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .errors import ExpressionError


@dataclass(frozen=True)
class SetExpr:
    op: str  # "var", "&", "|", "-"
    name: Optional[str] = None
    left: Optional["SetExpr"] = None
    right: Optional["SetExpr"] = None

    def names(self) -> set[str]:
        if self.op == "var":
            return {self.name}
        return self.left.names() | self.right.names()

    def __str__(self):
        if self.op == "var":
            return self.name
        sym = {"&": "∩", "|": "∪", "-": "\\"}[self.op]
        return f"({self.left}{sym}{self.right})"


_SET_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(∩|&|∪|\||\\|-|\(|\)))")
_SET_OPS = {"∩": "&", "&": "&", "∪": "|", "|": "|", "\\": "-", "-": "-"}


def _tokenize(text: str, pattern) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = pattern.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        out.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return out


def parse_set_expr(text: str) -> SetExpr:
    toks = _tokenize(text, _SET_TOKEN)
    if not toks:
        raise ExpressionError("empty set expression")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def factor():
        tok = peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression")
        if tok == "(":
            take()
            node = region()
            if peek() != ")":
                raise ExpressionError("missing ')'")
            take()
            return node
        if tok in _SET_OPS or tok == ")":
            raise ExpressionError(f"unexpected {tok!r}")
        return SetExpr("var", name=take())

    def term():
        node = factor()
        while peek() in ("∩", "&"):
            take()
            node = SetExpr("&", left=node, right=factor())
        return node

    def region():
        node = term()
        while peek() in ("∪", "|", "-", "\\"):
            op = _SET_OPS[take()]
            node = SetExpr(op, left=node, right=term())
        return node

    node = region()
    if pos != len(toks):
        raise ExpressionError(f"trailing input starting at {toks[pos]!r}")
    return node


@dataclass(frozen=True)
class EntropyExpr:
    """Integer combination of joint entropies, keyed by variable-name sets."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {frozenset(k): int(v) for k, v in self.terms.items() if v and k}
        object.__setattr__(self, "terms", clean)

    def __add__(self, other: "EntropyExpr") -> "EntropyExpr":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return EntropyExpr(out)

    def scale(self, k: int) -> "EntropyExpr":
        return EntropyExpr({n: k * c for n, c in self.terms.items()})

    def names(self) -> set[str]:
        return set().union(*self.terms) if self.terms else set()

    def __str__(self):
        parts = []
        for names, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
            h = "H(" + ",".join(sorted(names)) + ")"
            body = h if abs(c) == 1 else f"{abs(c)}{h}"
            parts.append(("-" if c < 0 else "+") + body)
        s = " ".join(parts) or "0"
        return s[1:] if s.startswith("+") else s


def _H(names) -> EntropyExpr:
    return EntropyExpr({frozenset(names): 1})


def _conditioned(groups: list[frozenset], cond: frozenset) -> EntropyExpr:
    """Co-information of the groups given ``cond`` as joint entropies."""
    out = EntropyExpr()
    for k in range(1, len(groups) + 1):
        sign = 1 if k % 2 else -1
        for sub in combinations(groups, k):
            u = frozenset().union(*sub)
            out = out + _H(u | cond).scale(sign) + _H(cond).scale(-sign)
    return out


_ENT_TOKEN = re.compile(r"\s*(?:(\d+)|([HI])\s*(?=\()|([A-Za-z_][A-Za-z0-9_']*)|([-+*(),;|]))")


def parse_entropy_expr(text: str) -> EntropyExpr:
    toks = _tokenize(text, _ENT_TOKEN)
    if not toks:
        raise ExpressionError("empty entropy expression")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise ExpressionError(f"expected {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def group():
        names = [take()]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", names[0]):
            raise ExpressionError(f"expected a variable name, got {names[0]!r}")
        while peek() == ",":
            take()
            nm = take()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", nm):
                raise ExpressionError(f"expected a variable name, got {nm!r}")
            names.append(nm)
        return frozenset(names)

    def call():
        fn = take()
        if fn not in ("H", "I"):
            raise ExpressionError(f"expected H(...) or I(...), got {fn!r}")
        take("(")
        groups = [group()]
        while peek() == ";":
            take()
            groups.append(group())
        cond = frozenset()
        if peek() == "|":
            take()
            cond = group()
        take(")")
        if fn == "H":
            if len(groups) != 1:
                raise ExpressionError("H(...) takes one argument group")
            return _H(groups[0] | cond) + _H(cond).scale(-1)
        if len(groups) < 2:
            raise ExpressionError("I(...) needs at least two ';'-separated groups")
        return _conditioned(groups, cond)

    def term(sign):
        coeff = 1
        if peek() is not None and peek().isdigit():
            coeff = int(take())
            if peek() == "*":
                take()
        return call().scale(sign * coeff)

    total = EntropyExpr()
    sign = 1
    if peek() in ("+", "-"):
        sign = -1 if take() == "-" else 1
    total = total + term(sign)
    while peek() is not None:
        op = take()
        if op not in ("+", "-"):
            raise ExpressionError(f"expected '+' or '-', got {op!r}")
        total = total + term(1 if op == "+" else -1)
    return total
