"""``ld``: command-line front end.

Systems are read from JSON documents of the form::

    {
      "schema": "ld-system/1",
      "outcomes": [{"label": "1", "p": 0.1}, ...],
      "variables": {"X": [["1"], ["2", "3", "4"]], ...},
      "refinements": {"1": [{"label": "1a", "p": 0.05}, ...]}
    }

Exit codes: 0 ok, 2 usage, 3 parse/schema, 4 semantic, 5 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any, Optional

from .atoms import AtomSet
from .errors import CapExceededError, ExpressionError, LogDecompError
from .measure import measure_atom_set, measure_formal_sum, mu_table
from .quantities import (
    QUANTITY_KINDS,
    InfoSystem,
    content,
    direct_quantity,
    eval_region,
    evaluate_expression_direct,
    expression_to_formal_sum,
    quantity,
)
from .refinement import RefinementMap, kl_direct, kl_via_measure, refine_space
from .representability import CI_TOL, ci_residual, gacs_korner, wyner
from .space import new_space, partition_from_blocks
from .systems import CANONICAL_NAMES, build_canonical_system, discriminate

SCHEMA = "ld-system/1"

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SEMANTIC, EXIT_CAP = 0, 2, 3, 4, 5


class ParseError(Exception):
    """Malformed input document (bad JSON or schema violation)."""


class UsageError(Exception):
    pass


def _base_arg(text: str):
    if text == "e":
        return "e"
    if text == "2":
        return 2
    raise argparse.ArgumentTypeError("base must be 2 or e")


# ---------------------------------------------------------------- loading

def _field(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise ParseError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return val


def parse_document(doc: Any, *, normalize: bool = False, tol: float = 1e-9,
                   warn=None) -> tuple[InfoSystem, Optional[RefinementMap]]:
    """Validate a decoded ``ld-system/1`` document and build the system."""
    if not isinstance(doc, dict):
        raise ParseError("document: expected a JSON object")
    schema = _field(doc, "schema", str, "document")
    if schema != SCHEMA:
        raise ParseError(f"document.schema: unsupported version {schema!r}, expected {SCHEMA!r}")
    outcomes = _field(doc, "outcomes", list, "document")
    labels, probs = [], []
    for k, o in enumerate(outcomes):
        where = f"outcomes[{k}]"
        if not isinstance(o, dict):
            raise ParseError(f"{where}: expected an object")
        labels.append(_field(o, "label", str, where))
        probs.append(float(_field(o, "p", (int, float), where)))
    total = math.fsum(probs)
    if normalize and total > 0:
        probs = [p / total for p in probs]
    elif abs(total - 1.0) > tol and warn is not None:
        warn(f"outcome weights sum to {total!r}, not 1; using them as given")
    space = new_space(labels, probs)
    variables = {}
    raw_vars = doc.get("variables", {})
    if not isinstance(raw_vars, dict):
        raise ParseError("document.variables: expected an object")
    for name, blocks in raw_vars.items():
        where = f"variables.{name}"
        if not isinstance(blocks, list) or not all(
                isinstance(b, list) and all(isinstance(x, str) for x in b) for b in blocks):
            raise ParseError(f"{where}: expected a list of label lists")
        variables[name] = partition_from_blocks(space, blocks)
    system = InfoSystem(space, variables)
    rmap = None
    if "refinements" in doc:
        rmap = parse_refinements(space, doc["refinements"], scale=total if normalize else 1.0)
    return system, rmap


def parse_refinements(space, raw, scale: float = 1.0) -> RefinementMap:
    if not isinstance(raw, dict):
        raise ParseError("refinements: expected an object")
    split = {}
    for parent, kids in raw.items():
        where = f"refinements.{parent}"
        if not isinstance(kids, list) or not kids:
            raise ParseError(f"{where}: expected a nonempty list")
        out = []
        for k, kid in enumerate(kids):
            w = f"{where}[{k}]"
            if not isinstance(kid, dict):
                raise ParseError(f"{w}: expected an object")
            out.append((_field(kid, "label", str, w),
                        float(_field(kid, "p", (int, float), w)) / scale))
        split[parent] = out
    return refine_space(space, split)


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_system(path: str, *, normalize: bool = False, tol: float = 1e-9,
                warn=None) -> tuple[InfoSystem, Optional[RefinementMap]]:
    return parse_document(_read_json(path), normalize=normalize, tol=tol, warn=warn)


# ---------------------------------------------------------------- commands

def _atom_rows(system: InfoSystem, s: AtomSet, base) -> list[dict]:
    table = mu_table(system.space, base)
    space = system.space
    rows = sorted(s, key=lambda m: (m.bit_count(), m))
    return [{"atom": space.render(m), "degree": m.bit_count(), "mu": table[m]} for m in rows]


def cmd_table(args, system, rmap):
    rows = _atom_rows(system, AtomSet.full(system.space), args.base)
    return {"command": "table", "unit": _unit(args.base), "atoms": rows}


def cmd_quantity(args, system, rmap):
    vars = _need_vars(args)
    val = quantity(system, args.kind, vars, args.base)
    direct = direct_quantity(system, args.kind, vars, args.base)
    return {"command": "quantity", "kind": args.kind, "vars": vars,
            "unit": _unit(args.base), "value": val, "direct": direct}


def cmd_region(args, system, rmap):
    s = eval_region(system, args.expr)
    return {"command": "region", "expr": args.expr, "unit": _unit(args.base),
            "value": measure_atom_set(mu_table(system.space, args.base), s),
            "atoms": _atom_rows(system, s, args.base)}


def cmd_expr(args, system, rmap):
    z = expression_to_formal_sum(system, args.entropy)
    space = system.space
    coeffs = [{"atom": space.render(m), "coeff": c}
              for m, c in sorted(z.coeffs.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))]
    return {"command": "expr", "entropy": args.entropy, "unit": _unit(args.base),
            "element": z.render(), "coefficients": coeffs,
            "value": measure_formal_sum(mu_table(space, args.base), z),
            "direct": evaluate_expression_direct(system, args.entropy, args.base)}


def cmd_common(args, system, rmap):
    vars = _need_vars(args)
    tol = args.tol if args.tol is not None else CI_TOL
    if args.method == "gk":
        res = gacs_korner(system, vars, args.base)
    else:
        res = wyner(system, vars, args.base, tol=tol, over=args.over)
    out = {"command": "common", "method": args.method, "vars": vars,
           "unit": _unit(args.base), "value": res.value,
           "partition": [list(system.space.labels_of(b)) for b in res.partition.blocks]}
    if args.method == "wyner":
        out["ci_residual"] = ci_residual(system, vars, res.partition)
    return out


def cmd_refine(args, system, rmap):
    if args.map:
        if args.map.lstrip().startswith("{"):
            try:
                raw = json.loads(args.map)
            except json.JSONDecodeError as exc:
                raise ParseError(f"--map: column {exc.colno}: {exc.msg}") from None
        else:
            raw = _read_json(args.map)
        rmap = parse_refinements(system.space, raw)
    if rmap is None:
        raise UsageError("no refinement given: use --map FILE or a document with 'refinements'")
    tol = args.tol if args.tol is not None else 1e-9
    child = rmap.child
    rows = []
    for name, p in system.variables.items():
        before = measure_atom_set(system.table(args.base), system.content(name))
        cp = rmap.map_partition(p)
        after = measure_atom_set(mu_table(child, args.base), content(child, cp))
        rows.append({"variable": name, "before": before, "after": after,
                     "blocks": [list(child.labels_of(b)) for b in cp.blocks]})
    out = {"command": "refine", "unit": _unit(args.base),
           "outcomes": [{"label": lab, "p": p} for lab, p in zip(child.labels, child.probs)],
           "variables": rows}
    if args.check_invariance:
        ok = all(abs(r["before"] - r["after"]) <= tol for r in rows)
        out["invariant"] = ok
    return out


def cmd_discriminate(args, system, rmap):
    vars = args.vars or sorted(system.variables)
    val = discriminate(system, vars, args.base)
    return {"command": "discriminate", "system": args.system or args.file,
            "vars": vars, "unit": _unit(args.base), "value": val}


def cmd_kl(args, system, rmap):
    if args.weights is None:
        raise UsageError("kl needs --weights")
    bins = args.bins if args.bins is not None else len(args.weights)
    return {"command": "kl", "bins": bins, "unit": _unit(args.base),
            "value": kl_via_measure(args.weights, bins, args.base),
            "direct": kl_direct(args.weights, args.base)}


COMMANDS = {
    "table": cmd_table,
    "quantity": cmd_quantity,
    "region": cmd_region,
    "expr": cmd_expr,
    "common": cmd_common,
    "refine": cmd_refine,
    "discriminate": cmd_discriminate,
    "kl": cmd_kl,
}

_NEEDS_SYSTEM = set(COMMANDS) - {"kl"}


def _unit(base) -> str:
    return "bits" if base == 2 else "nats"


def _need_vars(args) -> list[str]:
    if not args.vars:
        raise UsageError(f"{args.command} needs --vars")
    return args.vars


# ---------------------------------------------------------------- rendering

def _fmt(x: float) -> str:
    return f"{x:.9f}"


def render_text(report: dict) -> str:
    unit = report.get("unit", "bits")
    lines = []
    cmd = report["command"]
    if cmd in ("table", "region"):
        if cmd == "region":
            lines.append(f"{_fmt(report['value'])} {unit}")
        atoms = report["atoms"]
        w = max([len(r["atom"]) for r in atoms] + [4])
        if atoms:
            lines.append(f"{'atom':<{w}}  deg  {'mu':>13}")
        for r in atoms:
            lines.append(f"{r['atom']:<{w}}  {r['degree']:>3}  {_fmt(r['mu']):>13}")
        return "\n".join(lines)
    if cmd == "expr":
        return f"{report['element'] or '0'}\n{_fmt(report['value'])} {unit}"
    if cmd == "common":
        blocks = ", ".join("{" + ",".join(b) + "}" for b in report["partition"])
        lines.append(f"{_fmt(report['value'])} {unit}")
        lines.append(f"partition {{{blocks}}}")
        if "ci_residual" in report:
            lines.append(f"ci_residual {report['ci_residual']:.3e}")
        return "\n".join(lines)
    if cmd == "refine":
        for r in report["variables"]:
            lines.append(f"{r['variable']}: {_fmt(r['before'])} -> {_fmt(r['after'])} {unit}")
        if "invariant" in report:
            lines.append("invariant" if report["invariant"] else "NOT invariant")
        return "\n".join(lines)
    return f"{_fmt(report['value'])} {unit}"


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=_base_arg, default=argparse.SUPPRESS,
                        help="logarithm base: 2 (bits, default) or e (nats)")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="tolerance for weight-sum, CI and invariance checks")
    common.add_argument("--normalize", action="store_true", default=argparse.SUPPRESS,
                        help="rescale outcome weights to sum to 1")

    parser = argparse.ArgumentParser(prog="ld", parents=[common],
                                     description="Logarithmic decomposition of entropy.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, parents=[common], help=help)
        if name in _NEEDS_SYSTEM:
            p.add_argument("file", nargs="?", help="ld-system/1 JSON document")
            p.add_argument("--system", choices=CANONICAL_NAMES,
                           help="use a built-in system instead of a file")
        return p

    add("table", "measure of every atom")
    p = add("quantity", "an information quantity and its classical value")
    p.add_argument("--kind", required=True, choices=QUANTITY_KINDS)
    p.add_argument("--vars", nargs="+")
    p = add("region", "measure and atoms of a set expression over contents")
    p.add_argument("--expr", required=True)
    p = add("expr", "integer atom combination for an entropy expression")
    p.add_argument("--entropy", required=True)
    p = add("common", "Gacs-Korner or Wyner common information")
    p.add_argument("--method", choices=("gk", "wyner"), default="gk")
    p.add_argument("--vars", nargs="+")
    p.add_argument("--over", choices=("outcomes", "joint"), default="outcomes",
                   help="Wyner search domain")
    p = add("refine", "apply a refinement and compare variable entropies")
    p.add_argument("--map", help="inline JSON object or file: parent label -> [{label, p}]")
    p.add_argument("--check-invariance", action="store_true")
    p = add("discriminate", "measure of the degree-2 upper set of shared content")
    p.add_argument("--vars", nargs="+")
    p = add("kl", "KL divergence to uniform via the measure")
    p.add_argument("--bins", type=int)
    p.add_argument("--weights", type=float, nargs="+")
    return parser


def _fix_swallowed_file(args) -> None:
    # "--vars X Y file.json" leaves the file inside vars
    if getattr(args, "file", "-") is None and getattr(args, "vars", None):
        last = args.vars[-1]
        if last.endswith(".json") or os.path.isfile(last):
            args.file = last
            args.vars = args.vars[:-1]


def _defaults(args) -> None:
    for name, val in (("base", 2), ("format", "text"), ("tol", None), ("normalize", False)):
        if not hasattr(args, name):
            setattr(args, name, val)


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE

    _defaults(args)
    _fix_swallowed_file(args)

    def warn(msg):
        print(f"ld: warning: {msg}", file=stderr)

    try:
        system = rmap = None
        if args.command in _NEEDS_SYSTEM:
            if args.system and args.file:
                raise UsageError("give either a file or --system, not both")
            if args.system:
                system = build_canonical_system(args.system).system
            elif args.file:
                tol = args.tol if args.tol is not None else 1e-9
                system, rmap = load_system(args.file, normalize=args.normalize, tol=tol, warn=warn)
            else:
                raise UsageError(f"{args.command} needs a system file or --system")
        report = COMMANDS[args.command](args, system, rmap)
    except UsageError as exc:
        print(f"ld: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ParseError, ExpressionError) as exc:
        print(f"ld: parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except CapExceededError as exc:
        print(f"ld: cap exceeded: {exc}", file=stderr)
        return EXIT_CAP
    except (LogDecompError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ld: error: {msg}", file=stderr)
        return EXIT_SEMANTIC

    if args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False), file=stdout)
    else:
        print(render_text(report), file=stdout)
    return EXIT_OK


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
