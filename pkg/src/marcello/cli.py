"""Command-line front end: ``marcello <subcommand> ...``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence, TextIO

from . import __version__
from .cache import ResultCache, default_path
from .canon import canonical_form, canonical_labeling
from .engine import (
    ALL_VALID,
    SATURATED,
    EngineError,
    PlanFormatError,
    apply_plan,
    emit_witness,
    one_shot_completable,
    parse_witness,
)
from .experiments import claims_scan, conjecture_scan, paper_table, reveal_cover
from .formats import Graph6Error, emit_dot, emit_graph6, parse_edge_list, parse_graph6
from .graph import (
    FAMILIES,
    Graph,
    GraphError,
    GraphFamily,
    disjoint_union,
    generate,
    join,
    pearl,
)
from .solver import (
    DEFAULT_EXACT_CAP,
    INFINITE,
    IterationCapExceeded,
    OrderCapExceeded,
    SearchConfig,
    Solver,
    counting_lower_bound,
    default_solver,
    marcello_upper,
    verify_sequence,
)

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3

ALIASES = {"kb": "complete_bipartite"}
COMBINATORS = {"union", "join", "pearl"}


class UsageError(Exception):
    pass


# -- graph input ----------------------------------------------------------


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GraphError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise GraphError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_shorthand(text: str) -> Graph:
    """``path:7``, ``kb:2,5``, ``petersen``, ``union(a,b)``, ``join(a,b)``, ``pearl(a,b,...)``."""
    text = text.strip()
    head, paren, rest = text.partition("(")
    if paren:
        op = head.strip()
        if op not in COMBINATORS or not rest.endswith(")"):
            raise GraphError(f"bad combinator expression {text!r}")
        args = [parse_shorthand(a) for a in _split_top(rest[:-1])]
        if op == "pearl":
            return pearl(args)
        if len(args) < 2:
            raise GraphError(f"{op} needs at least two graphs")
        f = disjoint_union if op == "union" else join
        out = args[0]
        for a in args[1:]:
            out = f(out, a)
        return out
    name, _, params = text.partition(":")
    tag = ALIASES.get(name, name)
    if tag not in FAMILIES:
        raise GraphError(f"unknown family {name!r}")
    try:
        nums = tuple(int(p) for p in params.split(",")) if params else ()
    except ValueError:
        raise GraphError(f"bad parameters in {text!r}") from None
    return generate(GraphFamily(tag, nums))


def _looks_like_shorthand(text: str) -> bool:
    name = text.partition(":")[0].partition("(")[0]
    return name in FAMILIES or name in ALIASES or name in COMBINATORS


def read_graph(spec: str, stdin: Optional[TextIO] = None) -> Graph:
    if spec == "-":
        return parse_graph6((stdin or sys.stdin).read().strip())
    if _looks_like_shorthand(spec):
        return parse_shorthand(spec)
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
        first = text.strip().splitlines()[0] if text.strip() else ""
        if first and "\t" not in first and " " not in first:
            return parse_graph6(first)
        return parse_edge_list(text)
    return parse_graph6(spec)


# -- output helpers ---------------------------------------------------------


def fmt_value(v) -> str:
    return "INF" if v == INFINITE else str(int(v))


def record(**fields) -> str:
    return "\t".join(f"{k}={v}" for k, v in fields.items()) + "\n"


def flat(text: str) -> str:
    return text.strip().replace("\n", "|")


class Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = Parser(add_help=False)
    common.add_argument("--format", choices=("human", "records"), default="human")
    common.add_argument("--cache", metavar="PATH", help="result cache file (default: $MARCELLO_CACHE)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--mode", choices=("saturated", "all"), default="saturated")
    common.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)

    p = Parser(prog="marcello", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=Parser)

    def add(name, help_, graph=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if graph:
            sp.add_argument("graph", help="graph6, edge-list file, family shorthand, or - for stdin")
        return sp

    sp = add("number", "exact Marcello number with witness")
    sp.add_argument("--witness-out", metavar="FILE")
    sp = add("upper", "greedy upper bound")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    add("lower", "counting lower bound")
    add("oneshot", "decide one-iteration completability")
    add("index", "Marcello index")
    add("outcomes", "classes reachable in one iteration")
    sp = add("verify", "replay a witness file")
    sp.add_argument("witness")
    sp = add("scan", "exhaustive claim or conjecture scan", graph=False)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--claims", action="store_true")
    g.add_argument("--conjectures", action="store_true")
    sp.add_argument("--n", type=int, default=5)
    add("table", "regenerate the fixed-results table", graph=False)
    sp = add("cover", "greedy reveal cover", graph=False)
    sp.add_argument("--n", type=int, default=4)
    sp = add("gen", "emit graph6 for a family", graph=False)
    sp.add_argument("family")
    sp.add_argument("params", nargs="*", type=int)
    sp = add("dot", "emit DOT, Marcello edges dashed")
    sp.add_argument("--plan", metavar="FILE")
    return p


# -- subcommands ------------------------------------------------------------


def _config(args) -> SearchConfig:
    mode = ALL_VALID if args.mode == "all" else SATURATED
    return SearchConfig(restriction=mode, threads=args.threads, exact_cap=args.exact_cap)


def _relabel_witness(plans, perm):
    return [p.relabel(perm) for p in plans]


def cmd_number(args, g, out, solver):
    cfg = _config(args)
    cache = None
    if not args.no_cache:
        cache = ResultCache(args.cache or default_path())
    form = canonical_form(g)
    perm = canonical_labeling(g)
    inv = [0] * g.n
    for v, k in enumerate(perm):
        inv[k] = v
    hit = cache.get(form, cfg.restriction) if cache else None
    if hit is not None:
        value, rep_witness = hit
        witness = _relabel_witness(rep_witness or [], inv)
    else:
        res = solver.marcello_number(g, cfg)
        value, witness = res.value, res.witness
        if cache:
            cache.put(form, cfg.restriction, value, _relabel_witness(witness, perm))
    text = emit_witness(witness) if witness else ""
    if args.witness_out and witness:
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "records":
        out.write(record(graph=emit_graph6(g), mode=cfg.restriction, value=fmt_value(value), witness=flat(text)))
    else:
        out.write(fmt_value(value) + "\n")
        if text:
            out.write(text)
    return EXIT_OK


def cmd_upper(args, g, out, solver):
    ub = marcello_upper(g, restarts=args.restarts, seed=args.seed)
    text = emit_witness(ub.witness) if ub.witness else ""
    if args.format == "records":
        out.write(record(graph=emit_graph6(g), upper=ub.value, witness=flat(text)))
    else:
        out.write(f"{ub.value}\n{text}")
    return EXIT_OK


def cmd_lower(args, g, out, solver):
    if g.is_complete():
        lb = 0
    elif g.is_null():
        lb = "INF"
    else:
        lb = counting_lower_bound(g)
    if args.format == "records":
        out.write(record(graph=emit_graph6(g), lower=lb))
    else:
        out.write(f"{lb}\n")
    return EXIT_OK


def cmd_oneshot(args, g, out, solver):
    d = one_shot_completable(g)
    if args.format == "records":
        if d:
            detail = " ".join(f"{u}-{v}:{w}" for (u, v), w in sorted(d.assignment.items()))
        else:
            detail = d.blocking.explain() if d.blocking else ""
        out.write(record(graph=emit_graph6(g), oneshot="yes" if d else "no", detail=detail))
        return EXIT_OK
    if d:
        out.write("yes\n")
        for (u, v), w in sorted(d.assignment.items()):
            out.write(f"{u}-{v} initiated by {w}\n")
    else:
        out.write("no\n")
        if d.blocking:
            out.write(d.blocking.explain() + "\n")
    return EXIT_OK


def cmd_index(args, g, out, solver):
    ix = solver.marcello_index(g, _config(args))
    if args.format == "records":
        for cf, w in ix.intermediates.items():
            out.write(record(graph=emit_graph6(g), intermediate=cf.graph6, value=w))
        out.write(record(graph=emit_graph6(g), index=ix.index, value=ix.marcello_number))
    else:
        out.write(f"index {ix.index} (Marcello number {ix.marcello_number})\n")
        for cf, w in ix.intermediates.items():
            out.write(f"  {cf.graph6}\t{w}\n")
    return EXIT_OK


def cmd_outcomes(args, g, out, solver):
    if g.is_complete():
        return EXIT_OK
    res = solver.outcomes(canonical_form(g), _config(args).restriction)
    for cf in res:
        h = cf.graph()
        if args.format == "records":
            out.write(record(graph=emit_graph6(g), outcome=cf.graph6, size=h.size,
                             complete="yes" if h.is_complete() else "no"))
        else:
            out.write(f"{cf.graph6}\t{h.size} edges{' (complete)' if h.is_complete() else ''}\n")
    return EXIT_OK


def cmd_verify(args, g, out, solver):
    with open(args.witness, encoding="utf-8") as fh:
        plans = parse_witness(fh.read())
    chk = verify_sequence(g, plans)
    if args.format == "records":
        out.write(record(graph=emit_graph6(g), iterations=len(plans), ok="yes" if chk.ok else "no",
                         failure=chk.failure or ""))
    elif chk.ok:
        out.write(f"ok: complete after {len(plans)} iteration(s)\n")
    else:
        out.write(f"failed: {chk.failure}\n")
    return EXIT_OK if chk.ok else EXIT_VERIFY


def _report(args, rep, out):
    out.write(rep.records() if args.format == "records" else rep.table())
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_scan(args, out, solver):
    if args.claims:
        if args.n > 6:
            raise UsageError("claims scan supports --n <= 6")
        return _report(args, claims_scan(args.n, solver=solver), out)
    if args.n > 7:
        raise UsageError("conjecture scan supports --n <= 7")
    return _report(args, conjecture_scan(args.n, solver=solver), out)


def cmd_table(args, out, solver):
    return _report(args, paper_table(solver), out)


def cmd_cover(args, out, solver):
    if args.n > 6:
        raise UsageError("cover supports --n <= 6")
    rc = reveal_cover(args.n, _config(args).restriction, solver)
    count = rc.coverage_count(rc.cover)
    if args.format == "records":
        for c in rc.cover:
            out.write(record(n=args.n, mode=rc.restriction, chosen=c.graph6,
                             revealed=",".join(sorted(x.graph6 for x in rc.revealed[c]))))
        out.write(record(n=args.n, mode=rc.restriction, t=len(rc.cover), q=rc.q, coverage=count))
    else:
        out.write(f"cover of {rc.q} classes on {args.n} vertices with t = {len(rc.cover)} ({rc.restriction})\n")
        for c in rc.cover:
            revealed = ", ".join(f"{x.graph6}={fmt_value(w)}" for x, w in sorted(rc.revealed[c].items()))
            out.write(f"  {c.graph6}: {revealed}\n")
        out.write(f"t + sum of indices = {count} >= q = {rc.q}\n")
    return EXIT_OK


def cmd_gen(args, out, solver):
    spec = args.family
    if args.params:
        spec += ":" + ",".join(map(str, args.params))
    g = parse_shorthand(spec)
    out.write(emit_graph6(g) + "\n")
    return EXIT_OK


def cmd_dot(args, g, out, solver):
    marked = []
    if args.plan:
        with open(args.plan, encoding="utf-8") as fh:
            plans = parse_witness(fh.read())
        for plan in plans:
            g, _ = apply_plan(g, plan)
            marked.extend(plan.edges())
    out.write(emit_dot(g, marked))
    return EXIT_OK


GRAPH_COMMANDS = {
    "number": cmd_number,
    "upper": cmd_upper,
    "lower": cmd_lower,
    "oneshot": cmd_oneshot,
    "index": cmd_index,
    "outcomes": cmd_outcomes,
    "verify": cmd_verify,
    "dot": cmd_dot,
}
PLAIN_COMMANDS = {"scan": cmd_scan, "table": cmd_table, "cover": cmd_cover, "gen": cmd_gen}


def run_cli(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None,
            solver: Optional[Solver] = None, stdin: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    solver = solver or default_solver()
    try:
        args = build_parser().parse_args(argv)
        if args.cmd in PLAIN_COMMANDS:
            return PLAIN_COMMANDS[args.cmd](args, out, solver)
        g = read_graph(args.graph, stdin)
        return GRAPH_COMMANDS[args.cmd](args, g, out, solver)
    except UsageError as exc:
        err.write(f"marcello: {exc}\n")
        return EXIT_USAGE
    except (OrderCapExceeded, IterationCapExceeded) as exc:
        err.write(f"marcello: cap exceeded: {exc}\n")
        return EXIT_CAP
    except (GraphError, Graph6Error, PlanFormatError, EngineError, OSError) as exc:
        err.write(f"marcello: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
