"""Command-line front end.

Subcommands: widths, decompose, validate, translate, check-theorems,
catalog.  Graphs come from the text format (`v`/`e`/`s` lines);
decompositions and terms travel as JSON.  Exit codes: 0 success,
1 validation or theorem failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cospan as cs
from . import oracles
from . import terms as tm
from . import translate as tr
from .decomp import (
    BranchDec,
    DecompositionError,
    PathDec,
    RecBranchDec,
    RecPathDec,
    RecTreeDec,
    TreeDec,
    branch_dec_width,
    branch_to_recursive,
    branch_from_recursive,
    decomposition_from_json,
    decomposition_to_dot,
    decomposition_to_json,
    path_dec_width,
    path_from_recursive,
    path_to_recursive,
    rec_branch_width,
    rec_path_width,
    rec_tree_width,
    tree_dec_width,
    tree_from_recursive,
    tree_to_recursive,
    validate_branch_dec,
    validate_path_dec,
    validate_rec_branch_dec,
    validate_rec_path_dec,
    validate_rec_tree_dec,
    validate_tree_dec,
)
from .graph import GraphError, GraphParseError, SourcedGraph, parse_graph_text


class CliError(Exception):
    """Usage-level failure; maps to exit code 2."""


def _load_graph(path: str) -> SourcedGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_graph_text(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}") from exc


def _emit(data, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(data, indent=1, sort_keys=True))
    else:
        print(text)


def cmd_widths(args) -> int:
    sg = _load_graph(args.file)
    report = tr.check_theorems(sg.graph, budget=args.budget)
    _emit(report.to_json(), args.json, report.summary())
    return 0


def cmd_decompose(args) -> int:
    sg = _load_graph(args.file)
    g = sg.graph
    if args.kind == "tree":
        w, dec = oracles.exact_treewidth(g)
        if args.recursive:
            root = next((i for i, b in dec.bags if sg.sources <= b), None)
            if root is None:
                raise CliError("no bag contains all marked sources")
            dec = tree_to_recursive(dec, sg, root)
    elif args.kind == "path":
        w, dec = oracles.exact_pathwidth(g)
        if args.recursive:
            if dec.bags and not sg.sources <= dec.bags[0]:
                raise CliError("the marked sources are not in the first bag")
            dec = path_to_recursive(dec, sg)
    elif args.kind == "branch":
        w, dec = oracles.exact_branchwidth(g)
        if args.recursive:
            dec = branch_to_recursive(dec, sg)
    else:  # monoidal
        result = tm.bounded_mwd_search(cs.from_sourced(sg), shape=args.shape,
                                       budget=args.budget)
        payload = {"width": result.width, "exact": result.exact,
                   "term": tm.tree_to_json(result.tree),
                   "signature": tm.signature_to_json(result.signature)}
        _emit(payload, args.json,
              f"width={result.width} ({'exact within search space' if result.exact else 'bound only'})\n"
              + json.dumps(tm.tree_to_json(result.tree)))
        return 0
    payload = {"width": w, "decomposition": decomposition_to_json(dec)}
    if args.dot:
        _emit(payload, False, decomposition_to_dot(dec))
    else:
        _emit(payload, args.json,
              f"width={w}\n" + json.dumps(decomposition_to_json(dec)))
    return 0


_VALIDATORS = {
    TreeDec: (validate_tree_dec, tree_dec_width, True),
    PathDec: (validate_path_dec, path_dec_width, True),
    BranchDec: (validate_branch_dec, branch_dec_width, True),
}


def cmd_validate(args) -> int:
    sg = _load_graph(args.file)
    dec = decomposition_from_json(_load_json(args.dec))
    if isinstance(dec, (TreeDec, PathDec, BranchDec)):
        validate, width_fn, _ = _VALIDATORS[type(dec)]
        check = validate(dec, sg.graph)
        if check:
            print(f"valid, width={width_fn(dec, sg.graph)}")
            return 0
        print(f"invalid (clause {check.clause}): {check.message}")
        return 1
    if isinstance(dec, RecTreeDec):
        check = validate_rec_tree_dec(dec, sg)
    elif isinstance(dec, RecPathDec):
        check = validate_rec_path_dec(dec, sg)
    elif isinstance(dec, RecBranchDec):
        check = validate_rec_branch_dec(dec, sg)
    else:
        raise CliError(f"unsupported decomposition {type(dec).__name__}")
    if check:
        widths = {RecTreeDec: rec_tree_width, RecPathDec: rec_path_width,
                  RecBranchDec: rec_branch_width}
        fn = next(f for k, f in widths.items() if isinstance(dec, k))
        print(f"valid, width={fn(dec)}")
        return 0
    print(f"invalid (clause {check.clause}): {check.message}")
    return 1


def cmd_translate(args) -> int:
    data = _load_json(getattr(args, "from"))
    dec = None
    term = None
    sig = None
    if "term" in data:
        term = tm.tree_from_json(data["term"])
        sig = tm.signature_from_json(data["signature"])
    else:
        dec = decomposition_from_json(data)

    to = args.to
    if term is not None:
        source_width = tm.width(term, sig)
        if to in ("tree", "rec-tree"):
            out = tr.m_to_tdec(term, sig)
            out_width = rec_tree_width(out)
            if to == "tree":
                out = tree_from_recursive(out)
        elif to in ("path", "rec-path"):
            out = tr.m_to_pdec(term, sig)
            out_width = rec_path_width(out)
            if to == "path":
                out = path_from_recursive(out)
        elif to in ("branch", "rec-branch"):
            out = tr.m_to_bdec(term, sig)
            out_width = rec_branch_width(out)
            if to == "branch":
                out = branch_from_recursive(out)
        else:
            raise CliError(f"cannot translate a term to {to!r}")
        payload = {"from_width": source_width, "to_width": out_width,
                   "result": decomposition_to_json(out)}
        _emit(payload, args.json,
              f"width {source_width} -> {out_width}\n"
              + json.dumps(decomposition_to_json(out)))
        return 0

    if to == "monoidal":
        if isinstance(dec, RecTreeDec):
            tree, sig2 = tr.t_to_mdec(dec, dec.graph)
            source_width = rec_tree_width(dec)
        elif isinstance(dec, RecPathDec):
            tree, sig2 = tr.p_to_mdec(dec, dec.graph)
            source_width = rec_path_width(dec)
        elif isinstance(dec, RecBranchDec):
            tree, sig2 = tr.b_to_mdec(dec, dec.graph)
            source_width = rec_branch_width(dec)
        else:
            raise CliError("translating a classic decomposition to a term "
                           "needs the recursive form; convert first")
        payload = {"from_width": source_width,
                   "to_width": tm.width(tree, sig2),
                   "term": tm.tree_to_json(tree),
                   "signature": tm.signature_to_json(sig2)}
        _emit(payload, args.json,
              f"width {source_width} -> {tm.width(tree, sig2)}\n"
              + json.dumps(tm.tree_to_json(tree)))
        return 0

    # classic <-> recursive conversions need the ambient graph for 'to
    # recursive'; recursive forms embed theirs
    if isinstance(dec, RecTreeDec) and to == "tree":
        out = tree_from_recursive(dec)
        payload = {"from_width": rec_tree_width(dec),
                   "to_width": max((len(b) for _, b in out.bags), default=0),
                   "result": decomposition_to_json(out)}
    elif isinstance(dec, RecPathDec) and to == "path":
        out = path_from_recursive(dec)
        payload = {"from_width": rec_path_width(dec),
                   "to_width": max((len(b) for b in out.bags), default=0),
                   "result": decomposition_to_json(out)}
    elif isinstance(dec, RecBranchDec) and to == "branch":
        out = branch_from_recursive(dec)
        payload = {"from_width": rec_branch_width(dec),
                   "to_width": branch_dec_width(out, dec.graph.graph),
                   "result": decomposition_to_json(out)}
    elif isinstance(dec, (TreeDec, PathDec, BranchDec)) and to.startswith("rec-"):
        if not args.graph:
            raise CliError("--graph FILE is required to make a classic "
                           "decomposition recursive")
        sg = _load_graph(args.graph)
        if isinstance(dec, TreeDec):
            root = next((i for i, b in dec.bags if sg.sources <= b), None)
            if root is None:
                raise CliError("no bag contains all marked sources")
            out = tree_to_recursive(dec, sg, root)
            widths = (tree_dec_width(dec, sg.graph), rec_tree_width(out))
        elif isinstance(dec, PathDec):
            out = path_to_recursive(dec, sg)
            widths = (path_dec_width(dec, sg.graph), rec_path_width(out))
        else:
            out = branch_to_recursive(dec, sg)
            widths = (branch_dec_width(dec, sg.graph), rec_branch_width(out))
        payload = {"from_width": widths[0], "to_width": widths[1],
                   "result": decomposition_to_json(out)}
    else:
        raise CliError(f"unsupported translation to {to!r} from "
                       f"{type(dec).__name__}")
    _emit(payload, args.json,
          f"width {payload['from_width']} -> {payload['to_width']}\n"
          + json.dumps(payload["result"]))
    return 0


def cmd_check_theorems(args) -> int:
    sg = _load_graph(args.file)
    report = tr.check_theorems(sg.graph, budget=args.budget)
    lines = [report.summary()]
    for c in report.checks:
        lines.append(f"  {'PASS' if c.ok else 'FAIL'} {c.name}: {c.detail}")
    _emit(report.to_json(), args.json, "\n".join(lines))
    return 0 if report.ok else 1


def cmd_catalog(args) -> int:
    cache = oracles.WidthCache()
    if args.cache:
        cache.load(args.cache)
    rows = []
    for g in oracles.enumerate_graphs(args.max_v, args.max_e):
        tw, pw, bw = cache.widths(g)
        edges = sorted(tuple(sorted(g.ends(e))) for e in g.edges)
        rows.append({"n": len(g.vertices), "edges": edges,
                     "tw": tw, "pw": pw, "bw": bw})
        if not args.json:
            print(f"n={len(g.vertices)} e={edges} tw={tw} pw={pw} bw={bw}")
    if args.json:
        print(json.dumps(rows, indent=1, sort_keys=True))
    if args.cache:
        cache.save(args.cache)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mwidth",
        description="widths of graphs and their glued-cospan decompositions")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("widths", help="exact widths plus certified bounds")
    w.add_argument("file")
    w.add_argument("--json", action="store_true")
    w.add_argument("--budget", type=int, default=4000)
    w.set_defaults(fn=cmd_widths)

    d = sub.add_parser("decompose", help="emit a width witness")
    d.add_argument("file")
    d.add_argument("--kind", choices=("tree", "path", "branch", "monoidal"),
                   required=True)
    d.add_argument("--recursive", action="store_true")
    d.add_argument("--shape", choices=("any", "right-tree", "path"), default="any")
    d.add_argument("--budget", type=int, default=4000)
    d.add_argument("--json", action="store_true")
    d.add_argument("--dot", action="store_true")
    d.set_defaults(fn=cmd_decompose)

    v = sub.add_parser("validate", help="check a decomposition JSON")
    v.add_argument("file")
    v.add_argument("--dec", required=True)
    v.set_defaults(fn=cmd_validate)

    t = sub.add_parser("translate", help="apply a width-preserving translation")
    t.add_argument("--from", required=True)
    t.add_argument("--to", required=True,
                   choices=("tree", "path", "branch", "rec-tree", "rec-path",
                            "rec-branch", "monoidal"))
    t.add_argument("--graph", help="graph file (classic -> recursive only)")
    t.add_argument("--json", action="store_true")
    t.set_defaults(fn=cmd_translate)

    c = sub.add_parser("check-theorems", help="verify the width sandwiches")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.add_argument("--budget", type=int, default=4000)
    c.set_defaults(fn=cmd_check_theorems)

    g = sub.add_parser("catalog", help="stream small graphs with their widths")
    g.add_argument("--max-v", type=int, required=True)
    g.add_argument("--max-e", type=int, default=None)
    g.add_argument("--cache", help="JSON cache file for widths")
    g.add_argument("--json", action="store_true")
    g.set_defaults(fn=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (CliError, GraphParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, DecompositionError, tm.TermError,
            tr.TranslationError, oracles.OracleError, cs.CospanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
