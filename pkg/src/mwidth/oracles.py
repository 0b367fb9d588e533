"""Exact brute-force width oracles and small-graph enumeration.

The tree and path oracles search the recursive decomposition forms
directly (bag choice + outside-component grouping), memoized on the
(subgraph, sources) state, so they exercise the same inductive
definitions the validators check.  The branch oracle enumerates all
leaf-labelled cubic trees.  Everything here is desk scale only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .decomp import (
    BranchDec,
    PathDec,
    RecPathCons,
    RecPathDec,
    RecTreeDec,
    RecTreeNode,
    REC_PATH_EMPTY,
    REC_TREE_EMPTY,
    TreeDec,
    branch_dec_width,
    path_from_recursive,
    tree_from_recursive,
)
from .graph import Graph, SourcedGraph, UnionFind, canonical_key


class OracleError(ValueError):
    """Input outside the configured brute-force bounds."""


_INF = math.inf


def _subsets(items: Iterable) -> Iterable[frozenset]:
    items = sorted(items)
    for r in range(len(items) + 1):
        for combo in combinations(items, r):
            yield frozenset(combo)


def _outside_components(g: Graph, vs: frozenset, es: frozenset,
                        bag: frozenset) -> list[tuple[frozenset, frozenset]]:
    """Components of the part not handled by the bag.

    An edge is outside when its endpoints are not all inside the bag; a
    vertex is outside when it is not in the bag.  Each component comes
    with its bag anchors included (vertices shared with the bag).
    """
    outside_edges = {e for e in es if not g.ends(e) <= bag}
    outside_vertices = vs - bag
    uf = UnionFind(outside_vertices)
    for e in sorted(outside_edges):
        # an outside edge always has at least one endpoint off the bag
        out = [v for v in sorted(g.ends(e)) if v not in bag]
        for v in out[1:]:
            uf.union(out[0], v)
    comp_edges: dict[int, set] = {}
    comp_verts: dict[int, set] = {}
    for v in outside_vertices:
        comp_verts.setdefault(uf.find(v), set()).add(v)
    for e in sorted(outside_edges):
        out = [v for v in sorted(g.ends(e)) if v not in bag]
        root = uf.find(out[0])
        comp_edges.setdefault(root, set()).add(e)
        comp_verts.setdefault(root, set()).update(g.ends(e))
    comps = [(frozenset(comp_verts[r]), frozenset(comp_edges.get(r, set())))
             for r in comp_verts]
    comps.sort(key=lambda c: min(c[0]))
    return comps


def _grouped(comps: list, mask: int) -> tuple[frozenset, frozenset]:
    vs: set = set()
    es: set = set()
    for i, (cv, ce) in enumerate(comps):
        if mask & (1 << i):
            vs |= cv
            es |= ce
    return frozenset(vs), frozenset(es)


def optimal_rec_tree_dec(sg: SourcedGraph,
                         max_vertices: int = 8) -> tuple[int, RecTreeDec]:
    """Minimum-width recursive tree decomposition by exhaustive search."""
    g = sg.graph
    if len(g.vertices) > max_vertices:
        raise OracleError(
            f"refusing tree-width search on {len(g.vertices)} > {max_vertices} vertices")
    memo: dict = {}
    active: set = set()

    def best(vs: frozenset, es: frozenset, xs: frozenset) -> tuple:
        if not vs and not es:
            return 0, REC_TREE_EMPTY
        key = (vs, es, xs)
        if key in memo:
            return memo[key]
        if key in active:
            return _INF, None
        active.add(key)
        best_w, best_t = _INF, None
        sub = g.subgraph(vs, es)
        for extra in _subsets(vs - xs):
            bag = xs | extra
            if len(bag) >= best_w:
                continue
            comps = _outside_components(sub, vs, es, bag)
            k = len(comps)
            for mask in range(1 << max(k - 1, 0)):
                v1, e1 = _grouped(comps, mask)
                v2, e2 = _grouped(comps, ((1 << k) - 1) ^ mask)
                w1, t1 = best(v1, e1, v1 & bag) if (v1 or e1) else (0, REC_TREE_EMPTY)
                if max(w1, len(bag)) >= best_w:
                    continue
                w2, t2 = best(v2, e2, v2 & bag) if (v2 or e2) else (0, REC_TREE_EMPTY)
                w = max(len(bag), w1, w2)
                if w < best_w and t1 is not None and t2 is not None:
                    best_w = w
                    best_t = RecTreeNode(SourcedGraph(sub, xs), bag, t1, t2)
        active.discard(key)
        if best_t is not None:
            memo[key] = (best_w, best_t)
        return best_w, best_t

    w, t = best(g.vertices, g.edges, sg.sources)
    if t is None:
        raise OracleError("no recursive tree decomposition found")
    return w, t


def optimal_rec_path_dec(sg: SourcedGraph,
                         max_vertices: int = 8) -> tuple[int, RecPathDec]:
    """Minimum-width recursive path decomposition by exhaustive search."""
    g = sg.graph
    if len(g.vertices) > max_vertices:
        raise OracleError(
            f"refusing path-width search on {len(g.vertices)} > {max_vertices} vertices")
    memo: dict = {}
    active: set = set()

    def best(vs: frozenset, es: frozenset, xs: frozenset) -> tuple:
        if not vs and not es:
            return 0, REC_PATH_EMPTY
        key = (vs, es, xs)
        if key in memo:
            return memo[key]
        if key in active:
            return _INF, None
        active.add(key)
        best_w, best_t = _INF, None
        sub = g.subgraph(vs, es)
        for extra in _subsets(vs - xs):
            bag = xs | extra
            if len(bag) >= best_w:
                continue
            # minimal suffix: keep exactly the edges not inside the bag,
            # and only the vertices they still need plus the uncovered ones
            rest_es = frozenset(e for e in es if not sub.ends(e) <= bag)
            rest_vs = (vs - bag) | _ends_cache(sub, rest_es)
            if (rest_vs, rest_es) == (vs, es):
                continue
            w1, t1 = best(rest_vs, rest_es, bag & rest_vs)
            w = max(len(bag), w1)
            if w < best_w and t1 is not None:
                best_w = w
                best_t = RecPathCons(SourcedGraph(sub, xs), bag, t1)
        active.discard(key)
        if best_t is not None:
            memo[key] = (best_w, best_t)
        return best_w, best_t

    w, t = best(g.vertices, g.edges, sg.sources)
    if t is None:
        raise OracleError("no recursive path decomposition found")
    return w, t


def _ends_cache(g: Graph, es: frozenset) -> frozenset:
    out: set = set()
    for e in es:
        out |= g.ends(e)
    return frozenset(out)


def exact_treewidth(g: Graph, max_vertices: int = 8) -> tuple[int, TreeDec]:
    """Exact tree width (max-bag-size convention) with a classic witness."""
    w, t = optimal_rec_tree_dec(SourcedGraph(g), max_vertices)
    return w, tree_from_recursive(t)


def exact_pathwidth(g: Graph, max_vertices: int = 8) -> tuple[int, PathDec]:
    """Exact path width (max-bag-size convention) with a classic witness."""
    w, t = optimal_rec_path_dec(SourcedGraph(g), max_vertices)
    return w, path_from_recursive(t)


def _leaf_trees(k: int) -> Iterable[tuple[Graph, dict]]:
    """All leaf-labelled cubic trees with k labelled leaves 0..k-1.

    Built by the standard edge-subdivision recursion, which enumerates
    each tree exactly once (no symmetry duplicates).
    """
    if k == 0:
        return
    if k == 1:
        yield Graph.discrete([0]), {0: 0}
        return
    if k == 2:
        yield Graph.from_edge_pairs([0, 1], [(0, 1)]), {0: 0, 1: 1}
        return

    def grow(tree: Graph, table: dict, next_leaf: int):
        if next_leaf == k:
            yield tree, table
            return
        fresh = max(tree.vertices) + 1
        for e in sorted(tree.edges):
            pts = sorted(tree.ends(e))
            u, w = pts[0], pts[-1]
            mid, leaf = fresh, fresh + 1
            ends = {i: tree.ends(i) for i in tree.edges if i != e}
            nid = max(tree.edges) + 1
            ends[e] = {u, mid}
            ends[nid] = {mid, w}
            ends[nid + 1] = {mid, leaf}
            bigger = Graph(tree.vertices | {mid, leaf}, ends)
            yield from grow(bigger, {**table, leaf: next_leaf}, next_leaf + 1)

    base = Graph.from_edge_pairs([0, 1], [(0, 1)])
    yield from grow(base, {0: 0, 1: 1}, 2)


def exact_branchwidth(g: Graph, max_edges: int = 7) -> tuple[int, BranchDec]:
    """Exact branch width with a classic witness.

    Edgeless graphs have width 0 with the empty decomposition; a single
    edge sits on a one-vertex tree with no tree edges, hence width 0.
    """
    edges = sorted(g.edges)
    if len(edges) > max_edges:
        raise OracleError(
            f"refusing branch-width search on {len(edges)} > {max_edges} edges")
    if not edges:
        return 0, BranchDec(Graph.empty(), {})
    best_w, best_dec = _INF, None
    for tree, table in _leaf_trees(len(edges)):
        dec = BranchDec(tree, {leaf: edges[i] for leaf, i in table.items()})
        w = branch_dec_width(dec, g)
        if w < best_w:
            best_w, best_dec = w, dec
            if best_w == 0:
                break
    return best_w, best_dec


# ---------------------------------------------------------------------------
# Graph catalog.


def enumerate_graphs(max_v: int, max_e: Optional[int] = None) -> list[Graph]:
    """All simple nonempty graphs with at most max_v vertices and max_e
    edges, one per isomorphism class, in a deterministic order."""
    if max_v > 6:
        raise OracleError(f"refusing to enumerate graphs on {max_v} > 6 vertices")
    out = []
    seen: set = set()
    for n in range(1, max_v + 1):
        all_pairs = list(combinations(range(n), 2))
        limit = len(all_pairs) if max_e is None else min(max_e, len(all_pairs))
        for m in range(limit + 1):
            for chosen in combinations(all_pairs, m):
                g = Graph.from_edge_pairs(range(n), chosen)
                key = canonical_key(g)
                if key in seen:
                    continue
                seen.add(key)
                out.append(g)
    return out


# ---------------------------------------------------------------------------
# Width cache, keyed by canonical graph form, JSON-backed.


@dataclass
class WidthCache:
    """Exact widths (and witnesses) memoized across calls; optionally
    persisted as JSON to keep repeated suites fast."""

    data: dict = field(default_factory=dict)

    @staticmethod
    def _key(g: Graph) -> str:
        return repr(canonical_key(g))

    def widths(self, g: Graph) -> tuple[int, int, int]:
        """(tree width, path width, branch width) for the graph."""
        key = self._key(g)
        if key not in self.data:
            tw, _ = exact_treewidth(g)
            pw, _ = exact_pathwidth(g)
            bw, _ = exact_branchwidth(g)
            self.data[key] = {"tw": tw, "pw": pw, "bw": bw}
        rec = self.data[key]
        return rec["tw"], rec["pw"], rec["bw"]

    def load(self, path: str) -> "WidthCache":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                self.data.update(json.load(fh))
        except FileNotFoundError:
            pass
        return self

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.data, fh, indent=1, sort_keys=True)
