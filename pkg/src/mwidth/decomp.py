"""Classic and recursive tree/path/branch decompositions of graphs.

Widths follow the convention WITHOUT the customary "-1": the width of a
tree or path decomposition is the size of its largest bag, so trees have
tree width 2 and a single vertex has tree width 1.  Branch width is the
maximum edge order.  Classic and recursive forms convert into each other;
the tree/path conversions preserve width exactly, the branch conversions
satisfy one-sided bounds that are asserted as hard postconditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .graph import (
    Graph,
    GraphError,
    SourcedGraph,
    ends_of_edge_set,
    graph_from_json,
    graph_to_json,
    is_subcubic_tree,
    sourced_graph_from_json,
    sourced_graph_to_json,
    tree_leaves,
)


class DecompositionError(ValueError):
    """Invalid decomposition where a valid one is required."""


class BoundViolation(AssertionError):
    """A proved width bound failed at runtime; this is a bug, not bad input."""


@dataclass(frozen=True)
class Check:
    """Validation verdict; `clause` names the first violated condition."""

    ok: bool
    clause: str = ""
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(clause: str, message: str) -> Check:
    return Check(False, clause, message)


_OK = Check(True)


# ---------------------------------------------------------------------------
# Classic decompositions.


@dataclass(frozen=True)
class TreeDec:
    """A tree shape together with a bag of graph vertices per tree vertex."""

    shape: Graph
    bags: tuple  # sorted (tree vertex, frozenset bag) pairs

    def __init__(self, shape: Graph, bags):
        object.__setattr__(self, "shape", shape)
        items = tuple(sorted((i, frozenset(b)) for i, b in dict(bags).items()))
        object.__setattr__(self, "bags", items)

    def bag(self, i: int) -> frozenset:
        for j, b in self.bags:
            if j == i:
                return b
        raise DecompositionError(f"no bag at tree vertex {i}")

    def bag_map(self) -> dict:
        return dict(self.bags)


@dataclass(frozen=True)
class PathDec:
    """A sequence of bags glued in a path shape."""

    bags: tuple

    def __init__(self, bags: Iterable):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in bags))


@dataclass(frozen=True)
class BranchDec:
    """A subcubic tree whose leaves enumerate the graph edges bijectively."""

    shape: Graph
    leaf_map: tuple  # sorted (leaf vertex, graph edge) pairs

    def __init__(self, shape: Graph, leaf_map):
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "leaf_map", tuple(sorted(dict(leaf_map).items())))

    def leaf_table(self) -> dict:
        return dict(self.leaf_map)


def _tree_paths_through(shape: Graph, i: int, k: int) -> list:
    """Vertices on the unique tree path from i to k (inclusive)."""
    if i == k:
        return [i]
    prev = {i: None}
    stack = [i]
    while stack:
        v = stack.pop()
        if v == k:
            break
        for w in sorted(shape.neighbours(v)):
            if w not in prev:
                prev[w] = v
                stack.append(w)
    if k not in prev:
        return []
    path = [k]
    while path[-1] != i:
        path.append(prev[path[-1]])
    return path


def validate_tree_dec(dec: TreeDec, g: Graph) -> Check:
    bags = dec.bag_map()
    if not dec.shape.is_tree():
        return _fail("shape", "decomposition shape is not a tree")
    if frozenset(bags) != dec.shape.vertices:
        return _fail("shape", "bag map is not total on the tree vertices")
    for i, b in bags.items():
        if not b <= g.vertices:
            return _fail("shape", f"bag {i} contains non-vertices {sorted(b - g.vertices)}")
    union = frozenset().union(*bags.values()) if bags else frozenset()
    if union != g.vertices:
        return _fail("1", f"vertices {sorted(g.vertices - union)} are in no bag")
    for e in sorted(g.edges):
        if not any(g.ends(e) <= b for b in bags.values()):
            return _fail("2", f"edge {e} has no bag containing both endpoints")
    nodes = sorted(dec.shape.vertices)
    for i in nodes:
        for k in nodes:
            if i >= k:
                continue
            common = bags[i] & bags[k]
            if not common:
                continue
            for j in _tree_paths_through(dec.shape, i, k):
                if not common <= bags[j]:
                    return _fail("3", f"t({i}) ∩ t({k}) not inside t({j})")
    return _OK


def validate_path_dec(dec: PathDec, g: Graph) -> Check:
    bags = dec.bags
    for idx, b in enumerate(bags):
        if not b <= g.vertices:
            return _fail("shape", f"bag {idx} contains non-vertices")
    union = frozenset().union(*bags) if bags else frozenset()
    if union != g.vertices:
        return _fail("1", f"vertices {sorted(g.vertices - union)} are in no bag")
    for e in sorted(g.edges):
        if not any(g.ends(e) <= b for b in bags):
            return _fail("2", f"edge {e} has no bag containing both endpoints")
    for i in range(len(bags)):
        for k in range(i + 2, len(bags)):
            common = bags[i] & bags[k]
            for j in range(i + 1, k):
                if not common <= bags[j]:
                    return _fail("3", f"p({i}) ∩ p({k}) not inside p({j})")
    return _OK


def validate_branch_dec(dec: BranchDec, g: Graph) -> Check:
    table = dec.leaf_table()
    if not g.edges:
        if dec.shape.vertices or table:
            return _fail("shape", "an edgeless graph admits only the empty decomposition")
        return _OK
    if not is_subcubic_tree(dec.shape):
        return _fail("shape", "decomposition shape is not a subcubic tree")
    leaves = tree_leaves(dec.shape)
    if frozenset(table) != leaves:
        return _fail("bijection", "leaf map domain differs from the tree leaves")
    values = sorted(table.values())
    if values != sorted(g.edges):
        return _fail("bijection", "leaf map is not a bijection onto the graph edges")
    return _OK


def tree_dec_width(dec: TreeDec, g: Graph) -> int:
    check = validate_tree_dec(dec, g)
    if not check:
        raise DecompositionError(f"invalid tree decomposition (clause {check.clause}): "
                                 f"{check.message}")
    return max((len(b) for _, b in dec.bags), default=0)


def path_dec_width(dec: PathDec, g: Graph) -> int:
    check = validate_path_dec(dec, g)
    if not check:
        raise DecompositionError(f"invalid path decomposition (clause {check.clause}): "
                                 f"{check.message}")
    return max((len(b) for b in dec.bags), default=0)


def edge_order(dec: BranchDec, g: Graph, e: int) -> int:
    """Number of graph vertices incident to both sides of the leaf split at e."""
    if e not in dec.shape.edges:
        raise GraphError(f"unknown decomposition tree edge {e}")
    pts = sorted(dec.shape.ends(e))
    side = _split_side(dec.shape, pts[0], pts[-1])
    table = dec.leaf_table()
    a_edges = {table[l] for l in table if l in side}
    b_edges = set(table.values()) - a_edges
    return len(ends_of_edge_set(g, a_edges) & ends_of_edge_set(g, b_edges))


def branch_dec_width(dec: BranchDec, g: Graph) -> int:
    check = validate_branch_dec(dec, g)
    if not check:
        raise DecompositionError(f"invalid branch decomposition (clause {check.clause}): "
                                 f"{check.message}")
    return max((edge_order(dec, g, e) for e in sorted(dec.shape.edges)), default=0)


# ---------------------------------------------------------------------------
# Recursive decompositions.  Each non-empty node carries the graph with
# sources that it decomposes.


class RecTreeDec:
    """Base class; instances are RecTreeEmpty or RecTreeNode."""

    __slots__ = ()


@dataclass(frozen=True)
class RecTreeEmpty(RecTreeDec):
    pass


@dataclass(frozen=True)
class RecTreeNode(RecTreeDec):
    graph: SourcedGraph
    bag: frozenset
    left: RecTreeDec
    right: RecTreeDec

    def __init__(self, graph: SourcedGraph, bag, left: RecTreeDec, right: RecTreeDec):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "bag", frozenset(bag))
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)


REC_TREE_EMPTY = RecTreeEmpty()


class RecPathDec:
    __slots__ = ()


@dataclass(frozen=True)
class RecPathEmpty(RecPathDec):
    pass


@dataclass(frozen=True)
class RecPathCons(RecPathDec):
    graph: SourcedGraph
    bag: frozenset
    tail: RecPathDec

    def __init__(self, graph: SourcedGraph, bag, tail: RecPathDec):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "bag", frozenset(bag))
        object.__setattr__(self, "tail", tail)


REC_PATH_EMPTY = RecPathEmpty()


class RecBranchDec:
    __slots__ = ()


def _empty_sourced() -> SourcedGraph:
    return SourcedGraph(Graph.empty())


@dataclass(frozen=True)
class RecBranchEmpty(RecBranchDec):
    """Decomposition of an edgeless graph.

    The graph may still have vertices; recording it keeps node-level
    conditions (vertex cover, boundaries) checkable when an edgeless part
    sits under a node.
    """

    graph: SourcedGraph = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.graph is None:
            object.__setattr__(self, "graph", _empty_sourced())


@dataclass(frozen=True)
class RecBranchLeaf(RecBranchDec):
    graph: SourcedGraph


@dataclass(frozen=True)
class RecBranchNode(RecBranchDec):
    graph: SourcedGraph
    left: RecBranchDec
    right: RecBranchDec


REC_BRANCH_EMPTY = RecBranchEmpty()


def _child_sourced(child: Union[RecTreeDec, RecPathDec, RecBranchDec]) -> SourcedGraph:
    if isinstance(child, (RecTreeEmpty, RecPathEmpty)):
        return SourcedGraph(Graph.empty())
    return child.graph


def _is_subgraph(sub: Graph, sup: Graph) -> bool:
    if not sub.vertices <= sup.vertices or not sub.edges <= sup.edges:
        return False
    return all(sub.ends(e) == sup.ends(e) for e in sub.edges)


def validate_rec_tree_dec(t: RecTreeDec, sg: SourcedGraph) -> Check:
    if isinstance(t, RecTreeEmpty):
        if sg.is_empty():
            return _OK
        return _fail("empty", "empty decomposition of a non-empty graph")
    if not isinstance(t, RecTreeNode):
        return _fail("type", f"not a recursive tree decomposition: {t!r}")
    if t.graph != sg:
        return _fail("graph", "node does not decompose the expected graph with sources")
    g, x, bag = sg.graph, sg.sources, t.bag
    if not bag <= g.vertices:
        return _fail("shape", "bag contains non-vertices")
    g1, g2 = _child_sourced(t.left), _child_sourced(t.right)
    for i, gi in ((1, g1), (2, g2)):
        if not _is_subgraph(gi.graph, g):
            return _fail("subgraph", f"child {i} is not a subgraph")
    if not x <= bag:
        return _fail("i", f"sources {sorted(x - bag)} missing from the bag")
    if bag | g1.vertices | g2.vertices != g.vertices:
        return _fail("ii", "bag and children do not cover the vertices")
    for i, gi in ((1, g1), (2, g2)):
        if gi.sources != gi.vertices & bag:
            return _fail("iii", f"child {i} sources differ from its bag intersection")
    if not g1.vertices & g2.vertices <= bag:
        return _fail("iv", "children share vertices outside the bag")
    if g1.edges & g2.edges:
        return _fail("v", "children share edges")
    rest = g.edges - (g1.edges | g2.edges)
    if not ends_of_edge_set(g, rest) <= bag:
        return _fail("vi", "an uncovered edge leaves the bag")
    for child, gi in ((t.left, g1), (t.right, g2)):
        sub = validate_rec_tree_dec(child, gi)
        if not sub:
            return sub
    return _OK


def validate_rec_path_dec(t: RecPathDec, sg: SourcedGraph) -> Check:
    if isinstance(t, RecPathEmpty):
        if sg.is_empty():
            return _OK
        return _fail("empty", "empty decomposition of a non-empty graph")
    if not isinstance(t, RecPathCons):
        return _fail("type", f"not a recursive path decomposition: {t!r}")
    if t.graph != sg:
        return _fail("graph", "node does not decompose the expected graph with sources")
    g, x, bag = sg.graph, sg.sources, t.bag
    if not bag <= g.vertices:
        return _fail("shape", "bag contains non-vertices")
    gp = _child_sourced(t.tail)
    if not _is_subgraph(gp.graph, g):
        return _fail("subgraph", "tail is not a subgraph")
    if not x <= bag:
        return _fail("i", f"sources {sorted(x - bag)} missing from the first bag")
    if bag | gp.vertices != g.vertices:
        return _fail("ii", "bag and tail do not cover the vertices")
    if gp.sources != bag & gp.vertices:
        return _fail("iii", "tail sources differ from the bag intersection")
    if not ends_of_edge_set(g, g.edges - gp.edges) <= bag:
        return _fail("iv", "an edge outside the tail leaves the first bag")
    return validate_rec_path_dec(t.tail, gp)


def validate_rec_branch_dec(t: RecBranchDec, sg: SourcedGraph) -> Check:
    if isinstance(t, RecBranchEmpty):
        if sg.graph.edges:
            return _fail("empty", "empty decomposition of a graph with edges")
        if not t.graph.is_empty() and t.graph != sg:
            return _fail("graph", "empty decomposition records a different graph")
        return _OK
    if isinstance(t, RecBranchLeaf):
        if t.graph != sg:
            return _fail("graph", "leaf does not decompose the expected graph with sources")
        if len(sg.graph.edges) != 1:
            return _fail("leaf", "leaves carry exactly one edge")
        return _OK
    if not isinstance(t, RecBranchNode):
        return _fail("type", f"not a recursive branch decomposition: {t!r}")
    if t.graph != sg:
        return _fail("graph", "node does not decompose the expected graph with sources")
    g, x = sg.graph, sg.sources
    g1, g2 = _child_sourced(t.left), _child_sourced(t.right)
    for i, gi in ((1, g1), (2, g2)):
        if not _is_subgraph(gi.graph, g):
            return _fail("subgraph", f"child {i} is not a subgraph")
    if g1.edges & g2.edges or g1.edges | g2.edges != g.edges:
        return _fail("i", "children edges do not partition the edges")
    if g1.vertices | g2.vertices != g.vertices:
        return _fail("ii", "children do not cover the vertices")
    shared = g1.vertices & g2.vertices
    for i, gi in ((1, g1), (2, g2)):
        if gi.sources != shared | (x & gi.vertices):
            return _fail("iii", f"child {i} boundary differs from the boundary formula")
    for child, gi in ((t.left, g1), (t.right, g2)):
        sub = validate_rec_branch_dec(child, gi)
        if not sub:
            return sub
    return _OK


def _rec_tree_width_raw(t: RecTreeDec) -> int:
    if isinstance(t, RecTreeEmpty):
        return 0
    return max(len(t.bag), _rec_tree_width_raw(t.left), _rec_tree_width_raw(t.right))


def _rec_path_width_raw(t: RecPathDec) -> int:
    if isinstance(t, RecPathEmpty):
        return 0
    return max(len(t.bag), _rec_path_width_raw(t.tail))


def _rec_branch_width_raw(t: RecBranchDec) -> int:
    if isinstance(t, RecBranchEmpty):
        return 0
    if isinstance(t, RecBranchLeaf):
        return len(t.graph.sources)
    return max(len(t.graph.sources), _rec_branch_width_raw(t.left),
               _rec_branch_width_raw(t.right))


def rec_tree_width(t: RecTreeDec, sg: Optional[SourcedGraph] = None) -> int:
    if sg is None and not isinstance(t, RecTreeEmpty):
        sg = t.graph
    if sg is not None:
        check = validate_rec_tree_dec(t, sg)
        if not check:
            raise DecompositionError(
                f"invalid recursive tree decomposition (clause {check.clause}): "
                f"{check.message}")
    return _rec_tree_width_raw(t)


def rec_path_width(t: RecPathDec, sg: Optional[SourcedGraph] = None) -> int:
    if sg is None and not isinstance(t, RecPathEmpty):
        sg = t.graph
    if sg is not None:
        check = validate_rec_path_dec(t, sg)
        if not check:
            raise DecompositionError(
                f"invalid recursive path decomposition (clause {check.clause}): "
                f"{check.message}")
    return _rec_path_width_raw(t)


def rec_branch_width(t: RecBranchDec, sg: Optional[SourcedGraph] = None) -> int:
    if sg is None and not isinstance(t, RecBranchEmpty):
        sg = t.graph
    if sg is not None:
        check = validate_rec_branch_dec(t, sg)
        if not check:
            raise DecompositionError(
                f"invalid recursive branch decomposition (clause {check.clause}): "
                f"{check.message}")
    return _rec_branch_width_raw(t)


def rec_branch_subtree(t: RecBranchDec, path: Iterable[int]) -> RecBranchDec:
    """Subtree at a 0/1 path from the root (0 = left, 1 = right)."""
    cur = t
    for step in path:
        if not isinstance(cur, RecBranchNode):
            raise GraphError(f"no subtree at path step {step}")
        cur = cur.left if step == 0 else cur.right
    return cur


def boundary_global(t: RecBranchDec, path: Iterable[int]) -> frozenset:
    """Boundary of the subtree at `path`, computed by the global formula:
    vertices of the subtree that are sources of the whole graph or appear
    in some disjoint subtree."""
    path = tuple(path)
    target = rec_branch_subtree(t, path)
    if isinstance(target, RecBranchEmpty):
        return frozenset()
    outside: set = set()
    cur = t
    for step in path:
        sibling = cur.right if step == 0 else cur.left
        sib = _child_sourced(sibling)
        outside |= sib.vertices
        cur = cur.left if step == 0 else cur.right
    root = _child_sourced(t)
    return target.graph.vertices & (root.sources | frozenset(outside))


# ---------------------------------------------------------------------------
# Classic <-> recursive translations.


def _shape_components_at(shape: Graph, r: int) -> list[tuple[Graph, int]]:
    """Subtrees hanging off r, each with its root (the neighbour of r)."""
    rest_vs = shape.vertices - {r}
    rest_es = {e for e in shape.edges if r not in shape.ends(e)}
    rest = shape.subgraph(rest_vs, rest_es)
    out = []
    for v in sorted(shape.neighbours(r)):
        comp_vs, comp_es = next((vs, es) for vs, es in rest.connected_components()
                                if v in vs)
        out.append((rest.subgraph(comp_vs, comp_es), v))
    return out


def tree_to_recursive(dec: TreeDec, sg: SourcedGraph, root: int) -> RecTreeDec:
    """Recursive form rooted at `root`; width is preserved exactly."""
    check = validate_tree_dec(dec, sg.graph)
    if not check:
        raise DecompositionError(f"invalid tree decomposition (clause {check.clause}): "
                                 f"{check.message}")
    bags = dec.bag_map()
    if root not in bags:
        raise DecompositionError(f"root {root} is not a tree vertex")
    if not sg.sources <= bags[root]:
        raise DecompositionError("the sources are not contained in the root bag")

    def bag_union(shape: Graph) -> frozenset:
        return frozenset().union(*(bags[i] for i in shape.vertices)) if shape.vertices \
            else frozenset()

    def convert(shape: Graph, r: int, gamma: SourcedGraph) -> RecTreeDec:
        vp = bags[r]
        subtrees = _shape_components_at(shape, r)
        t1, t2 = split(subtrees, gamma, vp)
        return RecTreeNode(gamma, vp, t1, t2)

    def group_graph(shapes: list, gamma: SourcedGraph, used_edges: set,
                    vp: frozenset) -> SourcedGraph:
        vs = frozenset().union(*(bag_union(s) for s, _ in shapes)) if shapes \
            else frozenset()
        es = {e for e in gamma.edges - frozenset(used_edges)
              if gamma.graph.ends(e) <= vs}
        used_edges.update(es)
        return SourcedGraph(gamma.graph.subgraph(vs, es), vs & vp)

    def split(subtrees: list, gamma: SourcedGraph,
              vp: frozenset) -> tuple[RecTreeDec, RecTreeDec]:
        # first subtree becomes the left child, the rest are chained on the right
        if not subtrees:
            return REC_TREE_EMPTY, REC_TREE_EMPTY
        used: set = set()
        first = group_graph(subtrees[:1], gamma, used, vp)
        rest = group_graph(subtrees[1:], gamma, used, vp)
        t1 = convert(subtrees[0][0], subtrees[0][1], first)
        t2 = chain(subtrees[1:], rest, vp)
        return t1, t2

    def chain(subtrees: list, gamma: SourcedGraph, vp: frozenset) -> RecTreeDec:
        if not subtrees:
            return REC_TREE_EMPTY
        if len(subtrees) == 1:
            return convert(subtrees[0][0], subtrees[0][1], gamma)
        used: set = set()
        first = group_graph(subtrees[:1], gamma, used, vp)
        rest = group_graph(subtrees[1:], gamma, used, vp)
        t1 = convert(subtrees[0][0], subtrees[0][1], first)
        t2 = chain(subtrees[1:], rest, vp)
        return RecTreeNode(gamma, gamma.sources, t1, t2)

    if sg.is_empty():
        return REC_TREE_EMPTY
    result = convert(dec.shape, root, sg)
    got = _rec_tree_width_raw(result)
    want = max((len(b) for b in bags.values()), default=0)
    if got != want:
        raise BoundViolation(f"tree_to_recursive changed the width: {got} != {want}")
    return result


def tree_from_recursive(t: RecTreeDec) -> TreeDec:
    """Classic form with the same bags; width is preserved exactly."""
    counter = [0]
    vertices: list[int] = []
    edges: list[tuple[int, int]] = []
    bags: dict[int, frozenset] = {}

    def walk(node: RecTreeDec) -> Optional[int]:
        if isinstance(node, RecTreeEmpty):
            return None
        i = counter[0]
        counter[0] += 1
        vertices.append(i)
        bags[i] = node.bag
        for child in (node.left, node.right):
            j = walk(child)
            if j is not None:
                edges.append((i, j))
        return i

    root = walk(t)
    if root is None:
        return TreeDec(Graph.discrete([0]), {0: frozenset()})
    dec = TreeDec(Graph.from_edge_pairs(vertices, edges), bags)
    if max((len(b) for b in bags.values()), default=0) != _rec_tree_width_raw(t):
        raise BoundViolation("tree_from_recursive changed the width")
    return dec


def path_to_recursive(dec: PathDec, sg: SourcedGraph) -> RecPathDec:
    """Recursive form peeling bags off the front; width is preserved exactly."""
    check = validate_path_dec(dec, sg.graph)
    if not check:
        raise DecompositionError(f"invalid path decomposition (clause {check.clause}): "
                                 f"{check.message}")
    if dec.bags and not sg.sources <= dec.bags[0]:
        raise DecompositionError("the sources are not contained in the first bag")
    if not dec.bags or (len(dec.bags) == 1 and not dec.bags[0]):
        if sg.is_empty():
            return REC_PATH_EMPTY
        raise DecompositionError("empty decomposition of a non-empty graph")

    def peel(bags: tuple, gamma: SourcedGraph) -> RecPathDec:
        v1 = bags[0]
        if len(bags) == 1:
            return RecPathCons(gamma, v1, REC_PATH_EMPTY)
        vrest = frozenset().union(*bags[1:])
        erest = {e for e in gamma.edges if gamma.graph.ends(e) <= vrest}
        tail_g = SourcedGraph(gamma.graph.subgraph(vrest, erest), v1 & vrest)
        return RecPathCons(gamma, v1, peel(bags[1:], tail_g))

    result = peel(dec.bags, sg)
    if _rec_path_width_raw(result) != max(len(b) for b in dec.bags):
        raise BoundViolation("path_to_recursive changed the width")
    return result


def path_from_recursive(t: RecPathDec) -> PathDec:
    bags = []
    cur = t
    while isinstance(cur, RecPathCons):
        bags.append(cur.bag)
        cur = cur.tail
    dec = PathDec(bags)
    if max((len(b) for b in bags), default=0) != _rec_path_width_raw(t):
        raise BoundViolation("path_from_recursive changed the width")
    return dec


def _prune_unassigned(shape: Graph, assigned: frozenset) -> Graph:
    """Iteratively drop degree<=1 vertices that carry no edge assignment."""
    g = shape
    while True:
        drop = [v for v in sorted(g.vertices)
                if v not in assigned and g.degree(v) <= 1]
        if not drop:
            return g
        v = drop[0]
        g = g.subgraph(g.vertices - {v}, {e for e in g.edges if v not in g.ends(e)})


def branch_to_recursive(dec: BranchDec, sg: SourcedGraph) -> RecBranchDec:
    """Recursive form obtained by rooting the tree at a balanced edge.

    Below the root split the recursion follows the tree itself, so every
    subtree's edge set is one side of a split of the original tree; this
    is what keeps the result width within classic width + source count.
    (Re-choosing split edges at deeper levels can manufacture "middle"
    edge sets whose boundary exceeds every single-edge order.)
    """
    check = validate_branch_dec(dec, sg.graph)
    if not check:
        raise DecompositionError(f"invalid branch decomposition (clause {check.clause}): "
                                 f"{check.message}")
    classic_width = branch_dec_width(dec, sg.graph)
    shape = dec.shape
    table = dec.leaf_table()
    g, x = sg.graph, sg.sources

    if not g.edges:
        return REC_BRANCH_EMPTY
    if len(g.edges) == 1:
        return RecBranchLeaf(sg)

    def edges_below(v: int, parent: Optional[int]) -> frozenset:
        out = {table[v]} if v in table else set()
        for w in shape.neighbours(v):
            if w != parent:
                out |= edges_below(w, v)
        return frozenset(out)

    def down(v: int, parent: Optional[int], gamma: SourcedGraph) -> RecBranchDec:
        if v in table:
            return RecBranchLeaf(gamma)
        kids = [w for w in sorted(shape.neighbours(v)) if w != parent]
        if len(kids) == 1:
            return down(kids[0], v, gamma)
        e1 = edges_below(kids[0], v)
        g1, g2 = _branch_split(gamma, e1)
        return RecBranchNode(gamma, down(kids[0], v, g1), down(kids[1], v, g2))

    def leaf_count_below(v: int, parent: Optional[int]) -> int:
        n = 1 if v in table else 0
        for w in shape.neighbours(v):
            if w != parent:
                n += leaf_count_below(w, v)
        return n

    total = len(table)
    best_e = min(sorted(shape.edges),
                 key=lambda e: (abs(total - 2 * leaf_count_below(
                     min(shape.ends(e)), max(shape.ends(e)))), e))
    u, w = min(shape.ends(best_e)), max(shape.ends(best_e))
    g1, g2 = _branch_split(sg, edges_below(u, w))
    result = RecBranchNode(sg, down(u, w, g1), down(w, u, g2))
    got = _rec_branch_width_raw(result)
    if got > classic_width + len(sg.sources):
        raise BoundViolation(
            f"branch_to_recursive exceeded the bound: {got} > "
            f"{classic_width} + {len(sg.sources)}")
    return result


def _branch_split(gamma: SourcedGraph, e1: frozenset) -> tuple[SourcedGraph, SourcedGraph]:
    """Split a graph with sources along an edge bipartition; uncovered
    isolated vertices go with the second part."""
    g, x = gamma.graph, gamma.sources
    e2 = g.edges - e1
    v1 = ends_of_edge_set(g, e1)
    v2 = ends_of_edge_set(g, e2) | (g.vertices - v1)
    shared = v1 & v2
    return (SourcedGraph(g.subgraph(v1, e1), shared | (x & v1)),
            SourcedGraph(g.subgraph(v2, e2), shared | (x & v2)))


def _split_side(shape: Graph, u: int, w: int) -> frozenset:
    """Vertices on u's side after deleting the edge between u and w."""
    side = set()
    stack = [u]
    seen = {u, w}
    while stack:
        v = stack.pop()
        side.add(v)
        for x in shape.neighbours(v):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return frozenset(side)


def branch_from_recursive(t: RecBranchDec) -> BranchDec:
    """Forget the recursive structure; the classic width never exceeds the
    recursive width."""
    counter = [0]
    vertices: list[int] = []
    edges: list[tuple[int, int]] = []
    table: dict[int, int] = {}

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def walk(node: RecBranchDec) -> Optional[int]:
        if isinstance(node, RecBranchEmpty):
            return None
        if isinstance(node, RecBranchLeaf):
            i = fresh()
            vertices.append(i)
            table[i] = min(node.graph.edges)
            return i
        kids = [walk(node.left), walk(node.right)]
        kids = [k for k in kids if k is not None]
        if not kids:
            return None
        if len(kids) == 1:
            # a unary node adds nothing to the tree; splice it out
            return kids[0]
        i = fresh()
        vertices.append(i)
        for k in kids:
            edges.append((i, k))
        return i

    root = walk(t)
    if root is None:
        return BranchDec(Graph.empty(), {})
    dec = BranchDec(Graph.from_edge_pairs(vertices, edges), table)
    sg = _child_sourced(t)
    got = branch_dec_width(dec, sg.graph)
    if got > _rec_branch_width_raw(t):
        raise BoundViolation(
            f"branch_from_recursive exceeded the recursive width: "
            f"{got} > {_rec_branch_width_raw(t)}")
    return dec


# ---------------------------------------------------------------------------
# Serialization.


def tree_dec_to_json(dec: TreeDec) -> dict:
    return {"kind": "tree", "shape": graph_to_json(dec.shape),
            "bags": {str(i): sorted(b) for i, b in dec.bags}}


def path_dec_to_json(dec: PathDec) -> dict:
    return {"kind": "path", "bags": [sorted(b) for b in dec.bags]}


def branch_dec_to_json(dec: BranchDec) -> dict:
    return {"kind": "branch", "shape": graph_to_json(dec.shape),
            "leaf_map": {str(l): e for l, e in dec.leaf_map}}


def rec_tree_dec_to_json(t: RecTreeDec) -> dict:
    if isinstance(t, RecTreeEmpty):
        return {"kind": "rec-tree", "empty": True}
    return {"kind": "rec-tree", "graph": sourced_graph_to_json(t.graph),
            "bag": sorted(t.bag), "left": rec_tree_dec_to_json(t.left),
            "right": rec_tree_dec_to_json(t.right)}


def rec_path_dec_to_json(t: RecPathDec) -> dict:
    if isinstance(t, RecPathEmpty):
        return {"kind": "rec-path", "empty": True}
    return {"kind": "rec-path", "graph": sourced_graph_to_json(t.graph),
            "bag": sorted(t.bag), "tail": rec_path_dec_to_json(t.tail)}


def rec_branch_dec_to_json(t: RecBranchDec) -> dict:
    if isinstance(t, RecBranchEmpty):
        out = {"kind": "rec-branch", "empty": True}
        if not t.graph.is_empty():
            out["graph"] = sourced_graph_to_json(t.graph)
        return out
    if isinstance(t, RecBranchLeaf):
        return {"kind": "rec-branch", "leaf": True,
                "graph": sourced_graph_to_json(t.graph)}
    return {"kind": "rec-branch", "graph": sourced_graph_to_json(t.graph),
            "left": rec_branch_dec_to_json(t.left),
            "right": rec_branch_dec_to_json(t.right)}


def decomposition_from_json(data: dict):
    kind = data.get("kind")
    if kind == "tree":
        return TreeDec(graph_from_json(data["shape"]),
                       {int(i): set(b) for i, b in data["bags"].items()})
    if kind == "path":
        return PathDec([set(b) for b in data["bags"]])
    if kind == "branch":
        return BranchDec(graph_from_json(data["shape"]),
                         {int(l): e for l, e in data["leaf_map"].items()})
    if kind == "rec-tree":
        if data.get("empty"):
            return REC_TREE_EMPTY
        return RecTreeNode(sourced_graph_from_json(data["graph"]), set(data["bag"]),
                           decomposition_from_json(data["left"]),
                           decomposition_from_json(data["right"]))
    if kind == "rec-path":
        if data.get("empty"):
            return REC_PATH_EMPTY
        return RecPathCons(sourced_graph_from_json(data["graph"]), set(data["bag"]),
                           decomposition_from_json(data["tail"]))
    if kind == "rec-branch":
        if data.get("empty"):
            if "graph" in data:
                return RecBranchEmpty(sourced_graph_from_json(data["graph"]))
            return REC_BRANCH_EMPTY
        if data.get("leaf"):
            return RecBranchLeaf(sourced_graph_from_json(data["graph"]))
        return RecBranchNode(sourced_graph_from_json(data["graph"]),
                             decomposition_from_json(data["left"]),
                             decomposition_from_json(data["right"]))
    raise DecompositionError(f"unknown decomposition kind {kind!r}")


def decomposition_to_json(dec) -> dict:
    if isinstance(dec, TreeDec):
        return tree_dec_to_json(dec)
    if isinstance(dec, PathDec):
        return path_dec_to_json(dec)
    if isinstance(dec, BranchDec):
        return branch_dec_to_json(dec)
    if isinstance(dec, RecTreeDec):
        return rec_tree_dec_to_json(dec)
    if isinstance(dec, RecPathDec):
        return rec_path_dec_to_json(dec)
    if isinstance(dec, RecBranchDec):
        return rec_branch_dec_to_json(dec)
    raise DecompositionError(f"not a decomposition: {dec!r}")


def decomposition_to_dot(dec) -> str:
    """DOT rendering of a decomposition tree with bag / edge labels."""
    lines = ["graph decomposition {", "  node [shape=box];"]

    def bag_label(b) -> str:
        return "{" + ",".join(str(v) for v in sorted(b)) + "}"

    if isinstance(dec, TreeDec):
        for i, b in dec.bags:
            lines.append(f'  n{i} [label="{bag_label(b)}"];')
        for e in sorted(dec.shape.edges):
            pts = sorted(dec.shape.ends(e))
            lines.append(f"  n{pts[0]} -- n{pts[-1]};")
    elif isinstance(dec, PathDec):
        for i, b in enumerate(dec.bags):
            lines.append(f'  n{i} [label="{bag_label(b)}"];')
        for i in range(len(dec.bags) - 1):
            lines.append(f"  n{i} -- n{i + 1};")
    elif isinstance(dec, BranchDec):
        table = dec.leaf_table()
        for v in sorted(dec.shape.vertices):
            label = f"e{table[v]}" if v in table else ""
            lines.append(f'  n{v} [label="{label}"];')
        for e in sorted(dec.shape.edges):
            pts = sorted(dec.shape.ends(e))
            lines.append(f"  n{pts[0]} -- n{pts[-1]};")
    elif isinstance(dec, (RecTreeDec, RecPathDec, RecBranchDec)):
        counter = [0]

        def walk(node) -> Optional[int]:
            if isinstance(node, (RecTreeEmpty, RecPathEmpty, RecBranchEmpty)):
                return None
            i = counter[0]
            counter[0] += 1
            if isinstance(node, RecTreeNode):
                label = bag_label(node.bag)
                kids = [node.left, node.right]
            elif isinstance(node, RecPathCons):
                label = bag_label(node.bag)
                kids = [node.tail]
            elif isinstance(node, RecBranchLeaf):
                label = f"e{min(node.graph.edges)}"
                kids = []
            else:
                label = bag_label(node.graph.sources)
                kids = [node.left, node.right]
            lines.append(f'  n{i} [label="{label}"];')
            for kid in kids:
                j = walk(kid)
                if j is not None:
                    lines.append(f"  n{i} -- n{j};")
            return i

        walk(dec)
    else:
        raise DecompositionError(f"not a decomposition: {dec!r}")
    lines.append("}")
    return "\n".join(lines)
