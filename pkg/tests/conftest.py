"""Shared builders: named small graphs, symbolic example terms, random
cospans, and exhaustive small-decomposition enumerators.  Also collects
acceptance-criterion verdicts and prints one line per criterion at the
end of the run."""

import random
from itertools import combinations, product

import pytest

from mwidth import (
    Cospan,
    Graph,
    PathDec,
    SymbolicSignature,
    TreeDec,
    canonical_key,
)
from mwidth.terms import Compose, Leaf, Tensor

ACCEPTANCE_RESULTS = []


def record_acceptance(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((criterion, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE_RESULTS:
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{verdict}  {criterion}: {detail}")


# ---------------------------------------------------------------------------
# Named graphs.


def k(n: int) -> Graph:
    return Graph.from_edge_pairs(range(n), list(combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph.from_edge_pairs(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edge_pairs(range(n), [(i, (i + 1) % n) for i in range(n)])


@pytest.fixture
def k2():
    return k(2)


@pytest.fixture
def k3():
    return k(3)


@pytest.fixture
def k4():
    return k(4)


@pytest.fixture
def p3():
    return path_graph(3)


# ---------------------------------------------------------------------------
# Symbolic terms: a prop with f : 1 -> 2 and g : 2 -> 1, both of weight 2.


def fg_signature() -> SymbolicSignature:
    sig = SymbolicSignature()
    sig.add("f", 1, 2, 2)
    sig.add("g", 2, 1, 2)
    return sig


def example_fan_term() -> Compose:
    """f ; (f x f) ; (g x g) ; g decomposed with every cut on two wires."""
    fg = Compose(Leaf("f"), 2, Leaf("g"))
    return Compose(Leaf("f"), 2, Compose(Tensor(fg, fg), 2, Leaf("g")))


def doubling_balanced(n: int) -> Compose:
    """The defining factorization of the doubling family; width stays 2."""
    if n == 0:
        return Compose(Leaf("f"), 2, Leaf("g"))
    inner = Tensor(doubling_balanced(n - 1), doubling_balanced(n - 1))
    return Compose(Leaf("f"), 2, Compose(inner, 2, Leaf("g")))


def _fan_out(depth: int):
    if depth == 1:
        return Leaf("f")
    return Compose(Leaf("f"), 2, Tensor(_fan_out(depth - 1), _fan_out(depth - 1)))


def _fan_in(depth: int):
    if depth == 1:
        return Leaf("g")
    return Compose(Tensor(_fan_in(depth - 1), _fan_in(depth - 1)), 2, Leaf("g"))


def doubling_naive(n: int) -> Compose:
    """Cut the doubling morphism across its full middle of 2**n wires:
    a fan-out of f's, a row of 2**n seed blocks, and a fan-in of g's."""
    if n == 0:
        return Compose(Leaf("f"), 2, Leaf("g"))
    row = Compose(Leaf("f"), 2, Leaf("g"))
    for _ in range(n):
        row = Tensor(row, row)
    return Compose(_fan_out(n), 2 ** n, Compose(row, 2 ** n, _fan_in(n)))


# ---------------------------------------------------------------------------
# Random structures (seeded by the caller).


def random_graph(rng: random.Random, max_v: int = 5, max_e: int = 7,
                 multigraph: bool = True) -> Graph:
    n = rng.randint(0, max_v)
    m = rng.randint(0, max_e) if n else 0
    pairs = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if not multigraph and (u == v or (u, v) in pairs or (v, u) in pairs):
            continue
        pairs.append((u, v))
    return Graph.from_edge_pairs(range(n), pairs)


def random_cospan(rng: random.Random, left: int, right: int,
                  max_v: int = 4, max_e: int = 4) -> Cospan:
    n = rng.randint(1, max_v) if (left or right) else rng.randint(0, max_v)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, max_e))] \
        if n else []
    apex = Graph.from_edge_pairs(range(n), pairs)
    lp = tuple(rng.randrange(n) for _ in range(left))
    rp = tuple(rng.randrange(n) for _ in range(right))
    return Cospan(apex, lp, rp)


# ---------------------------------------------------------------------------
# Exhaustive enumeration of valid classic decompositions on small graphs.


def _tree_shapes(max_nodes: int):
    """All tree shapes with 1..max_nodes vertices, one per iso class."""
    seen = set()
    out = []
    trees = {1: [Graph.discrete([0])]}
    for n in range(2, max_nodes + 1):
        grown = []
        for t in trees[n - 1]:
            for attach in sorted(t.vertices):
                pairs = [tuple(sorted(t.ends(e))) for e in sorted(t.edges)]
                g = Graph.from_edge_pairs(range(n), pairs + [(attach, n - 1)])
                grown.append(g)
        trees[n] = grown
    for n in range(1, max_nodes + 1):
        for t in trees[n]:
            key = canonical_key(t)
            if key not in seen:
                seen.add(key)
                out.append(t)
    return out


def _connected_subsets(shape: Graph):
    nodes = sorted(shape.vertices)
    subs = []
    for r in range(1, len(nodes) + 1):
        for combo in combinations(nodes, r):
            sub = shape.subgraph(combo, {e for e in shape.edges
                                         if shape.ends(e) <= set(combo)})
            if sub.is_connected():
                subs.append(frozenset(combo))
    return subs


def all_tree_decs(g: Graph, max_nodes: int = None):
    """Every valid tree decomposition with at most max(|V|, 1) tree nodes.

    Built from per-vertex connected host sets (which forces the glueing
    clause), then filtered by edge cover; everything yielded passes the
    full validator by construction.
    """
    if max_nodes is None:
        max_nodes = max(len(g.vertices), 1)
    vs = sorted(g.vertices)
    for shape in _tree_shapes(max_nodes):
        hosts = _connected_subsets(shape)
        for choice in product(hosts, repeat=len(vs)):
            bags = {i: frozenset(v for v, hs in zip(vs, choice) if i in hs)
                    for i in shape.vertices}
            if not all(any(g.ends(e) <= b for b in bags.values())
                       for e in g.edges):
                continue
            yield TreeDec(shape, bags)


def _intervals(length: int):
    return [frozenset(range(i, j + 1))
            for i in range(length) for j in range(i, length)]


def all_path_decs(g: Graph, max_len: int = None):
    """Every valid path decomposition with at most max(|V|, 1) bags."""
    if max_len is None:
        max_len = max(len(g.vertices), 1)
    vs = sorted(g.vertices)
    for length in range(1, max_len + 1):
        spans = _intervals(length)
        for choice in product(spans, repeat=len(vs)):
            bags = [frozenset(v for v, span in zip(vs, choice) if i in span)
                    for i in range(length)]
            if not all(any(g.ends(e) <= b for b in bags) for e in g.edges):
                continue
            yield PathDec(bags)
