"""Finite undirected multigraphs, graphs with sources, morphisms, and colimits.

Vertices and edges are small non-negative integer ids.  Self-loops are
edges whose endpoint set has one element; parallel edges are distinct ids
with equal endpoint sets.  All constructions renumber ids deterministically
(order-preserving on first appearance) so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping, Optional


class GraphError(ValueError):
    """Malformed graph data or an argument outside its domain."""


class GraphParseError(GraphError):
    """Text-format parse failure; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Graph:
    """Finite undirected multigraph with explicit edge ids."""

    __slots__ = ("vertices", "edges", "_ends", "_hash")

    def __init__(self, vertices: Iterable[int], ends: Mapping[int, Iterable[int]]):
        self.vertices = frozenset(vertices)
        table = {}
        for e, pts in dict(ends).items():
            pts = frozenset(pts)
            if not 1 <= len(pts) <= 2:
                raise GraphError(f"edge {e} must have 1 or 2 endpoints, got {len(pts)}")
            if not pts <= self.vertices:
                raise GraphError(f"edge {e} has endpoints {sorted(pts)} outside the vertex set")
            table[e] = pts
        self._ends = table
        self.edges = frozenset(table)
        self._hash = hash((self.vertices, frozenset(table.items())))

    @staticmethod
    def discrete(vertices: Iterable[int]) -> "Graph":
        return Graph(vertices, {})

    @staticmethod
    def empty() -> "Graph":
        return Graph((), {})

    @staticmethod
    def from_edge_pairs(vertices: Iterable[int], pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph with edges numbered 0.. in the order given."""
        return Graph(vertices, {i: set(p) for i, p in enumerate(pairs)})

    def ends(self, e: int) -> frozenset:
        if e not in self._ends:
            raise GraphError(f"unknown edge id {e}")
        return self._ends[e]

    def ends_table(self) -> dict[int, frozenset]:
        return dict(self._ends)

    def is_loop(self, e: int) -> bool:
        return len(self.ends(e)) == 1

    def degree(self, v: int) -> int:
        """Number of incident edge endpoints; a self-loop contributes 2."""
        if v not in self.vertices:
            raise GraphError(f"unknown vertex id {v}")
        d = 0
        for pts in self._ends.values():
            if v in pts:
                d += 2 if len(pts) == 1 else 1
        return d

    def neighbours(self, v: int) -> frozenset:
        if v not in self.vertices:
            raise GraphError(f"unknown vertex id {v}")
        out = set()
        for pts in self._ends.values():
            if v in pts:
                out.update(pts - {v} or {v})
        return frozenset(out)

    def incident_edges(self, v: int) -> frozenset:
        return frozenset(e for e, pts in self._ends.items() if v in pts)

    def subgraph(self, vertices: Iterable[int], edges: Iterable[int]) -> "Graph":
        vs = frozenset(vertices)
        es = frozenset(edges)
        if not vs <= self.vertices:
            raise GraphError("subgraph vertices not contained in the graph")
        if not es <= self.edges:
            raise GraphError("subgraph edges not contained in the graph")
        return Graph(vs, {e: self._ends[e] for e in es})

    def connected_components(self) -> list[tuple[frozenset, frozenset]]:
        """Components as (vertex set, edge set) pairs, sorted by minimum vertex."""
        uf = UnionFind(self.vertices)
        for pts in self._ends.values():
            pts = sorted(pts)
            uf.union(pts[0], pts[-1])
        groups: dict[int, set] = {}
        for v in self.vertices:
            groups.setdefault(uf.find(v), set()).add(v)
        comps = []
        for vs in groups.values():
            es = {e for e, pts in self._ends.items() if pts <= vs}
            comps.append((frozenset(vs), frozenset(es)))
        comps.sort(key=lambda c: min(c[0]))
        return comps

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        return len(self.connected_components()) == 1

    def is_tree(self) -> bool:
        """Connected and acyclic; the empty graph is not a tree."""
        if not self.is_connected():
            return False
        if any(len(pts) == 1 for pts in self._ends.values()):
            return False
        return len(self.edges) == len(self.vertices) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._ends == other._ends

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        es = ", ".join(f"{e}:{sorted(self._ends[e])}" for e in sorted(self.edges))
        return f"Graph(v={sorted(self.vertices)}, e={{{es}}})"


@dataclass(frozen=True)
class SourcedGraph:
    """A graph with a marked source-vertex set acting as its glueing interface."""

    graph: Graph
    sources: frozenset

    def __init__(self, graph: Graph, sources: Iterable[int] = ()):
        src = frozenset(sources)
        if not src <= graph.vertices:
            raise GraphError(f"sources {sorted(src - graph.vertices)} are not vertices")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "sources", src)

    @property
    def vertices(self) -> frozenset:
        return self.graph.vertices

    @property
    def edges(self) -> frozenset:
        return self.graph.edges

    def is_empty(self) -> bool:
        return not self.graph.vertices and not self.graph.edges


class FiniteMap:
    """A total map between finite sets with an explicit codomain."""

    __slots__ = ("mapping", "codomain")

    def __init__(self, mapping: Mapping, codomain: Iterable):
        self.mapping = dict(mapping)
        self.codomain = frozenset(codomain)
        bad = {k for k, v in self.mapping.items() if v not in self.codomain}
        if bad:
            raise GraphError(f"map image escapes the codomain at {sorted(bad)}")

    @property
    def domain(self) -> frozenset:
        return frozenset(self.mapping)

    def __call__(self, x):
        if x not in self.mapping:
            raise GraphError(f"{x!r} is outside the map domain")
        return self.mapping[x]

    def image(self) -> frozenset:
        return frozenset(self.mapping.values())

    def restrict(self, xs: Iterable) -> "FiniteMap":
        return FiniteMap({x: self(x) for x in xs}, self.codomain)

    def then(self, other: "FiniteMap") -> "FiniteMap":
        return FiniteMap({k: other(v) for k, v in self.mapping.items()}, other.codomain)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMap):
            return NotImplemented
        return self.mapping == other.mapping and self.codomain == other.codomain

    def __repr__(self) -> str:
        return f"FiniteMap({self.mapping!r})"


def image_union(f: FiniteMap, g: FiniteMap) -> frozenset:
    """Union of the two images; the maps must share a codomain."""
    if f.codomain != g.codomain:
        raise GraphError("image_union requires a common codomain")
    return f.image() | g.image()


def image_intersection(f: FiniteMap, g: FiniteMap) -> frozenset:
    """Intersection of the two images; the maps must share a codomain."""
    if f.codomain != g.codomain:
        raise GraphError("image_intersection requires a common codomain")
    return f.image() & g.image()


class GraphMorphism:
    """A pair of vertex/edge maps commuting with edge endpoints."""

    __slots__ = ("domain", "codomain", "vmap", "emap")

    def __init__(self, domain: Graph, codomain: Graph, vmap: Mapping[int, int],
                 emap: Mapping[int, int]):
        self.domain = domain
        self.codomain = codomain
        self.vmap = dict(vmap)
        self.emap = dict(emap)
        if frozenset(self.vmap) != domain.vertices:
            raise GraphError("vertex map is not total on the domain vertices")
        if frozenset(self.emap) != domain.edges:
            raise GraphError("edge map is not total on the domain edges")
        if not set(self.vmap.values()) <= codomain.vertices:
            raise GraphError("vertex map escapes the codomain")
        if not set(self.emap.values()) <= codomain.edges:
            raise GraphError("edge map escapes the codomain")
        for e in domain.edges:
            expected = frozenset(self.vmap[v] for v in domain.ends(e))
            if codomain.ends(self.emap[e]) != expected:
                raise GraphError(f"morphism does not respect endpoints of edge {e}")

    def apply_vertices(self, vs: Iterable[int]) -> frozenset:
        return frozenset(self.vmap[v] for v in vs)

    def apply_edges(self, es: Iterable[int]) -> frozenset:
        return frozenset(self.emap[e] for e in es)

    def vertex_map(self) -> FiniteMap:
        return FiniteMap(self.vmap, self.codomain.vertices)

    def then(self, other: "GraphMorphism") -> "GraphMorphism":
        if self.codomain != other.domain:
            raise GraphError("morphisms are not composable")
        return GraphMorphism(
            self.domain, other.codomain,
            {v: other.vmap[w] for v, w in self.vmap.items()},
            {e: other.emap[f] for e, f in self.emap.items()},
        )

    def image_subgraph(self) -> Graph:
        return self.codomain.subgraph(set(self.vmap.values()), set(self.emap.values()))

    def __repr__(self) -> str:
        return f"GraphMorphism(v={self.vmap!r}, e={self.emap!r})"


def is_epimorphism(m: GraphMorphism) -> bool:
    """True iff both component maps are surjective."""
    return (frozenset(m.vmap.values()) == m.codomain.vertices
            and frozenset(m.emap.values()) == m.codomain.edges)


class UnionFind:
    """Union-find with path compression; representatives are minimum ids."""

    def __init__(self, items: Iterable = ()):
        self.parent = {x: x for x in items}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        # keep the smaller id as representative
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return out


def ends_of_edge_set(g: Graph, es: Iterable[int]) -> frozenset:
    """Union of the endpoint sets of the given edges."""
    out: set = set()
    for e in es:
        out |= g.ends(e)
    return frozenset(out)


def is_subcubic_tree(g: Graph) -> bool:
    """True iff g is a tree in which every vertex has at most three neighbours."""
    if not g.is_tree():
        return False
    return all(len(g.neighbours(v)) <= 3 for v in g.vertices)


def tree_leaves(g: Graph) -> frozenset:
    """Vertices of degree at most one; the single vertex of a 1-vertex tree counts."""
    return frozenset(v for v in g.vertices if g.degree(v) <= 1)


def graph_coproduct(g1: Graph, g2: Graph) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """Disjoint union with both injections; ids renumbered deterministically."""
    v1 = {v: i for i, v in enumerate(sorted(g1.vertices))}
    v2 = {v: i + len(v1) for i, v in enumerate(sorted(g2.vertices))}
    e1 = {e: i for i, e in enumerate(sorted(g1.edges))}
    e2 = {e: i + len(e1) for i, e in enumerate(sorted(g2.edges))}
    ends = {e1[e]: {v1[v] for v in g1.ends(e)} for e in g1.edges}
    ends.update({e2[e]: {v2[v] for v in g2.ends(e)} for e in g2.edges})
    g = Graph(set(v1.values()) | set(v2.values()), ends)
    return g, GraphMorphism(g1, g, v1, e1), GraphMorphism(g2, g, v2, e2)


def graph_pushout(g1: Graph, g2: Graph, y: Iterable, l1: FiniteMap,
                  l2: FiniteMap) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """Glue g1 and g2 along the span  V(g1) <- y -> V(g2).

    The apex identifies l1(a) with l2(a) for every a in y; class
    representatives are minimum coproduct ids, then renumbered
    order-preserving.  Returns the two quotient morphisms.
    """
    ys = frozenset(y)
    if not ys <= l1.domain or not ys <= l2.domain:
        raise GraphError("pushout legs must be total on the shared boundary")
    if not l1.image() <= g1.vertices or not l2.image() <= g2.vertices:
        raise GraphError("pushout legs must land in the graph vertices")
    co, i1, i2 = graph_coproduct(g1, g2)
    uf = UnionFind(co.vertices)
    for a in sorted(ys):
        uf.union(i1.vmap[l1(a)], i2.vmap[l2(a)])
    reps = sorted({uf.find(v) for v in co.vertices})
    renum = {r: i for i, r in enumerate(reps)}
    q = {v: renum[uf.find(v)] for v in co.vertices}
    ends = {e: {q[v] for v in co.ends(e)} for e in co.edges}
    apex = Graph(set(renum.values()), ends)
    qm = GraphMorphism(co, apex, q, {e: e for e in co.edges})
    return apex, i1.then(qm), i2.then(qm)


def _vertex_invariant(g: Graph, v: int) -> tuple:
    loops = sum(1 for e in g.incident_edges(v) if g.is_loop(e))
    return (g.degree(v), loops)


def _edge_class_profile(g: Graph) -> dict[frozenset, int]:
    prof: dict[frozenset, int] = {}
    for e in g.edges:
        prof[g.ends(e)] = prof.get(g.ends(e), 0) + 1
    return prof


def find_isomorphism(g1: Graph, g2: Graph,
                     forced: Optional[Mapping[int, int]] = None) -> Optional[GraphMorphism]:
    """Backtracking isomorphism search on degree-refined vertex classes.

    `forced` pins a partial vertex assignment (used for leg-compatible
    cospan isomorphisms).  Deterministic given input ordering; intended
    for small graphs.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    inv1 = sorted(_vertex_invariant(g1, v) for v in g1.vertices)
    inv2 = sorted(_vertex_invariant(g2, v) for v in g2.vertices)
    if inv1 != inv2:
        return None
    forced = dict(forced or {})
    assign: dict[int, int] = {}
    used: set = set()
    for v, w in forced.items():
        if v not in g1.vertices or w not in g2.vertices:
            return None
        if assign.get(v, w) != w:
            return None
        if v not in assign and w in used:
            return None
        assign[v] = w
        used.add(w)
        if _vertex_invariant(g1, v) != _vertex_invariant(g2, w):
            return None

    multi1 = {frozenset(p): c for p, c in _edge_class_profile(g1).items()}
    multi2 = {frozenset(p): c for p, c in _edge_class_profile(g2).items()}

    def compatible(v: int, w: int) -> bool:
        # every already-assigned neighbour relation must carry over with
        # matching multiplicities
        for u, x in assign.items():
            c1 = multi1.get(frozenset({v, u}), 0)
            c2 = multi2.get(frozenset({w, x}), 0)
            if c1 != c2:
                return False
        return True

    order = sorted(g1.vertices - set(assign), key=lambda v: (_vertex_invariant(g1, v), v))

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in sorted(g2.vertices - used):
            if _vertex_invariant(g1, v) != _vertex_invariant(g2, w):
                continue
            if not compatible(v, w):
                continue
            assign[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del assign[v]
            used.discard(w)
        return False

    for v, w in list(assign.items()):
        if not compatible(v, w):
            return None
    if not extend(0):
        return None

    emap: dict[int, int] = {}
    pool: dict[frozenset, list[int]] = {}
    for e in sorted(g2.edges):
        pool.setdefault(g2.ends(e), []).append(e)
    for e in sorted(g1.edges):
        target = frozenset(assign[v] for v in g1.ends(e))
        cands = pool.get(target)
        if not cands:
            return None
        emap[e] = cands.pop(0)
    return GraphMorphism(g1, g2, assign, emap)


def graph_isomorphic(g1: Graph, g2: Graph) -> Optional[GraphMorphism]:
    """A witnessing isomorphism between the two graphs, or None."""
    return find_isomorphism(g1, g2)


def canonical_key(g: Graph) -> tuple:
    """A label-independent canonical form; minimum over all vertex orderings.

    Brute force over permutations, so only suitable for small graphs.
    """
    vs = sorted(g.vertices)
    n = len(vs)
    best = None
    for perm in permutations(range(n)):
        relab = {v: perm[i] for i, v in enumerate(vs)}
        edges = sorted(tuple(sorted(relab[v] for v in g.ends(e))) for e in g.edges)
        cand = (n, tuple(edges))
        if best is None or cand < best:
            best = cand
    return best if best is not None else (0, ())


# ---------------------------------------------------------------------------
# Text format: `v <id>` / `e <u> <v>` / `s <id>` / `#` comments.


def parse_graph_text(text: str) -> SourcedGraph:
    vertices: set = set()
    pairs: list[tuple[int, int]] = []
    sources: set = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag, args = parts[0], parts[1:]
        try:
            ids = [int(a) for a in args]
        except ValueError:
            raise GraphParseError(lineno, f"non-integer id in {line!r}")
        if tag == "v":
            if len(ids) != 1:
                raise GraphParseError(lineno, "'v' takes exactly one id")
            vertices.add(ids[0])
        elif tag == "e":
            if len(ids) != 2:
                raise GraphParseError(lineno, "'e' takes exactly two ids")
            if ids[0] not in vertices or ids[1] not in vertices:
                raise GraphParseError(lineno, "edge endpoint not declared with 'v'")
            pairs.append((ids[0], ids[1]))
        elif tag == "s":
            if len(ids) != 1:
                raise GraphParseError(lineno, "'s' takes exactly one id")
            if ids[0] not in vertices:
                raise GraphParseError(lineno, "source vertex not declared with 'v'")
            sources.add(ids[0])
        else:
            raise GraphParseError(lineno, f"unknown directive {tag!r}")
    return SourcedGraph(Graph.from_edge_pairs(vertices, pairs), sources)


def format_graph_text(sg: SourcedGraph) -> str:
    lines = [f"v {v}" for v in sorted(sg.graph.vertices)]
    for e in sorted(sg.graph.edges):
        pts = sorted(sg.graph.ends(e))
        u, w = pts[0], pts[-1]
        lines.append(f"e {u} {w}")
    lines.extend(f"s {v}" for v in sorted(sg.sources))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# JSON form used by decomposition schemas: explicit ids so that edge ids
# referenced elsewhere stay stable.


def graph_to_json(g: Graph) -> dict:
    return {
        "v": sorted(g.vertices),
        "e": [[e, *sorted(g.ends(e))] for e in sorted(g.edges)],
    }


def graph_from_json(data: dict) -> Graph:
    ends = {}
    for item in data.get("e", []):
        e, pts = item[0], item[1:]
        ends[e] = set(pts)
    return Graph(data.get("v", []), ends)


def sourced_graph_to_json(sg: SourcedGraph) -> dict:
    out = graph_to_json(sg.graph)
    out["s"] = sorted(sg.sources)
    return out


def sourced_graph_from_json(data: dict) -> SourcedGraph:
    return SourcedGraph(graph_from_json(data), data.get("s", []))
