"""The symmetric monoidal category of cospans over undirected graphs.

Objects are finite boundary arities; a morphism is a graph apex with two
leg maps sending boundary ports to apex vertices.  Boundary ports are
positional (0..n-1), so tensor and swap are unambiguous; composition glues
apexes by pushout over the shared boundary, identifying common sources.
Morphism equality throughout is up to apex isomorphism commuting with the
legs, never structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import (
    FiniteMap,
    Graph,
    GraphMorphism,
    SourcedGraph,
    find_isomorphism,
    graph_coproduct,
    graph_pushout,
)


class CospanError(TypeError):
    """Boundary mismatch or malformed cospan data."""


@dataclass(frozen=True)
class Cospan:
    """left ports -> apex <- right ports; ports are tuples of apex vertices."""

    apex: Graph
    left: tuple
    right: tuple

    def __post_init__(self):
        for v in self.left + self.right:
            if v not in self.apex.vertices:
                raise CospanError(f"leg hits {v}, not an apex vertex")

    @property
    def left_arity(self) -> int:
        return len(self.left)

    @property
    def right_arity(self) -> int:
        return len(self.right)

    def left_image(self) -> frozenset:
        return frozenset(self.left)

    def right_image(self) -> frozenset:
        return frozenset(self.right)

    def left_map(self) -> FiniteMap:
        return FiniteMap(dict(enumerate(self.left)), self.apex.vertices)

    def right_map(self) -> FiniteMap:
        return FiniteMap(dict(enumerate(self.right)), self.apex.vertices)

    def __repr__(self) -> str:
        return f"Cospan({self.left_arity}->{len(self.apex.vertices)}v<-{self.right_arity})"


def weight(g: Cospan) -> int:
    """Morphism weight: the number of apex vertices."""
    return len(g.apex.vertices)


def boundary_weight(arity: int) -> int:
    """Object weight: the boundary cardinality."""
    if arity < 0:
        raise CospanError("boundary arity must be a natural number")
    return arity


def _renumber(c: Cospan) -> Cospan:
    """Renumber apex ids order-preserving so constructions are reproducible."""
    vmap = {v: i for i, v in enumerate(sorted(c.apex.vertices))}
    emap = {e: i for i, e in enumerate(sorted(c.apex.edges))}
    apex = Graph(vmap.values(), {emap[e]: {vmap[v] for v in c.apex.ends(e)}
                                 for e in c.apex.edges})
    return Cospan(apex, tuple(vmap[v] for v in c.left), tuple(vmap[v] for v in c.right))


def compose_with_maps(g1: Cospan, g2: Cospan) -> tuple[Cospan, GraphMorphism, GraphMorphism]:
    """Compose and also return the two apex quotient morphisms."""
    if g1.right_arity != g2.left_arity:
        raise CospanError(
            f"cannot compose: right arity {g1.right_arity} != left arity {g2.left_arity}")
    n = g1.right_arity
    ports = range(n)
    l1 = FiniteMap({p: g1.right[p] for p in ports}, g1.apex.vertices)
    l2 = FiniteMap({p: g2.left[p] for p in ports}, g2.apex.vertices)
    apex, m1, m2 = graph_pushout(g1.apex, g2.apex, ports, l1, l2)
    left = tuple(m1.vmap[v] for v in g1.left)
    right = tuple(m2.vmap[v] for v in g2.right)
    return Cospan(apex, left, right), m1, m2


def compose(g1: Cospan, g2: Cospan) -> Cospan:
    """Glue the apexes by pushout over the shared boundary."""
    return compose_with_maps(g1, g2)[0]


def tensor_with_maps(g1: Cospan, g2: Cospan) -> tuple[Cospan, GraphMorphism, GraphMorphism]:
    apex, i1, i2 = graph_coproduct(g1.apex, g2.apex)
    left = tuple(i1.vmap[v] for v in g1.left) + tuple(i2.vmap[v] for v in g2.left)
    right = tuple(i1.vmap[v] for v in g1.right) + tuple(i2.vmap[v] for v in g2.right)
    return Cospan(apex, left, right), i1, i2


def tensor(g1: Cospan, g2: Cospan) -> Cospan:
    """Monoidal product: disjoint union of apexes, concatenated boundaries."""
    return tensor_with_maps(g1, g2)[0]


def wiring(n_vertices: int, left: Iterable[int], right: Iterable[int]) -> Cospan:
    """A cospan with a discrete apex on 0..n_vertices-1; legs as given."""
    return Cospan(Graph.discrete(range(n_vertices)), tuple(left), tuple(right))


def identity(n: int) -> Cospan:
    return wiring(n, range(n), range(n))


def swap(n: int, m: int) -> Cospan:
    """The symmetry on n + m wires."""
    return wiring(n + m, range(n + m), list(range(n, n + m)) + list(range(n)))


def copy(n: int) -> Cospan:
    """Duplicate n wires: each right half points at the same vertex."""
    return wiring(n, range(n), list(range(n)) * 2)


def merge(n: int) -> Cospan:
    """Identify two bundles of n wires."""
    return wiring(n, list(range(n)) * 2, range(n))


def delete(n: int) -> Cospan:
    return wiring(n, range(n), ())


def create(n: int) -> Cospan:
    return wiring(n, (), range(n))


def spider(n_left: int, n_right: int) -> Cospan:
    """All ports wired to one vertex (the single-vertex Frobenius spider)."""
    return wiring(1, [0] * n_left, [0] * n_right)


def edge() -> Cospan:
    """One edge between two vertices, one boundary port on each side."""
    return Cospan(Graph.from_edge_pairs((0, 1), [(0, 1)]), (0,), (1,))


def permutation(perm: Iterable[int]) -> Cospan:
    """Discrete cospan routing left port i to right port perm[i]."""
    perm = tuple(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise CospanError(f"{perm!r} is not a permutation")
    right = [0] * n
    for i, p in enumerate(perm):
        right[p] = i
    return wiring(n, range(n), right)


def generator(kind: str, n: int = 1, m: Optional[int] = None) -> Cospan:
    """The named Frobenius/edge generator; `m` only applies to swap."""
    table = {
        "identity": identity,
        "copy": copy,
        "merge": merge,
        "delete": delete,
        "create": create,
    }
    if kind == "swap":
        return swap(n, m if m is not None else n)
    if kind == "edge":
        return edge()
    if kind in table:
        return table[kind](n)
    raise CospanError(f"unknown generator kind {kind!r}")


def from_sourced(sg: SourcedGraph) -> Cospan:
    """The cospan  sources -> G <- (empty);  left ports in ascending id order."""
    return Cospan(sg.graph, tuple(sorted(sg.sources)), ())


def of_graph(g: Graph) -> Cospan:
    """The closed cospan  (empty) -> G <- (empty)."""
    return Cospan(g, (), ())


def cospan_iso_eq(g1: Cospan, g2: Cospan) -> bool:
    """True iff an apex isomorphism commutes with all four legs positionally."""
    if g1.left_arity != g2.left_arity or g1.right_arity != g2.right_arity:
        return False
    forced = {}
    for a, b in zip(g1.left + g1.right, g2.left + g2.right):
        if forced.get(a, b) != b:
            return False
        forced[a] = b
    return find_isomorphism(g1.apex, g2.apex, forced) is not None


# ---------------------------------------------------------------------------
# JSON form.  Apex edges are serialized as endpoint pairs in ascending edge
# id order, so edge ids become list positions; legs map port -> vertex.


def cospan_to_json(c: Cospan) -> dict:
    c = _renumber(c)
    return {
        "left": list(range(c.left_arity)),
        "right": list(range(c.right_arity)),
        "apex": {
            "v": sorted(c.apex.vertices),
            "e": [sorted(c.apex.ends(e)) if len(c.apex.ends(e)) == 2
                  else [min(c.apex.ends(e)), min(c.apex.ends(e))]
                  for e in sorted(c.apex.edges)],
        },
        "legL": {str(i): v for i, v in enumerate(c.left)},
        "legR": {str(i): v for i, v in enumerate(c.right)},
    }


def cospan_from_json(data: dict) -> Cospan:
    try:
        apex = Graph(data["apex"]["v"],
                     {i: set(pair) for i, pair in enumerate(data["apex"]["e"])})
        left = tuple(data["legL"][str(i)] for i in data["left"])
        right = tuple(data["legR"][str(i)] for i in data["right"])
    except (KeyError, TypeError) as exc:
        raise CospanError(f"malformed cospan JSON: {exc}") from exc
    return Cospan(apex, left, right)
