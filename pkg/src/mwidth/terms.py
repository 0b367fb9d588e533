"""Monoidal decomposition terms over an atom signature.

A term is a binary tree: leaves name atoms, tensor nodes place parts side
by side, and composition nodes cut along a boundary object.  Width is the
weight of the most expensive node; composition nodes cost the cut object,
tensor nodes are free.  Atoms may be purely symbolic (a declared weight)
or bound to cospans of graphs, in which case terms can be evaluated back
into the category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import cospan as cs
from .cospan import Cospan


class TermError(TypeError):
    """Ill-typed decomposition tree or unknown atom."""


@dataclass(frozen=True)
class Leaf:
    atom: str


@dataclass(frozen=True)
class Tensor:
    left: "DecompTree"
    right: "DecompTree"


@dataclass(frozen=True)
class Compose:
    left: "DecompTree"
    cut: int
    right: "DecompTree"


DecompTree = Union[Leaf, Tensor, Compose]


@dataclass(frozen=True)
class Atom:
    dom: int
    cod: int
    weight: int
    cospan: Optional[Cospan] = None


class Signature:
    """Atom table: name -> (domain arity, codomain arity, weight[, cospan]).

    Object weight is boundary cardinality, additive under tensor with
    weight 0 for the unit.
    """

    def __init__(self):
        self.atoms: dict[str, Atom] = {}
        self._fresh = 0
        self._wiring_cache: dict[tuple, str] = {}

    def add(self, name: str, dom: int, cod: int, weight: int,
            cospan: Optional[Cospan] = None) -> str:
        if name in self.atoms:
            raise TermError(f"atom {name!r} already declared")
        self.atoms[name] = Atom(dom, cod, weight, cospan)
        return name

    def add_cospan(self, c: Cospan, name: Optional[str] = None) -> str:
        if name is None:
            name = f"a{self._fresh}"
            self._fresh += 1
        return self.add(name, c.left_arity, c.right_arity, cs.weight(c), c)

    def atom(self, name: str) -> Atom:
        if name not in self.atoms:
            raise TermError(f"unknown atom {name!r}")
        return self.atoms[name]

    def __contains__(self, name: str) -> bool:
        return name in self.atoms

    def leaf(self, c: Cospan, name: Optional[str] = None) -> Leaf:
        return Leaf(self.add_cospan(c, name))

    def _wiring_leaf(self, key: tuple, factory) -> Leaf:
        """Cache structural wiring atoms (identities, copies, swaps...)."""
        if key not in self._wiring_cache:
            self._wiring_cache[key] = self.add_cospan(factory(), name="w%d_%s" % (
                len(self._wiring_cache), key[0]))
        return Leaf(self._wiring_cache[key])

    def leaf_identity(self, n: int) -> Leaf:
        return self._wiring_leaf(("id", n), lambda: cs.identity(n))

    def leaf_copy(self, n: int) -> Leaf:
        return self._wiring_leaf(("cp", n), lambda: cs.copy(n))

    def leaf_swap(self, n: int, m: int) -> Leaf:
        return self._wiring_leaf(("sw", n, m), lambda: cs.swap(n, m))

    def leaf_spider(self, n_left: int, n_right: int) -> Leaf:
        return self._wiring_leaf(("sp", n_left, n_right),
                                 lambda: cs.spider(n_left, n_right))

    def leaf_permutation(self, perm: tuple) -> Leaf:
        return self._wiring_leaf(("pm",) + tuple(perm), lambda: cs.permutation(perm))


class SymbolicSignature(Signature):
    """Signature of abstract atoms plus on-demand wiring with prop weights.

    Wiring weights follow the convention for copyable objects:
    w(id_n) = n, w(cp_n) = 2n, w(swap_{n,m}) = n + m.
    """

    def leaf_identity(self, n: int) -> Leaf:
        key = ("id", n)
        if key not in self._wiring_cache:
            self._wiring_cache[key] = self.add(f"id{n}", n, n, n)
        return Leaf(self._wiring_cache[key])

    def leaf_copy(self, n: int) -> Leaf:
        key = ("cp", n)
        if key not in self._wiring_cache:
            self._wiring_cache[key] = self.add(f"cp{n}", n, 2 * n, 2 * n)
        return Leaf(self._wiring_cache[key])

    def leaf_swap(self, n: int, m: int) -> Leaf:
        key = ("sw", n, m)
        if key not in self._wiring_cache:
            self._wiring_cache[key] = self.add(f"sw{n}_{m}", n + m, n + m, n + m)
        return Leaf(self._wiring_cache[key])

    def leaf_spider(self, n_left: int, n_right: int) -> Leaf:
        key = ("sp", n_left, n_right)
        if key not in self._wiring_cache:
            self._wiring_cache[key] = self.add(
                f"sp{n_left}_{n_right}", n_left, n_right, max(n_left, n_right, 1))
        return Leaf(self._wiring_cache[key])


def arity(d: DecompTree, sig: Signature, _path: str = "") -> tuple[int, int]:
    """Domain and codomain arities; raises TermError naming the bad node."""
    if isinstance(d, Leaf):
        a = sig.atom(d.atom)
        return a.dom, a.cod
    if isinstance(d, Tensor):
        d1, c1 = arity(d.left, sig, _path + "L")
        d2, c2 = arity(d.right, sig, _path + "R")
        return d1 + d2, c1 + c2
    if isinstance(d, Compose):
        d1, c1 = arity(d.left, sig, _path + "L")
        d2, c2 = arity(d.right, sig, _path + "R")
        if c1 != d.cut or d2 != d.cut:
            raise TermError(
                f"cut mismatch at node {_path or 'root'}: "
                f"{c1} -> [{d.cut}] -> {d2}")
        return d1, c2
    raise TermError(f"not a decomposition tree node: {d!r}")


def width(d: DecompTree, sig: Signature) -> int:
    """max over leaves of atom weight and over composition nodes of cut weight."""
    arity(d, sig)
    return _width(d, sig)


def _width(d: DecompTree, sig: Signature) -> int:
    if isinstance(d, Leaf):
        return sig.atom(d.atom).weight
    if isinstance(d, Tensor):
        return max(_width(d.left, sig), _width(d.right, sig))
    return max(_width(d.left, sig), d.cut, _width(d.right, sig))


def node_weights(d: DecompTree, sig: Signature) -> list[int]:
    """Weights of all tree nodes (tensor nodes cost 0)."""
    if isinstance(d, Leaf):
        return [sig.atom(d.atom).weight]
    if isinstance(d, Tensor):
        return node_weights(d.left, sig) + [0] + node_weights(d.right, sig)
    return node_weights(d.left, sig) + [d.cut] + node_weights(d.right, sig)


def node_count(d: DecompTree) -> int:
    if isinstance(d, Leaf):
        return 1
    return 1 + node_count(d.left) + node_count(d.right)


def is_right_tree(d: DecompTree) -> bool:
    """Compositions may only recurse on the right; the left factor is atomic."""
    if isinstance(d, Leaf):
        return True
    if isinstance(d, Tensor):
        return is_right_tree(d.left) and is_right_tree(d.right)
    return isinstance(d.left, Leaf) and is_right_tree(d.right)


def is_left_tree(d: DecompTree) -> bool:
    if isinstance(d, Leaf):
        return True
    if isinstance(d, Tensor):
        return is_left_tree(d.left) and is_left_tree(d.right)
    return isinstance(d.right, Leaf) and is_left_tree(d.left)


def is_path(d: DecompTree) -> bool:
    """No tensor nodes anywhere."""
    if isinstance(d, Leaf):
        return True
    if isinstance(d, Tensor):
        return False
    return is_path(d.left) and is_path(d.right)


def evaluate(d: DecompTree, sig: Signature, _path: str = "") -> Cospan:
    """Fold the term back into the category; every atom must carry a cospan."""
    if isinstance(d, Leaf):
        a = sig.atom(d.atom)
        if a.cospan is None:
            raise TermError(f"atom {d.atom!r} at {_path or 'root'} has no cospan binding")
        return a.cospan
    left = evaluate(d.left, sig, _path + "L")
    right = evaluate(d.right, sig, _path + "R")
    if isinstance(d, Tensor):
        return cs.tensor(left, right)
    if left.right_arity != d.cut or right.left_arity != d.cut:
        raise TermError(
            f"cut mismatch at node {_path or 'root'}: "
            f"{left.right_arity} -> [{d.cut}] -> {right.left_arity}")
    return cs.compose(left, right)


def flatten_path(d: DecompTree) -> list[tuple]:
    """Composition-only term as an alternating [leaf, cut, leaf, ...] list."""
    if isinstance(d, Leaf):
        return [d]
    if isinstance(d, Tensor):
        raise TermError("not a path-shaped term")
    return flatten_path(d.left) + [d.cut] + flatten_path(d.right)


# ---------------------------------------------------------------------------
# JSON serialization.


def tree_to_json(d: DecompTree) -> dict:
    if isinstance(d, Leaf):
        return {"op": "leaf", "atom": d.atom}
    if isinstance(d, Tensor):
        return {"op": "tensor", "children": [tree_to_json(d.left), tree_to_json(d.right)]}
    return {"op": "compose", "cut": d.cut,
            "children": [tree_to_json(d.left), tree_to_json(d.right)]}


def tree_from_json(data: dict) -> DecompTree:
    op = data.get("op")
    if op == "leaf":
        return Leaf(data["atom"])
    if op == "tensor":
        a, b = data["children"]
        return Tensor(tree_from_json(a), tree_from_json(b))
    if op == "compose":
        a, b = data["children"]
        return Compose(tree_from_json(a), int(data["cut"]), tree_from_json(b))
    raise TermError(f"unknown term op {op!r}")


def signature_to_json(sig: Signature) -> dict:
    out = {}
    for name in sorted(sig.atoms):
        a = sig.atoms[name]
        out[name] = {
            "dom": a.dom, "cod": a.cod, "weight": a.weight,
            "cospan": cs.cospan_to_json(a.cospan) if a.cospan is not None else None,
        }
    return out


def signature_from_json(data: dict) -> Signature:
    sig = Signature()
    for name, rec in data.items():
        c = cs.cospan_from_json(rec["cospan"]) if rec.get("cospan") else None
        sig.add(name, rec["dom"], rec["cod"], rec["weight"], c)
    return sig


def tree_serial(d: DecompTree) -> str:
    """Deterministic serialization used for golden tests and tie-breaking."""
    return json.dumps(tree_to_json(d), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Bounded search for low-width monoidal decompositions of a cospan.


@dataclass
class SearchResult:
    tree: DecompTree
    signature: Signature
    width: int
    exact: bool  # False when the node budget was exhausted ("bound only")


def _cospan_key(c: Cospan) -> tuple:
    ends = tuple(sorted(tuple(sorted(c.apex.ends(e))) for e in c.apex.edges))
    return (c.left, c.right, tuple(sorted(c.apex.vertices)), ends)


def _tensor_splits(c: Cospan) -> Iterable[tuple[Cospan, Cospan]]:
    comps = c.apex.connected_components()
    if len(comps) < 2:
        return
    port_vs = list(c.left) + list(c.right)
    for mask in range(1, (1 << len(comps)) - 1):
        vs1: set = set()
        es1: set = set()
        for i, (vs, es) in enumerate(comps):
            if mask & (1 << i):
                vs1 |= vs
                es1 |= es
        # the first tensor factor must occupy a prefix of both boundaries
        lsel = [v in vs1 for v in c.left]
        rsel = [v in vs1 for v in c.right]
        if lsel != sorted(lsel, reverse=True) or rsel != sorted(rsel, reverse=True):
            continue
        nl = sum(lsel)
        nr = sum(rsel)
        vs2 = c.apex.vertices - vs1
        es2 = c.apex.edges - es1
        g1 = Cospan(c.apex.subgraph(vs1, es1), c.left[:nl], c.right[:nr])
        g2 = Cospan(c.apex.subgraph(vs2, es2), c.left[nl:], c.right[nr:])
        yield cs._renumber(g1), cs._renumber(g2)


def _compose_splits(c: Cospan) -> Iterable[tuple[Cospan, int, Cospan]]:
    edges = sorted(c.apex.edges)
    if len(edges) < 2:
        return
    legged = frozenset(c.left) | frozenset(c.right)
    free = [v for v in sorted(c.apex.vertices)
            if v not in legged and not c.apex.incident_edges(v)]
    for mask in range(1, (1 << len(edges)) - 1):
        es1 = {edges[i] for i in range(len(edges)) if mask & (1 << i)}
        es2 = set(edges) - es1
        vs1 = set().union(*(c.apex.ends(e) for e in es1)) | set(c.left) | set(free)
        vs2 = set().union(*(c.apex.ends(e) for e in es2)) | set(c.right)
        cut = tuple(sorted(vs1 & vs2))
        g1 = Cospan(c.apex.subgraph(vs1, es1), c.left, cut)
        g2 = Cospan(c.apex.subgraph(vs2, es2), cut, c.right)
        yield cs._renumber(g1), len(cut), cs._renumber(g2)


def bounded_mwd_search(g: Cospan, shape: str = "any", budget: int = 4000,
                       seed_translations: bool = True) -> SearchResult:
    """Best decomposition of `g` found within the searched space.

    The space covers the atomic leaf, tensor splits along disjoint apex
    parts, composition splits induced by edge bipartitions (cut = shared
    vertices), and, for closed-enough cospans, whole decompositions emitted
    by the graph-decomposition translations.  The result is an upper bound
    witness; `exact` is False when the budget ran out.
    """
    if shape not in ("any", "right-tree", "path"):
        raise TermError(f"unknown search shape {shape!r}")
    sig = Signature()
    memo: dict[tuple, tuple[int, DecompTree]] = {}
    state = {"n": 0, "exceeded": False}

    def best(c: Cospan, shp: str) -> tuple[int, DecompTree]:
        key = (_cospan_key(c), shp)
        if key in memo:
            return memo[key]
        leaf = sig.leaf(c)
        result = (cs.weight(c), leaf)
        state["n"] += 1
        if state["n"] > budget:
            state["exceeded"] = True
            memo[key] = result
            return result

        def consider(w: int, tree: DecompTree):
            nonlocal result
            cand = (w, tree)
            if (w, node_count(tree), tree_serial(tree)) < (
                    result[0], node_count(result[1]), tree_serial(result[1])):
                result = cand

        if shp != "path":
            for g1, g2 in _tensor_splits(c):
                w1, t1 = best(g1, shp)
                w2, t2 = best(g2, shp)
                consider(max(w1, w2), Tensor(t1, t2))
        for g1, cut, g2 in _compose_splits(c):
            if shp == "right-tree":
                t1 = sig.leaf(g1)
                w1 = cs.weight(g1)
            else:
                w1, t1 = best(g1, shp)
            w2, t2 = best(g2, shp)
            consider(max(w1, cut, w2), Compose(t1, cut, t2))
        memo[key] = result
        return result

    w, tree = best(cs._renumber(g), shape)
    results = [SearchResult(tree, sig, w, not state["exceeded"])]

    closed = (g.right_arity == 0 and g.left == tuple(sorted(set(g.left)))
              and len(g.apex.vertices) <= 8 and len(g.apex.edges) <= 7)
    if seed_translations and closed:
        from .graph import SourcedGraph
        from . import oracles, translate
        from .decomp import branch_to_recursive, path_to_recursive, tree_to_recursive
        sg = SourcedGraph(g.apex, set(g.left))
        seeds = []
        try:
            if shape == "any":
                _, bdec = oracles.exact_branchwidth(g.apex)
                seeds.append(translate.b_to_mdec(branch_to_recursive(bdec, sg), sg))
            elif shape == "right-tree":
                twd, tdec = oracles.exact_treewidth(g.apex)
                bags = tdec.bag_map()
                root = next(v for v in sorted(bags) if sg.sources <= bags[v])
                seeds.append(translate.t_to_mdec(tree_to_recursive(tdec, sg, root), sg))
            elif shape == "path":
                _, pdec = oracles.exact_pathwidth(g.apex)
                if pdec.bags and sg.sources <= pdec.bags[0]:
                    seeds.append(translate.p_to_mdec(path_to_recursive(pdec, sg), sg))
        except (StopIteration, oracles.OracleError):
            pass
        for tree2, sig2 in seeds:
            results.append(SearchResult(tree2, sig2, width(tree2, sig2),
                                        not state["exceeded"]))

    results.sort(key=lambda r: (r.width, node_count(r.tree), tree_serial(r.tree)))
    return results[0]
