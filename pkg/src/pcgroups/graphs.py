"""Finite commutation graphs and their purely graph-theoretic constructions.

A commutation graph is a finite simplicial graph over named generators; an
edge (u, v) means the generators u and v commute in the associated group.
Edges optionally carry a tag 'd' or 'c' (untagged graphs are all-'d').  The
'c'-tagged edge set must be transitive: if (x,y) and (y,z) are c-edges then
(x,z) is an edge and is a c-edge.  Equivalently, the c-subgraph is a disjoint
union of cliques.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional


def _norm_edge(u: str, v: str) -> frozenset:
    if u == v:
        raise ValueError(f"self-loop at {u!r}")
    return frozenset((u, v))


@dataclass(frozen=True)
class CommutationGraph:
    """Immutable simplicial graph with optional d/c edge tags."""

    vertices: tuple
    edges: frozenset
    tags: Mapping = field(default_factory=dict)

    def __init__(self, vertices: Iterable[str], edges: Iterable = (),
                 tags: Optional[Mapping] = None):
        vs = tuple(vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertex names")
        vset = set(vs)
        es = set()
        for e in edges:
            u, v = tuple(e)
            if u not in vset or v not in vset:
                raise ValueError(f"edge endpoint not declared: {(u, v)}")
            es.add(_norm_edge(u, v))
        tagmap = {}
        if tags:
            for e, t in (tags.items() if isinstance(tags, Mapping) else tags):
                e = frozenset(e)
                if e not in es:
                    raise ValueError(f"tag on non-edge {sorted(e)}")
                if t not in ("d", "c"):
                    raise ValueError(f"bad tag {t!r}")
                tagmap[e] = t
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "tags", dict(tagmap))
        self._check_c_transitive()

    def _check_c_transitive(self):
        c_adj = {}
        for e in self.edges:
            if self.tag(e) == "c":
                u, v = tuple(e)
                c_adj.setdefault(u, set()).add(v)
                c_adj.setdefault(v, set()).add(u)
        for y, nbrs in c_adj.items():
            for x, z in itertools.combinations(sorted(nbrs), 2):
                e = frozenset((x, z))
                if e not in self.edges or self.tag(e) != "c":
                    raise ValueError(
                        f"c-edges ({x},{y}),({y},{z}) without c-edge ({x},{z})")

    def tag(self, e) -> str:
        return self.tags.get(frozenset(e), "d")

    def has_edge(self, u: str, v: str, tag_filter: Optional[str] = None) -> bool:
        e = frozenset((u, v))
        if e not in self.edges:
            return False
        return tag_filter is None or self.tag(e) == tag_filter

    def adjacency(self, tag_filter: Optional[str] = None) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            if tag_filter is not None and self.tag(e) != tag_filter:
                continue
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def __repr__(self):
        es = sorted(tuple(sorted(e)) for e in self.edges)
        return f"CommutationGraph({list(self.vertices)}, {es})"


def edgeless(names: Iterable[str]) -> CommutationGraph:
    return CommutationGraph(names)


def complete(names: Iterable[str]) -> CommutationGraph:
    vs = tuple(names)
    return CommutationGraph(vs, itertools.combinations(vs, 2))


def join(g1: CommutationGraph, g2: CommutationGraph) -> CommutationGraph:
    """Graph join: disjoint union plus all edges between the two sides."""
    shared = set(g1.vertices) & set(g2.vertices)
    if shared:
        raise ValueError(f"join requires disjoint vertex names, shared: {sorted(shared)}")
    edges = [tuple(e) for e in g1.edges] + [tuple(e) for e in g2.edges]
    edges += [(u, v) for u in g1.vertices for v in g2.vertices]
    return CommutationGraph(g1.vertices + g2.vertices, edges)


def disjoint_union(graphs: Iterable[CommutationGraph]) -> CommutationGraph:
    vs, es = [], []
    for g in graphs:
        if set(vs) & set(g.vertices):
            raise ValueError("disjoint union requires distinct vertex names")
        vs.extend(g.vertices)
        es.extend(tuple(e) for e in g.edges)
    return CommutationGraph(vs, es)


def induced(g: CommutationGraph, X: Iterable[str]) -> CommutationGraph:
    X = set(X)
    vs = tuple(v for v in g.vertices if v in X)
    es = [tuple(e) for e in g.edges if e <= X]
    tags = {e: g.tags[e] for e in g.edges if e <= X and e in g.tags}
    return CommutationGraph(vs, es, tags)


def complement(g: CommutationGraph) -> CommutationGraph:
    """Non-commutation graph: edge iff distinct vertices are not g-adjacent.

    Tags are dropped.
    """
    es = [(u, v) for u, v in itertools.combinations(g.vertices, 2)
          if frozenset((u, v)) not in g.edges]
    return CommutationGraph(g.vertices, es)


def components(g: CommutationGraph) -> list:
    """Connected components as a list of frozensets, ordered by least vertex."""
    adj = g.adjacency()
    seen, out = set(), []
    for v in g.vertices:
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return sorted(out, key=lambda c: min(c))


def is_connected(g: CommutationGraph) -> bool:
    return len(g.vertices) > 0 and len(components(g)) == 1


def link(g: CommutationGraph, X: Iterable[str],
         tag_filter: Optional[str] = None) -> frozenset:
    """Orthogonal complement of X: the common neighbours of all x in X.

    link(empty set) is the whole vertex set (intersection over an empty
    family).  A vertex never lies in its own link.
    """
    X = list(X)
    vset = set(g.vertices)
    for x in X:
        if x not in vset:
            raise ValueError(f"unknown vertex {x!r}")
    adj = g.adjacency(tag_filter)
    out = vset
    for x in X:
        out = out & adj[x]
    return frozenset(out)


def is_closed(g: CommutationGraph, K: Iterable[str],
              tag_filter: Optional[str] = None) -> bool:
    """True iff link(link(K)) == K."""
    K = frozenset(K)
    return link(g, link(g, K, tag_filter), tag_filter) == K


def is_coirreducible(g: CommutationGraph, K: Iterable[str],
                     tag_filter: Optional[str] = None) -> bool:
    """K is closed and its complement K-perp is directly indecomposable.

    Direct indecomposability of K-perp means the non-commutation graph of the
    induced subgraph on K-perp (over the tag-filtered edges) is connected and
    nonempty.
    """
    K = frozenset(K)
    if not is_closed(g, K, tag_filter):
        return False
    perp = link(g, K, tag_filter)
    if not perp:
        return False
    sub = induced(g, perp) if tag_filter is None else _induced_tagged(g, perp, tag_filter)
    return is_connected(complement(sub))


def _induced_tagged(g: CommutationGraph, X, tag_filter: str) -> CommutationGraph:
    X = set(X)
    vs = tuple(v for v in g.vertices if v in X)
    es = [tuple(e) for e in g.edges if e <= X and g.tag(e) == tag_filter]
    return CommutationGraph(vs, es)


def deflate(g: CommutationGraph):
    """Quotient by the equal-link equivalence v1 ~ v2 iff v1-perp == v2-perp.

    Returns (quotient graph, map vertex -> class name).  Each class is named
    after its least member.  Tags are dropped; equal-link vertices are never
    adjacent, and adjacency between classes is well defined.
    """
    adj = g.adjacency()
    classes = {}
    for v in g.vertices:
        classes.setdefault(frozenset(adj[v]), []).append(v)
    names = {}
    for members in classes.values():
        rep = min(members)
        for v in members:
            names[v] = rep
    reps = sorted({names[v] for v in g.vertices},
                  key=lambda r: g.vertices.index(r))
    qedges = set()
    for e in g.edges:
        u, v = tuple(e)
        if names[u] != names[v]:
            qedges.add((names[u], names[v]))
    return CommutationGraph(reps, qedges), names


def width(g: CommutationGraph) -> int:
    """Hyperplane-class count of the associated group's standard complex.

    Equals the number of vertices of the deflation.  Additive over graph
    joins; 1 for edgeless graphs; n for complete graphs on n vertices.
    """
    if not g.vertices:
        raise ValueError("width of the empty graph is undefined")
    q, _ = deflate(g)
    return len(q.vertices)


def double(g: CommutationGraph) -> CommutationGraph:
    """Deflate, then emit two vertices per class with all cross-class edges.

    The two vertices of a class are not adjacent to each other; (v_i, u_j) is
    an edge for all i, j iff (v, u) is an edge of the deflation.
    """
    q, _ = deflate(g)
    vs = [f"{v}_{i}" for v in q.vertices for i in (1, 2)]
    es = []
    for e in q.edges:
        u, v = tuple(e)
        es += [(f"{u}_{i}", f"{v}_{j}") for i in (1, 2) for j in (1, 2)]
    return CommutationGraph(vs, es)


# --- isomorphism via degree-refinement canonical labeling ------------------

def _refine(g: CommutationGraph) -> dict:
    """Iterated degree refinement; returns vertex -> colour id."""
    adj = g.adjacency()
    colour = {v: len(adj[v]) for v in g.vertices}
    while True:
        sig = {v: (colour[v], tuple(sorted(colour[w] for w in adj[v])))
               for v in g.vertices}
        ids = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ids[sig[v]] for v in g.vertices}
        if new == colour:
            return colour
        colour = new


def canonical_form(g: CommutationGraph) -> tuple:
    """Canonical edge-set encoding, invariant under vertex renaming.

    Backtracks over orderings compatible with the degree refinement and takes
    the lexicographically least adjacency encoding.
    """
    n = len(g.vertices)
    colour = _refine(g)
    groups = {}
    for v in g.vertices:
        groups.setdefault(colour[v], []).append(v)
    order = [groups[c] for c in sorted(groups)]
    best = [None]

    def encode(perm):
        idx = {v: i for i, v in enumerate(perm)}
        return tuple(sorted(tuple(sorted((idx[u], idx[v])))
                            for u, v in map(tuple, g.edges)))

    def backtrack(prefix, remaining_groups):
        if not remaining_groups:
            enc = encode(prefix)
            if best[0] is None or enc < best[0]:
                best[0] = enc
            return
        head, tail = remaining_groups[0], remaining_groups[1:]
        for perm in itertools.permutations(head):
            backtrack(prefix + list(perm), tail)

    backtrack([], order)
    return (n, best[0])


def is_isomorphic(g1: CommutationGraph, g2: CommutationGraph) -> bool:
    return canonical_form(g1) == canonical_form(g2)


def enumerate_deflated(max_vertices: int) -> list:
    """All isomorphism classes of graphs equal to their own deflation,
    with at most max_vertices vertices.  Deterministic order."""
    out, seen = [], set()
    for n in range(1, max_vertices + 1):
        names = [f"v{i}" for i in range(n)]
        pairs = list(itertools.combinations(names, 2))
        for bits in range(1 << len(pairs)):
            es = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
            g = CommutationGraph(names, es)
            q, _ = deflate(g)
            if len(q.vertices) != n:
                continue
            cf = canonical_form(g)
            if cf in seen:
                continue
            seen.add(cf)
            out.append(g)
    out.sort(key=canonical_form)
    return out


UNIVERSAL_CAP = 5


def universal_graph(N: int, cap: int = UNIVERSAL_CAP) -> CommutationGraph:
    """Disjoint union of the doubles of all deflated graphs on <= N vertices.

    Every group acting freely co-specially on a cubing of width N embeds in
    the group of this graph.  Vertex names are deterministic: component i
    contributes c{i}_{v}_1 and c{i}_{v}_2 per deflation class v.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if N > cap:
        raise ValueError(f"N={N} above enumeration cap {cap}")
    parts = []
    for i, g in enumerate(enumerate_deflated(N)):
        d = double(g)
        renamed = CommutationGraph(
            [f"c{i}_{v}" for v in d.vertices],
            [(f"c{i}_{u}", f"c{i}_{v}") for u, v in map(tuple, d.edges)])
        parts.append(renamed)
    return disjoint_union(parts)
