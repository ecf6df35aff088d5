"""Serialization of traces: clans, median positions, and the recursive
normal form that linearizes one thin clan at a time.

The normal form operates on a letter sequence viewed as an element of the
trace monoid on the signed alphabet (commutations are sign-blind, and a
letter never commutes with itself or its inverse).  Each round designates a
thin clan C, computes source/target/median positions of every vertex of the
dependence graph against the C-occurrences, orients every (C, non-C)
commuting pair by comparing global positions, and then removes C's
commutation relations.  When no thin clan remains the dependence graph is a
total order and its unique linearization is the normal form.

The alternation counter bounds how often a sequence switches between the two
factors of a direct-product parabolic subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import CommutationGraph
from .words import GroupWord, Letter, invert


@dataclass(frozen=True)
class Clan:
    """Maximal set of signed letters with identical non-commutation
    behaviour.  Stored by the positive generators; the letter set is closed
    under inversion.  Thin means some outside letter commutes with it."""

    generators: frozenset
    thin: bool

    @property
    def letters(self) -> frozenset:
        return frozenset((g, s) for g in self.generators for s in (1, -1))


def clans(graph: CommutationGraph) -> list:
    """Partition of the signed alphabet into clans, sorted by least
    generator.  At most one clan is thick, and the thin count is never 1."""
    adj = graph.adjacency()
    byhood = {}
    for v in graph.vertices:
        byhood.setdefault(frozenset(adj[v]), []).append(v)
    out = [Clan(frozenset(ms), thin=bool(hood)) for hood, ms in byhood.items()]
    out.sort(key=lambda c: min(c.generators))
    assert sum(c.thin for c in out) != 1
    return out


@dataclass(frozen=True)
class DependenceGraph:
    """Acyclic orientation of the dependence relation of a letter sequence:
    vertices 1..n in input order, edge i->j iff i<j and the letters at i, j
    do not commute (same-generator letters never commute)."""

    labels: tuple
    edges: frozenset


def dependence_graph(w) -> DependenceGraph:
    letters = w.letters if isinstance(w, GroupWord) else tuple(w)
    graph = w.graph if isinstance(w, GroupWord) else None
    if graph is None:
        raise TypeError("dependence_graph expects a GroupWord")
    adj = graph.adjacency()
    es = set()
    n = len(letters)
    for j in range(n):
        gj = letters[j][0]
        for i in range(j):
            gi = letters[i][0]
            if gi == gj or gi not in adj[gj]:
                es.add((i + 1, j + 1))
    return DependenceGraph(tuple(letters), frozenset(es))


def _toposort(n: int, succ: list) -> list:
    indeg = [0] * n
    for v in range(n):
        for u in succ[v]:
            indeg[u] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                stack.append(u)
    if len(order) != n:
        raise AssertionError("dependence graph acquired a cycle")
    return order


def _unique_linearization(n: int, succ: list) -> list:
    indeg = [0] * n
    for v in range(n):
        for u in succ[v]:
            indeg[u] += 1
    avail = [v for v in range(n) if indeg[v] == 0]
    order = []
    while avail:
        assert len(avail) == 1, "final dependence graph is not a total order"
        v = avail.pop()
        order.append(v)
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                avail.append(u)
    return order


def nf_letters(graph: CommutationGraph, letters: Sequence[Letter]) -> tuple:
    """Normal form of a trace given as an explicit letter sequence."""
    letters = tuple(letters)
    n = len(letters)
    if n == 0:
        return ()
    comm = {v: set(ws) for v, ws in graph.adjacency().items()}
    gens = [l[0] for l in letters]
    signs = [l[1] for l in letters]

    succ = [set() for _ in range(n)]
    for j in range(n):
        for i in range(j):
            if gens[i] == gens[j] or gens[j] not in comm[gens[i]]:
                succ[i].add(j)

    while True:
        byhood = {}
        for v in sorted(comm):
            byhood.setdefault(frozenset(comm[v]), []).append(v)
        thin = [ms for hood, ms in byhood.items() if hood]
        if not thin:
            break
        C = set(min(thin, key=lambda ms: min(ms)))

        order = _toposort(n, succ)
        desc = [0] * n
        for v in reversed(order):
            m = 0
            for u in succ[v]:
                m |= desc[u] | (1 << u)
            desc[v] = m

        cpos = [v for v in order if gens[v] in C]
        q = len(cpos)
        # prefix counts over the C-occurrence sequence, 1-based
        npos = [0] * (q + 1)
        nneg = [0] * (q + 1)
        for i, v in enumerate(cpos, start=1):
            npos[i] = npos[i - 1] + (signs[v] > 0)
            nneg[i] = nneg[i - 1] + (signs[v] < 0)

        def leq(u, v):
            return u == v or (desc[u] >> v) & 1

        # doubled global positions: C-occurrence i sits at 2i, medians at 2l+1
        g2 = [0] * n
        cindex = {v: i for i, v in enumerate(cpos, start=1)}
        for v in range(n):
            if gens[v] in C:
                g2[v] = 2 * cindex[v]
                continue
            s = 0
            for i in range(q, 0, -1):
                if leq(cpos[i - 1], v):
                    s = i
                    break
            t = q + 1
            for i in range(1, q + 1):
                if leq(v, cpos[i - 1]):
                    t = i
                    break
            # unique l in [s, t) with #neg(c_{s+1}..c_l) == #pos(c_{l+1}..c_{t-1})
            l = s + (npos[t - 1] - npos[s])
            assert s <= l < t and (nneg[l] - nneg[s]) == (npos[t - 1] - npos[l])
            g2[v] = 2 * l + 1

        for v in range(n):
            if gens[v] not in C:
                continue
            for u in range(n):
                if gens[u] in comm[gens[v]]:
                    if g2[u] < g2[v]:
                        succ[u].add(v)
                    else:
                        succ[v].add(u)

        for c in C:
            for other in comm[c]:
                comm[other].discard(c)
            comm[c] = set()

    return tuple(letters[v] for v in _unique_linearization(n, succ))


def dm_normal_form(w: GroupWord) -> tuple:
    """Normal form of the canonical geodesic of w, as a letter sequence."""
    return nf_letters(w.graph, w.canonical())


def trace_equal(graph: CommutationGraph, s1: Sequence[Letter],
                s2: Sequence[Letter]) -> bool:
    """Equality in the trace monoid (no cancellation): compare the
    lexicographically least linearizations."""
    from .words import _lex_least_shuffle
    adj = graph.adjacency()
    return _lex_least_shuffle(adj, list(s1)) == _lex_least_shuffle(adj, list(s2))


def count_alternations(seq: Sequence[Letter], H1: Iterable[str],
                       H2: Iterable[str], graph: CommutationGraph) -> int:
    """2k-1 where k is maximal with seq containing a scattered subword
    v1 u1 ... vk uk, the v's nonempty over H1 and the u's over H2; 0 when
    there is no alternation.  H1 and H2 must span a direct-product parabolic:
    disjoint, nonempty, and fully joined in the graph."""
    H1, H2 = frozenset(H1), frozenset(H2)
    if not H1 or not H2 or H1 & H2:
        raise ValueError("H1, H2 must be disjoint and nonempty")
    for x in H1:
        for y in H2:
            if not graph.has_edge(x, y):
                raise ValueError(f"H1, H2 do not disjointly commute: ({x},{y})")
    k = 0
    pending = False
    for g, _ in seq:
        if g in H1:
            pending = True
        elif g in H2 and pending:
            k += 1
            pending = False
    return 2 * k - 1 if k else 0
