"""Elements of a partially commutative group as words over signed generators.

A word is a sequence of letters (generator name, sign).  The canonical form
of an element is the ShortLex-least shuffle of a geodesic: first cancel every
pair (x, x^-1) separated only by letters commuting with x, then take the
lexicographically least linearization of the resulting trace.  Two words are
equal in the group iff their canonical forms are identical sequences.

Letters are ordered by (generator name, sign) with the positive letter first,
so a < a^-1 < b < b^-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .graphs import CommutationGraph, complement, components, induced

Letter = Tuple[str, int]


def inv_letter(l: Letter) -> Letter:
    return (l[0], -l[1])


def invert(letters: Sequence[Letter]) -> tuple:
    return tuple(inv_letter(l) for l in reversed(letters))


def _letter_key(l: Letter):
    return (l[0], 0 if l[1] > 0 else 1)


@dataclass(frozen=True)
class GroupWord:
    """A group element of the partially commutative group of `graph`.

    `letters` is the defining sequence; `canonical()` caches the geodesic
    ShortLex normal form.
    """

    graph: CommutationGraph
    letters: tuple

    def __init__(self, graph: CommutationGraph, letters: Iterable = ()):
        lets = []
        vset = set(graph.vertices)
        for l in letters:
            g, s = l
            if g not in vset:
                raise ValueError(f"undeclared generator {g!r}")
            if s not in (1, -1):
                raise ValueError(f"bad sign {s!r}")
            lets.append((g, s))
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "letters", tuple(lets))
        object.__setattr__(self, "_canon", None)

    def canonical(self) -> tuple:
        if self._canon is None:
            object.__setattr__(self, "_canon",
                               canonical_letters(self.graph, self.letters))
        return self._canon

    def __len__(self):
        return len(self.canonical())

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if other.graph is not self.graph and other.graph != self.graph:
            raise ValueError("ambient graph mismatch")
        return GroupWord(self.graph, self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.graph, invert(self.letters))

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        return GroupWord(self.graph, self.letters * n)

    def is_trivial(self) -> bool:
        return not self.canonical()

    def __str__(self):
        return word_to_str(self.letters)

    def __repr__(self):
        return f"GroupWord({word_to_str(self.letters)!r})"


def word_to_str(letters: Sequence[Letter]) -> str:
    if not letters:
        return "1"
    return " ".join(g if s > 0 else g + "'" for g, s in letters)


def parse_word(graph: CommutationGraph, text: str) -> GroupWord:
    """Parse whitespace-separated tokens; a trailing apostrophe marks the
    inverse letter, e.g. "a b' a"."""
    letters = []
    for tok in text.split():
        if tok == "1":
            continue
        if tok.endswith("'"):
            letters.append((tok[:-1], -1))
        else:
            letters.append((tok, 1))
    return GroupWord(graph, letters)


# --- geodesic reduction -----------------------------------------------------

def _cancel_to_geodesic(adj: dict, letters: list) -> list:
    """Delete pairs (x, x^-1) separated only by letters commuting with x,
    until none remain.  The result is a geodesic for the same element."""
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        n = len(letters)
        for i in range(n):
            g, s = letters[i]
            nbrs = adj[g]
            for j in range(i + 1, n):
                g2, s2 = letters[j]
                if g2 == g:
                    if s2 == -s:
                        del letters[j]
                        del letters[i]
                        changed = True
                    break
                if g2 not in nbrs:
                    break
            if changed:
                break
    return letters


def _lex_least_shuffle(adj: dict, letters: list) -> tuple:
    """Lexicographically least linearization of the trace of `letters`."""
    rem = list(letters)
    out = []
    while rem:
        best = None
        for i, l in enumerate(rem):
            g = l[0]
            blocked = False
            for k in range(i):
                g2 = rem[k][0]
                if g2 == g or g2 not in adj[g]:
                    blocked = True
                    break
            if blocked:
                continue
            if best is None or _letter_key(l) < _letter_key(rem[best]):
                best = i
        out.append(rem.pop(best))
    return tuple(out)


def canonical_letters(graph: CommutationGraph, letters: Sequence[Letter]) -> tuple:
    adj = graph.adjacency()
    if not graph.edges:
        # free group: plain stack reduction, no shuffles
        stack = []
        for l in letters:
            if stack and stack[-1] == inv_letter(l):
                stack.pop()
            else:
                stack.append(l)
        return tuple(stack)
    geo = _cancel_to_geodesic(adj, list(letters))
    return _lex_least_shuffle(adj, geo)


def reduce(w: GroupWord) -> GroupWord:
    """Canonical geodesic representative of w (idempotent, length-minimal)."""
    return GroupWord(w.graph, w.canonical())


def equal(u: GroupWord, v: GroupWord) -> bool:
    if u.graph != v.graph:
        raise ValueError("ambient graph mismatch")
    return not canonical_letters(u.graph, u.letters + invert(v.letters))


def alphabet(w: GroupWord) -> frozenset:
    """Generators occurring in a geodesic of w (all geodesics agree)."""
    return frozenset(g for g, _ in w.canonical())


def cyclic_reduce(w: GroupWord):
    """Split w = conjugator * core * conjugator^-1 with core cyclically
    reduced (the square of the core is twice as long as the core)."""
    adj = w.graph.adjacency()
    core = list(w.canonical())
    conj = []
    while True:
        found = None
        n = len(core)
        for i in range(n):
            g, s = core[i]
            if any(core[k][0] == g or core[k][0] not in adj[g] for k in range(i)):
                continue  # letter i cannot move to the front
            for j in range(n - 1, i, -1):
                g2, s2 = core[j]
                if g2 == g and s2 == -s:
                    if all(core[k][0] in adj[g] for k in range(j + 1, n)):
                        found = (i, j)
                    break
                if g2 == g or g2 not in adj[g]:
                    break
            if found:
                break
        if not found:
            break
        i, j = found
        conj.append(core[i])
        del core[j]
        del core[i]
    core_w = GroupWord(w.graph, canonical_letters(w.graph, core))
    conj_w = GroupWord(w.graph, canonical_letters(w.graph, conj))
    return core_w, conj_w


def centralizer_alphabet(w: GroupWord) -> frozenset:
    """Generator set of the subgroup of letters absent from w that commute
    with w.  For cyclically reduced w this is link(alphabet(w))."""
    az = alphabet(w)
    out = set()
    for x in w.graph.vertices:
        if x in az:
            continue
        xw = GroupWord(w.graph, ((x, 1),) + w.letters)
        wx = GroupWord(w.graph, w.letters + ((x, 1),))
        if equal(xw, wx):
            out.add(x)
    return frozenset(out)


def disjointly_commutes(u: GroupWord, v: GroupWord) -> bool:
    if alphabet(u) & alphabet(v):
        return False
    return equal(u * v, v * u)


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple      # GroupWords, pairwise disjointly commuting
    partition: tuple   # frozensets partitioning alphabet(w)


def block_decomposition(w: GroupWord) -> BlockDecomposition:
    """Split w into pairwise disjointly commuting blocks, one per connected
    component of the non-commutation graph on alphabet(w)."""
    can = w.canonical()
    az = frozenset(g for g, _ in can)
    if not az:
        return BlockDecomposition((), ())
    comps = components(complement(induced(w.graph, az)))
    blocks = []
    for comp in comps:
        sub = tuple(l for l in can if l[0] in comp)
        blocks.append(GroupWord(w.graph, sub))
    return BlockDecomposition(tuple(blocks), tuple(comps))


def is_block(w: GroupWord) -> bool:
    return len(block_decomposition(w).blocks) == 1


def is_irreducible(w: GroupWord) -> bool:
    """True iff w is a conjugate of a cyclically reduced block element."""
    if w.is_trivial():
        raise ValueError("the trivial word is neither reducible nor irreducible")
    core, _ = cyclic_reduce(w)
    return is_block(core)


def _dependence_edges(adj: dict, letters: Sequence[Letter]) -> list:
    n = len(letters)
    preds = [[] for _ in range(n)]
    for j in range(n):
        gj = letters[j][0]
        for i in range(j):
            gi = letters[i][0]
            if gi == gj or gi not in adj[gj]:
                preds[j].append(i)
    return preds


def _order_ideals(preds: list, size: int, n: int):
    """All downward-closed position sets of the given size."""

    def rec(chosen: frozenset, start: int):
        if len(chosen) == size:
            yield chosen
            return
        if n - start < size - len(chosen):
            return
        for i in range(start, n):
            if all(p in chosen for p in preds[i]):
                yield from rec(chosen | {i}, i + 1)

    yield from rec(frozenset(), 0)


def least_root(w: GroupWord):
    """Maximal-exponent root: w = root ** exponent, exponent maximal.

    Works on the cyclically reduced core; left divisors of the core are
    enumerated as order ideals of its dependence graph (a root need not be
    a prefix of the chosen shuffle).  Returns (w, 1) when w is not a proper
    power.
    """
    if w.is_trivial():
        raise ValueError("the trivial word has no root")
    core, conj = cyclic_reduce(w)
    can = core.canonical()
    n = len(can)
    adj = w.graph.adjacency()
    preds = _dependence_edges(adj, can)
    for m in range(n, 1, -1):
        if n % m:
            continue
        d = n // m
        for ideal in _order_ideals(preds, d, n):
            u = GroupWord(w.graph, tuple(can[i] for i in sorted(ideal)))
            if equal(u ** m, core):
                root = reduce(conj * u * conj.inverse())
                return root, m
    return reduce(w), 1
