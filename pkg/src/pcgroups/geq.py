"""Quadratic constrained generalised equations.

A generalised equation has rho items h_1..h_rho, boundaries 1..rho+1, and
interval-shaped bases that come in dual pairs: the pair (mu, dual(mu)) says
that (h_alpha(mu) ... h_{beta(mu)-1})^eps(mu) and the dual's word are
graphically equal.  A symmetric irreflexive constraint relation on items
requires disjoint commutation of the corresponding solution values.  The
boundary rho_A splits the items into the active part (1..rho_A-1) and the
non-active part.

The quadratic ("one closed active section") shape means: every base lies
entirely in the active or the non-active part, every active boundary
strictly between 1 and rho_A is the start of exactly one base and the end of
exactly one base, and boundaries 1 and rho_A each touch exactly two bases.
Every active item is then covered by exactly two bases, and the active bases
fall into exactly two chains from boundary 1 to boundary rho_A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .graphs import CommutationGraph, link
from .words import GroupWord, disjointly_commutes

Symbol = Tuple[str, int]          # (generator-or-base name, sign)
Word = Tuple[Symbol, ...]


def invert_word(w: Sequence[Symbol]) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


@dataclass(frozen=True)
class Base:
    name: str
    alpha: int
    beta: int
    eps: int
    dual: str

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError(f"base {self.name}: eps must be +-1")
        if not 1 <= self.alpha < self.beta:
            raise ValueError(f"base {self.name}: need 1 <= alpha < beta")

    @property
    def length(self) -> int:
        return self.beta - self.alpha

    @property
    def items(self) -> range:
        return range(self.alpha, self.beta)


@dataclass(frozen=True)
class GeneralisedEquation:
    rho: int
    rho_A: int
    bases: tuple
    constraints: frozenset = frozenset()
    graph: Optional[CommutationGraph] = None

    def __init__(self, rho: int, rho_A: int, bases: Iterable[Base],
                 constraints: Iterable = (), graph: Optional[CommutationGraph] = None):
        bases = tuple(bases)
        if rho < 1:
            raise ValueError("need at least one item")
        if not 1 <= rho_A <= rho + 1:
            raise ValueError("rho_A out of range")
        names = [b.name for b in bases]
        if len(set(names)) != len(names):
            raise ValueError("duplicate base names")
        bymap = {b.name: b for b in bases}
        for b in bases:
            if b.beta > rho + 1:
                raise ValueError(f"base {b.name} exceeds the boundary range")
            d = bymap.get(b.dual)
            if d is None or d.dual != b.name or d.name == b.name:
                raise ValueError(f"dual pairing broken at base {b.name}")
        cons = set()
        for pair in constraints:
            i, j = tuple(pair)
            if i == j:
                raise ValueError("constraints are irreflexive")
            if not (1 <= i <= rho and 1 <= j <= rho):
                raise ValueError("constraint on unknown item")
            cons.add(frozenset((i, j)))
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "rho_A", rho_A)
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "constraints", frozenset(cons))
        object.__setattr__(self, "graph", graph)

    def base(self, name: str) -> Base:
        for b in self.bases:
            if b.name == name:
                return b
        raise KeyError(name)

    def is_active_base(self, b: Base) -> bool:
        return b.beta <= self.rho_A

    def is_nonactive_base(self, b: Base) -> bool:
        return b.alpha >= self.rho_A

    @property
    def active_bases(self) -> list:
        return [b for b in self.bases if self.is_active_base(b)]

    @property
    def nonactive_items(self) -> range:
        return range(self.rho_A, self.rho + 1)

    def is_quadratic_base(self, b: Base) -> bool:
        return self.is_active_base(b) and self.is_active_base(self.base(b.dual))

    def is_coefficient_base(self, b: Base) -> bool:
        return self.is_active_base(b) and self.is_nonactive_base(self.base(b.dual))

    def covering(self, item: int) -> list:
        return [b for b in self.bases if b.alpha <= item < b.beta]

    # --- quadratic single-closed-section shape -----------------------------

    def validate_type12(self):
        if self.rho_A < 2:
            raise ValueError("empty active part")
        for b in self.bases:
            if not (self.is_active_base(b) or self.is_nonactive_base(b)):
                raise ValueError(f"base {b.name} straddles the active boundary")
        starts = {i: [] for i in range(1, self.rho_A + 1)}
        ends = {i: [] for i in range(1, self.rho_A + 1)}
        for b in self.active_bases:
            starts[b.alpha].append(b)
            ends[b.beta].append(b)
        for i in range(2, self.rho_A):
            if len(starts[i]) != 1 or len(ends[i]) != 1:
                raise ValueError(
                    f"boundary {i} must touch exactly one starting and one ending base")
        if len(starts[1]) != 2 or len(ends[self.rho_A]) != 2:
            raise ValueError("boundaries 1 and rho_A must each touch exactly two bases")

    def is_type12(self) -> bool:
        try:
            self.validate_type12()
            return True
        except ValueError:
            return False


@dataclass(frozen=True)
class Solution:
    """A tuple of nonempty geodesic words, one per item."""

    words: tuple

    def __init__(self, words: Sequence[GroupWord]):
        ws = tuple(w for w in words)
        for w in ws:
            if w.is_trivial():
                raise ValueError("solution items must be nonempty")
        object.__setattr__(self, "words", ws)

    def __getitem__(self, item: int) -> GroupWord:
        return self.words[item - 1]

    def __len__(self):
        return len(self.words)


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relations: tuple

    def __init__(self, generators: Iterable[str], relations: Iterable):
        gens = tuple(generators)
        rels = tuple(tuple(r) for r in relations)
        gset = set(gens)
        for r in rels:
            for sym, e in r:
                if sym not in gset:
                    raise ValueError(f"relation uses undeclared generator {sym!r}")
                if e not in (1, -1):
                    raise ValueError("relation signs must be +-1")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", rels)

    def __str__(self):
        rels = ", ".join(word_str(r) for r in self.relations)
        return f"< {' '.join(self.generators)} | {rels} >"


def word_str(w: Sequence[Symbol]) -> str:
    if not w:
        return "1"
    return " ".join(s if e > 0 else f"{s}^-1" for s, e in w)


def _item_word(b: Base) -> Word:
    return tuple((f"h{i}", 1) for i in b.items)


def _oriented_item_word(b: Base, eps: Optional[int] = None) -> Word:
    w = _item_word(b)
    e = b.eps if eps is None else eps
    return w if e > 0 else invert_word(w)


def relations_of(eq: GeneralisedEquation) -> Presentation:
    """One relation per dual pair plus one commutator per constraint."""
    gens = [f"h{i}" for i in range(1, eq.rho + 1)]
    rels = []
    done = set()
    for b in eq.bases:
        key = frozenset((b.name, b.dual))
        if key in done:
            continue
        done.add(key)
        d = eq.base(b.dual)
        rels.append(_oriented_item_word(b) + invert_word(_oriented_item_word(d)))
    for pair in sorted(eq.constraints, key=sorted):
        i, j = sorted(pair)
        rels.append(((f"h{i}", 1), (f"h{j}", 1), (f"h{i}", -1), (f"h{j}", -1)))
    return Presentation(gens, rels)


def check_solution(eq: GeneralisedEquation, sol: Solution) -> bool:
    """Graphical equality of both sides of every dual pair on canonical
    geodesics, geodesicity of the concatenations, and disjoint commutation
    for every constrained pair."""
    if len(sol) != eq.rho:
        raise ValueError(f"solution arity {len(sol)} != rho {eq.rho}")
    graph = sol[1].graph

    def side(b: Base) -> tuple:
        out = []
        for i in b.items:
            out.extend(sol[i].canonical())
        seq = tuple(out)
        if b.eps < 0:
            seq = tuple((g, -s) for g, s in reversed(seq))
        return seq

    for b in eq.bases:
        d = eq.base(b.dual)
        s1, s2 = side(b), side(d)
        if s1 != s2:
            return False
        if len(GroupWord(graph, s1)) != len(s1):
            return False
    for pair in eq.constraints:
        i, j = tuple(pair)
        if not disjointly_commutes(sol[i], sol[j]):
            return False
    return True


# --- tribes ----------------------------------------------------------------

TribeLabel = frozenset


def tribe_centralizer(graph: CommutationGraph, label: TribeLabel) -> frozenset:
    """Generator set of the common centralizer alphabet of the label."""
    return link(graph, label)


def dominates(graph: CommutationGraph, lj: TribeLabel, li: TribeLabel) -> bool:
    return tribe_centralizer(graph, lj) >= tribe_centralizer(graph, li)


def solution_tribes(eq: GeneralisedEquation, sol: Solution) -> dict:
    """The tribe labels induced by a solution: item -> alphabet of its value."""
    from .words import alphabet
    return {i: frozenset(alphabet(sol[i])) for i in range(1, eq.rho + 1)}


def complete_constraints(eq: GeneralisedEquation, tribes: Dict[int, TribeLabel]
                         ) -> GeneralisedEquation:
    """Close the constraint set under tribe dominance: whenever the tribe of
    h_j dominates the tribe of h_i and (h_i, h_k) is constrained, so is
    (h_j, h_k).  Idempotent; never adds reflexive pairs."""
    if eq.graph is None:
        raise ValueError("constraint completion needs the coefficient graph")
    for i in range(1, eq.rho + 1):
        if i not in tribes:
            raise ValueError(f"tribe assignment missing item {i}")
    items = range(1, eq.rho + 1)
    dom = {(j, i): dominates(eq.graph, tribes[j], tribes[i])
           for j in items for i in items}
    cons = set(eq.constraints)
    changed = True
    while changed:
        changed = False
        for pair in list(cons):
            i, k = tuple(pair)
            for (a, b) in ((i, k), (k, i)):
                for j in items:
                    if j != b and dom[(j, a)] and frozenset((j, b)) not in cons:
                        cons.add(frozenset((j, b)))
                        changed = True
    return GeneralisedEquation(eq.rho, eq.rho_A, eq.bases, cons, eq.graph)


def minimal_tribes(eq: GeneralisedEquation, tribes: Dict[int, TribeLabel],
                   fixed_items: Iterable[int] = ()) -> set:
    """Minimal labels among non-fixed active items: labels that do not
    strictly dominate another present label."""
    if eq.graph is None:
        raise ValueError("tribe comparison needs the coefficient graph")
    fixed = set(fixed_items)
    present = {tribes[i] for i in range(1, eq.rho_A) if i not in fixed}
    out = set()
    for l in present:
        cl = tribe_centralizer(eq.graph, l)
        if not any(cl > tribe_centralizer(eq.graph, m) for m in present):
            out.add(l)
    return out


# --- the entire transformation ----------------------------------------------

@dataclass(frozen=True)
class EntireStep:
    equation: GeneralisedEquation
    item_map: dict            # old item -> word over new items
    transported: Optional[Solution]
    split_item: Optional[int]  # old item that acquired a boundary, if any

    def map_word(self, w: Sequence[Symbol]) -> Word:
        out: List[Symbol] = []
        for i, e in w:
            img = self.item_map[i]
            out.extend(img if e > 0 else tuple((j, -f) for j, f in reversed(img)))
        return tuple(out)


def _leading(eq: GeneralisedEquation):
    lead = [b for b in eq.bases if b.alpha == 1]
    if len(lead) != 2:
        raise ValueError("boundary 1 must touch exactly two bases")
    lead.sort(key=lambda b: (b.length, b.name))
    short, long_ = lead
    if long_.length < 2:
        raise ValueError("no long carrier base at boundary 1")
    if short.length != 1:
        raise ValueError("no short transfer base at boundary 1")
    if short.dual == long_.name:
        raise ValueError("transfer base dual to the carrier")
    return long_, short


def entire_transformation(eq: GeneralisedEquation,
                          solution: Optional[Solution] = None) -> EntireStep:
    """One cut-and-transfer step: tie boundary 2 into the carrier's dual,
    move the transfer base there, cut the carrier at boundary 2, drop the
    section [1, 2].

    The tied boundary's position inside the dual is determined by the
    solution when one is given (and the solution is transported); without a
    solution the tie generically splits the outermost item of the dual.
    """
    mu, lam = _leading(eq)
    dmu = eq.base(mu.dual)
    if dmu.alpha < 2:
        raise ValueError("carrier dual overlaps the deleted section")
    s = mu.eps * dmu.eps

    span = list(dmu.items)
    if solution is not None:
        lens = [len(solution[i]) for i in span]
        p = len(solution[1])
        from_left = p if s > 0 else sum(lens) - p
        if not 0 < from_left < sum(lens):
            raise ValueError("solution does not fit the carrier")
        cum, l, off = 0, None, None
        for idx, i in enumerate(span):
            if cum + lens[idx] >= from_left:
                l, off = i, from_left - cum
                break
            cum += lens[idx]
        split = None if off == lens[span.index(l)] else l
        cut_after = l if split is None else None   # existing boundary l+1
    else:
        split = span[0] if s > 0 else span[-1]
        off = None
        cut_after = None

    # --- new item numbering
    new_of: Dict[int, List[int]] = {}
    nxt = 1
    for k in range(2, eq.rho + 1):
        if k == split:
            new_of[k] = [nxt, nxt + 1]
            nxt += 2
        else:
            new_of[k] = [nxt]
            nxt += 1
    new_rho = nxt - 1

    def newb(x: int) -> int:
        # old boundary x >= 2 after deleting item 1 and splitting item `split`
        nb = x - 1
        if split is not None and x > split:
            nb += 1
        return nb

    if split is not None:
        cut_boundary = newb(split) + 1          # the inserted boundary
    else:
        cut_boundary = newb(cut_after + 1)

    new_bases: List[Base] = []
    transfers = [b for b in eq.bases if b.alpha == 1 and b.name not in (mu.name,)]
    tnames = {b.name for b in transfers}
    for b in eq.bases:
        if b.name == mu.name:
            new_bases.append(Base(b.name, newb(2), newb(mu.beta), b.eps, b.dual))
        elif b.name == dmu.name:
            if s > 0:
                new_bases.append(Base(b.name, cut_boundary, newb(dmu.beta), b.eps, b.dual))
            else:
                new_bases.append(Base(b.name, newb(dmu.alpha), cut_boundary, b.eps, b.dual))
        elif b.name in tnames:
            if s > 0:
                new_bases.append(Base(b.name, newb(dmu.alpha), cut_boundary, b.eps, b.dual))
            else:
                new_bases.append(Base(b.name, cut_boundary, newb(dmu.beta), -b.eps, b.dual))
        else:
            new_bases.append(Base(b.name, newb(b.alpha), newb(b.beta), b.eps, b.dual))

    # --- induced rewriting of items
    item_map: Dict[int, Word] = {}
    if s > 0:
        img_items = []
        for i in span:
            if i == split:
                img_items.append(new_of[i][0])
                break
            if cut_after is not None and i > cut_after:
                break
            img_items.append(new_of[i][0])
        item_map[1] = tuple((j, 1) for j in img_items)
    else:
        img_items = []
        started = False
        for i in span:
            if i == split:
                started = True
                img_items.append(new_of[i][1])
                continue
            if cut_after is not None and i == cut_after + 1:
                started = True
            if started:
                img_items.append(new_of[i][0])
        item_map[1] = tuple((j, -1) for j in reversed(img_items))
    for k in range(2, eq.rho + 1):
        item_map[k] = tuple((j, 1) for j in new_of[k])

    new_cons = set()
    for pair in eq.constraints:
        i, j = tuple(pair)
        for x, _ in item_map[i]:
            for y, _ in item_map[j]:
                if x != y:
                    new_cons.add(frozenset((x, y)))

    new_rho_A = eq.rho_A - 1
    if split is not None and split < eq.rho_A:
        new_rho_A += 1

    new_eq = GeneralisedEquation(new_rho, new_rho_A, new_bases, new_cons, eq.graph)

    transported = None
    if solution is not None:
        vals: Dict[int, GroupWord] = {}
        for k in range(2, eq.rho + 1):
            if k == split:
                letters = solution[k].canonical()
                graph = solution[k].graph
                vals[new_of[k][0]] = GroupWord(graph, letters[:off])
                vals[new_of[k][1]] = GroupWord(graph, letters[off:])
            else:
                vals[new_of[k][0]] = solution[k]
        transported = Solution([vals[i] for i in range(1, new_rho + 1)])

    return EntireStep(new_eq, item_map, transported, split)


def complete_entire_transformation(eq: GeneralisedEquation,
                                   solution: Optional[Solution] = None) -> EntireStep:
    """Iterate the cut-and-transfer step until the original carrier is
    consumed (beta(mu) - 2 steps)."""
    mu, _ = _leading(eq)
    steps = mu.beta - 2
    cur, sol = eq, solution
    item_map = {i: ((i, 1),) for i in range(1, eq.rho + 1)}
    last_split = None
    for _ in range(steps):
        st = entire_transformation(cur, sol)
        item_map = {i: st.map_word(w) for i, w in item_map.items()}
        cur, sol, last_split = st.equation, st.transported, st.split_item
    return EntireStep(cur, item_map, sol, last_split)


# --- base change, quadratic word, presentation -------------------------------

def _short_cover(eq: GeneralisedEquation) -> dict:
    out = {}
    for i in range(1, eq.rho_A):
        shorts = [b for b in eq.covering(i) if b.length == 1 and eq.is_active_base(b)]
        if shorts:
            out[i] = min(shorts, key=lambda b: b.name)
    return out


def base_change_psi(eq: GeneralisedEquation) -> Dict[int, Word]:
    """The recursive rewriting of items in terms of base names.

    Short-base-covered items map to their base; an item covered by two long
    bases kappa_1, kappa_2 (meeting there) maps to
    nu_{k-1}^-1 ... nu_{alpha(kappa_1)+1}^-1 psi(h_{alpha(kappa_1)})^-1 kappa_1.
    Non-active items map to themselves.
    """
    eq.validate_type12()
    short = _short_cover(eq)
    psi: Dict[int, Word] = {}
    for k in range(1, eq.rho_A):
        if k in short:
            psi[k] = ((short[k].name, 1),)
            continue
        longs = [b for b in eq.covering(k) if b.length > 1]
        kappa1 = [b for b in longs if b.beta - 1 == k]
        if len(kappa1) != 1:
            raise ValueError(f"item {k} is not the meeting item of two long bases")
        kappa1 = kappa1[0]
        w: List[Symbol] = []
        for j in range(k - 1, kappa1.alpha, -1):
            if j not in short:
                raise ValueError(f"item {j} inside {kappa1.name} lacks a short cover")
            w.append((short[j].name, -1))
        w.extend(invert_word(psi[kappa1.alpha]))
        w.append((kappa1.name, 1))
        psi[k] = tuple(w)
    for i in eq.nonactive_items:
        psi[i] = ((f"h{i}", 1),)
    return psi


def quadratic_word(eq: GeneralisedEquation):
    """The two base chains from boundary 1 to boundary rho_A and their
    quotient W = W1 * W2^-1.  W1 starts at the non-carrier leading base, W2
    at the carrier, matching the worked example convention."""
    eq.validate_type12()
    lead = sorted([b for b in eq.active_bases if b.alpha == 1],
                  key=lambda b: (b.length, b.name))
    start1, start2 = lead[0], lead[1]   # short/transfer first, carrier second
    by_alpha = {b.alpha: b for b in eq.active_bases if b.alpha > 1}

    def chain(b: Base) -> Word:
        out = [(b.name, 1)]
        cur = b
        while cur.beta < eq.rho_A:
            cur = by_alpha[cur.beta]
            out.append((cur.name, 1))
        return tuple(out)

    w1, w2 = chain(start1), chain(start2)
    return w1, w2, w1 + invert_word(w2)


def _item_class(eq: GeneralisedEquation, short: dict, i: int) -> str:
    if i >= eq.rho_A:
        return "nonactive"
    return "short" if i in short else "long"


def xi_set(eq: GeneralisedEquation,
           tribes: Optional[Dict[int, TribeLabel]] = None) -> list:
    """Commutator relations induced by the constraints, per the four cases:
    short/short, short/non-active, long-covered/non-active (one commutator
    per active base), non-active/non-active."""
    eq.validate_type12()
    if tribes is not None:
        _check_completed(eq, tribes)
    short = _short_cover(eq)
    rels = []
    seen = set()

    def comm(x: str, y: str):
        key = frozenset((x, y))
        if key not in seen and x != y:
            seen.add(key)
            rels.append(((x, 1), (y, 1), (x, -1), (y, -1)))

    for pair in sorted(eq.constraints, key=sorted):
        i, j = sorted(pair)
        ci, cj = _item_class(eq, short, i), _item_class(eq, short, j)
        if {ci, cj} == {"short"}:
            comm(short[i].name, short[j].name)
        elif {ci, cj} == {"short", "nonactive"}:
            a, b = (i, j) if ci == "short" else (j, i)
            comm(short[a].name, f"h{b}")
        elif {ci, cj} == {"long", "nonactive"}:
            b = j if ci == "long" else i
            for eta in sorted(eq.active_bases, key=lambda x: x.name):
                comm(eta.name, f"h{b}")
        elif {ci, cj} == {"nonactive"}:
            comm(f"h{i}", f"h{j}")
        else:
            raise ValueError(
                f"constraint ({i},{j}) pairs a minimal-tribe item with an active item")
    return rels


def _check_completed(eq: GeneralisedEquation, tribes: Dict[int, TribeLabel]):
    if complete_constraints(eq, tribes).constraints != eq.constraints:
        raise ValueError("constraint set is not completed")


def presentation_K(eq: GeneralisedEquation,
                   tribes: Optional[Dict[int, TribeLabel]] = None) -> Presentation:
    """Presentation of the equation's group on the active bases and the
    non-active items: W, the quadratic dual-pair identifications, the
    quadratic-coefficient identifications, the non-active relations, and the
    constraint commutators."""
    eq.validate_type12()
    if tribes is not None:
        _check_completed(eq, tribes)
        short = _short_cover(eq)
        minimal = minimal_tribes(eq, tribes)
        long_items = [i for i in range(1, eq.rho_A) if i not in short]
        for i in long_items:
            if tribes[i] not in minimal:
                raise ValueError(f"item {i} covered by two long bases is not minimal")
    gens = [b.name for b in eq.active_bases] + [f"h{i}" for i in eq.nonactive_items]
    rels = []
    _, _, w = quadratic_word(eq)
    rels.append(w)
    done = set()
    for b in eq.active_bases:
        key = frozenset((b.name, b.dual))
        if key in done:
            continue
        done.add(key)
        d = eq.base(b.dual)
        if eq.is_active_base(d):
            rels.append(((b.name, b.eps), (d.name, -d.eps)))
        else:
            rels.append(((b.name, b.eps),) + invert_word(_oriented_item_word(d)))
    for b in eq.bases:
        if not eq.is_nonactive_base(b):
            continue
        key = frozenset((b.name, b.dual))
        if key in done:
            continue
        d = eq.base(b.dual)
        if not eq.is_nonactive_base(d):
            continue
        done.add(key)
        rels.append(_oriented_item_word(b) + invert_word(_oriented_item_word(d)))
    rels.extend(xi_set(eq, tribes))
    return Presentation(gens, rels)


def rho_map(eq: GeneralisedEquation) -> Dict[str, Word]:
    """The inverse rewriting: each presentation generator as a word in the
    items (a base maps to its item interval, a non-active item to itself)."""
    out = {}
    for b in eq.active_bases:
        out[b.name] = _item_word(b)
    for i in eq.nonactive_items:
        out[f"h{i}"] = ((f"h{i}", 1),)
    return out


def free_reduce(w: Sequence[Symbol]) -> Word:
    stack: List[Symbol] = []
    for sym in w:
        if stack and stack[-1] == (sym[0], -sym[1]):
            stack.pop()
        else:
            stack.append(sym)
    return tuple(stack)


def substitute(w: Sequence[Symbol], images: Dict[str, Word]) -> Word:
    out: List[Symbol] = []
    for s, e in w:
        img = images[s]
        out.extend(img if e > 0 else invert_word(img))
    return free_reduce(out)
