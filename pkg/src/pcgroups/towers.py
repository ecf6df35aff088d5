"""Graph towers: iterated floor-by-floor extensions over a partially
commutative base group.

A tower starts from an all-d commutation graph and grows one floor at a
time.  Every floor names a subgroup K of the current graph that must be
d-co-irreducible; the fresh generators get d-edges to K, and, when K-perp is
not directly indecomposable over all edges (it is then necessarily
c-abelian, cyclic included), c-edges among themselves and to K-perp.  The
floor kinds differ in the extra relations they impose:

    basic         nothing beyond the commutations (the centralizer relations
                  [C(K-perp), x_i] are realised by the added edges),
    abelian_root  [C(u), x_i] for a cyclically reduced irreducible root
                  element u over K-perp,
    abelian_basic nothing beyond the commutations, fresh generators commute,
    quadratic     a surface relation in the fresh generators with coefficient
                  words over K-perp (the closed-torus relation [x1,x2] with
                  trivial coefficient side is realised by a c-edge instead).

The c-edge set always stays a disjoint union of cliques.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .graphs import (CommutationGraph, complement, components, induced,
                     is_closed, is_coirreducible, link)
from . import words as W
from .words import GroupWord

Letter = Tuple[str, int]


@dataclass(frozen=True)
class QuadraticData:
    """Surface relation data: the left side uses the fresh generators, the
    right side repeats the shape with coefficient words over K-perp.

    Orientable:      [x_1,x_2]...[x_{2g-1},x_{2g}] u_{2g+1}^{x_{2g+1}} ... u_m^{x_m}
                   = [v_1,v_2]...                  u_{2g+1}^{w_{2g+1}} ... u_m^{w_m}
    Non-orientable:  x_1^2 ... x_{2g}^2 u^x...  =  v_1^2 ... v_{2g}^2 u^w...

    g is the paper-style genus index (the genus part uses 2g variables in
    both cases); m = 2g + len(u) is the total variable count.
    """

    orientable: bool
    genus: int
    u: tuple = ()
    v: tuple = ()
    w: tuple = ()

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if len(self.v) != 2 * self.genus:
            raise ValueError("need exactly 2g coefficient words v")
        if len(self.w) != len(self.u):
            raise ValueError("need one conjugator w per coefficient u")

    @property
    def m(self) -> int:
        return 2 * self.genus + len(self.u)


def euler_characteristic(q: QuadraticData) -> int:
    """2 - 2g - punctures (orientable), 2 - squares - punctures otherwise;
    both equal 2 minus the variable count."""
    punctures = len(q.u)
    if q.orientable:
        return 2 - 2 * q.genus - punctures
    return 2 - 2 * q.genus - punctures


@dataclass(frozen=True)
class Floor:
    kind: str                      # basic | abelian_root | abelian_basic | quadratic
    fresh: tuple
    K: frozenset
    root: Optional[GroupWord] = None
    quadratic: Optional[QuadraticData] = None

    def __init__(self, kind: str, fresh: Iterable[str], K: Iterable[str],
                 root: Optional[GroupWord] = None,
                 quadratic: Optional[QuadraticData] = None):
        if kind not in ("basic", "abelian_root", "abelian_basic", "quadratic"):
            raise ValueError(f"unknown floor kind {kind!r}")
        fresh = tuple(fresh)
        if not fresh:
            raise ValueError("a floor needs at least one fresh generator")
        if kind == "abelian_root" and root is None:
            raise ValueError("abelian_root floor needs the root element")
        if kind == "quadratic":
            if quadratic is None:
                raise ValueError("quadratic floor needs its surface data")
            if len(fresh) != quadratic.m:
                raise ValueError(
                    f"quadratic floor needs m={quadratic.m} fresh generators")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "fresh", fresh)
        object.__setattr__(self, "K", frozenset(K))
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "quadratic", quadratic)


@dataclass(frozen=True)
class Relation:
    """A non-commutation relation of a floor: either a commutator of a fresh
    generator with a named word / symbolic centralizer generator, or a
    surface relation lhs = rhs."""

    kind: str          # 'centralizer_comm' | 'surface'
    lhs: tuple
    rhs: tuple
    note: str = ""

    def as_relator(self) -> tuple:
        return tuple(self.lhs) + tuple((g, -s) for g, s in reversed(self.rhs))


@dataclass(frozen=True)
class FloorRecord:
    floor: Floor
    graph: CommutationGraph        # graph after this floor
    kperp: frozenset
    kperp_kind: str                # 'indecomposable' | 'abelian'
    relations: tuple               # Relation, beyond the commutations
    checks: tuple                  # (name, status, detail) validation notes
    rank_one: bool = False


@dataclass(frozen=True)
class GraphTower:
    base: CommutationGraph
    records: tuple = ()

    def __post_init__(self):
        for e in self.base.edges:
            if self.base.tag(e) != "d":
                raise ValueError("base graph must be all d-edges")

    @property
    def height(self) -> int:
        return len(self.records)

    def graph_at(self, level: int) -> CommutationGraph:
        if level == 0:
            return self.base
        return self.records[level - 1].graph

    @property
    def graph(self) -> CommutationGraph:
        return self.graph_at(self.height)

    def relations_at(self, level: int) -> tuple:
        return self.records[level - 1].relations

    def all_relations(self) -> list:
        out = []
        for r in self.records:
            out.extend(r.relations)
        return out

    def basic_only(self) -> bool:
        return all(r.floor.kind == "basic" for r in self.records)


def _dlink(g: CommutationGraph, K) -> frozenset:
    return link(g, K, tag_filter="d")


def _kperp_kind(g: CommutationGraph, kperp: frozenset) -> str:
    """Directly indecomposable over all edges, or c-abelian (the only two
    legal shapes for the complement of a co-irreducible subgroup)."""
    if len(kperp) >= 2:
        sub = induced(g, kperp)
        if len(components(complement(sub))) == 1:
            return "indecomposable"
        for e_u in kperp:
            for e_v in kperp:
                if e_u < e_v and not g.has_edge(e_u, e_v, tag_filter="c"):
                    raise ValueError(
                        "K-perp is directly decomposable but not c-abelian")
        return "abelian"
    return "abelian"   # cyclic K-perp behaves as the abelian case


def _centralizer_generators(g: CommutationGraph, Y: frozenset) -> frozenset:
    """Generators of the centralizer of the parabolic on Y in the group of g:
    the link of Y plus the vertices of Y adjacent to all the rest of Y."""
    out = set(link(g, Y))
    for y in Y:
        if all(g.has_edge(y, z) for z in Y if z != y):
            out.add(y)
    return frozenset(out)


def _quadratic_sides(fresh: Sequence[str], q: QuadraticData,
                     coeff_graph: CommutationGraph):
    """Letter sequences of both sides of the surface relation."""
    g2 = 2 * q.genus
    lhs: List[Letter] = []
    rhs: List[Letter] = []
    if q.orientable:
        for i in range(0, g2, 2):
            a, b = fresh[i], fresh[i + 1]
            lhs += [(a, -1), (b, -1), (a, 1), (b, 1)]
        for i in range(0, g2, 2):
            va, vb = q.v[i], q.v[i + 1]
            rhs += list(va.inverse().letters) + list(vb.inverse().letters) \
                + list(va.letters) + list(vb.letters)
    else:
        for i in range(g2):
            lhs += [(fresh[i], 1), (fresh[i], 1)]
        for i in range(g2):
            rhs += list(q.v[i].letters) * 2
    for k, u in enumerate(q.u):
        x = fresh[g2 + k]
        lhs += [(x, -1)] + list(u.letters) + [(x, 1)]
        wk = q.w[k]
        rhs += list(wk.inverse().letters) + list(u.letters) + list(wk.letters)
    return tuple(lhs), tuple(rhs)


def _validate_root(prev: CommutationGraph, kperp: frozenset, u: GroupWord):
    if u.graph != prev:
        raise ValueError("root element must live in the previous floor's group")
    if u.is_trivial():
        raise ValueError("root element must be nontrivial")
    if not W.alphabet(u) <= kperp:
        raise ValueError("root element alphabet must lie inside K-perp")
    if len(u * u) != 2 * len(u):
        raise ValueError("root element must be cyclically reduced")
    if not W.is_block(u):
        raise ValueError("root element must be a block")
    if W.least_root(u)[1] != 1:
        raise ValueError("root element must not be a proper power")


def _star_checks(tower: GraphTower, prev: CommutationGraph, f: Floor,
                 kperp: frozenset) -> list:
    """The non-degeneracy conditions on a quadratic relation.  They are
    decided only when every floor below is basic (the tower group is then the
    partially commutative group of its graph); otherwise they are recorded as
    assumed."""
    q = f.quadratic
    checks = []
    chi = euler_characteristic(q)
    if not tower.basic_only():
        checks.append(("star", "assumed",
                       "lower floors are not all basic; conditions not decidable here"))
        return checks
    coeff = list(q.u) + list(q.v) + list(q.w)

    def nonabelian(ws):
        ws = [w for w in ws if not w.is_trivial()]
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                if not W.equal(ws[i] * ws[j], ws[j] * ws[i]):
                    return True
        return False

    star = False
    if chi <= -2:
        star = True
        checks.append(("star", "passed", f"Euler characteristic {chi} <= -2"))
    elif q.orientable and q.genus == 1 and q.m == 3 and nonabelian(coeff):
        star = True
        checks.append(("star", "passed", "punctured torus with non-abelian retraction"))
    if not star:
        atoms = []
        if q.orientable:
            for i in range(0, 2 * q.genus, 2):
                va, vb = q.v[i], q.v[i + 1]
                atoms.append(va.inverse() * vb.inverse() * va * vb)
        else:
            for i in range(2 * q.genus):
                atoms.append(q.v[i] * q.v[i])
        for k, u in enumerate(q.u):
            atoms.append(q.w[k].inverse() * u * q.w[k])
        if q.genus + q.m >= 2 and nonabelian(atoms):
            checks.append(("star_star", "passed",
                           "atom subgroup of the coefficient side is non-abelian"))
        else:
            raise ValueError(
                "quadratic relation fails both non-degeneracy conditions")
    return checks


def add_floor(tower: GraphTower, f: Floor) -> GraphTower:
    """Validate the floor against the current graph and return the grown
    tower.  Raises ValueError on co-irreducibility, c-transitivity, or
    surface-condition failures."""
    prev = tower.graph
    if set(f.fresh) & set(prev.vertices):
        raise ValueError("fresh generators collide with existing vertices")
    if not f.K <= set(prev.vertices):
        raise ValueError("K must be a vertex subset of the current graph")
    if not is_coirreducible(prev, f.K, tag_filter="d"):
        raise ValueError("K is not d-co-irreducible in the current graph")
    kperp = _dlink(prev, f.K)
    kkind = _kperp_kind(prev, kperp)
    checks = [("co-irreducible", "passed", f"K-perp = {sorted(kperp)} ({kkind})")]

    vertices = list(prev.vertices) + list(f.fresh)
    edges = {tuple(e) for e in prev.edges}
    tags = dict(prev.tags)

    def add(u, v, tag):
        edges.add((u, v))
        tags[frozenset((u, v))] = tag

    for x in f.fresh:
        for k in sorted(f.K):
            add(x, k, "d")

    rank_one = False
    relations: List[Relation] = []

    if f.kind == "quadratic":
        q = f.quadratic
        trivial_rhs = all(w.is_trivial() for w in q.v) and not q.u
        if q.orientable and q.genus == 1 and q.m == 2 and trivial_rhs:
            rank_one = True
            checks.append(("rank-one", "passed",
                           "closed torus relation realised as a c-edge"))
        else:
            for w in list(q.u) + list(q.v) + list(q.w):
                if w.graph != prev:
                    raise ValueError("coefficient words must live one floor down")
                if not W.alphabet(w) <= kperp:
                    raise ValueError("coefficient word alphabet must lie in K-perp")
            checks.extend(_star_checks(tower, prev, f, kperp))

    fresh_clique = (f.kind in ("abelian_root", "abelian_basic") or rank_one
                    or kkind == "abelian")
    if fresh_clique:
        for i, x in enumerate(f.fresh):
            for y in f.fresh[i + 1:]:
                add(x, y, "c")
    if kkind == "abelian":
        for x in f.fresh:
            for y in sorted(kperp):
                add(x, y, "c")

    new_graph = CommutationGraph(vertices, edges, tags)

    if f.kind == "abelian_root":
        _validate_root(prev, kperp, f.root)
        if not tower.basic_only():
            checks.append(("centralizer", "assumed",
                           "C(u) above a non-basic floor is symbolic; only its "
                           "declared commutations are emitted"))
        cgens = centralizer_of_element_generators(prev, f.root)
        for x in f.fresh:
            for part, note in cgens:
                if len(part) == 1 and new_graph.has_edge(x, part[0][0]):
                    continue   # already a commutation edge
                relations.append(Relation(
                    "centralizer_comm",
                    ((x, 1),) + tuple(part) + ((x, -1),),
                    tuple(part),
                    note=note))
    elif f.kind == "quadratic" and not rank_one:
        lhs, rhs = _quadratic_sides(f.fresh, f.quadratic, prev)
        relations.append(Relation("surface", lhs, rhs))

    rec = FloorRecord(f, new_graph, kperp, kkind, tuple(relations),
                      tuple(checks), rank_one)
    return GraphTower(tower.base, tower.records + (rec,))


def centralizer_of_element_generators(g: CommutationGraph, u: GroupWord):
    """Generating words of the centralizer of a cyclically reduced
    irreducible root element: the element itself and the letters commuting
    with its alphabet."""
    out = [(tuple(u.canonical()), "the root element")]
    for a in sorted(link(g, W.alphabet(u))):
        out.append((((a, 1),), f"commuting letter {a}"))
    return out


# --- validation report -------------------------------------------------------

def validate(tower: GraphTower) -> list:
    """Re-run the structural checks on every floor: c-transitivity of each
    graph, co-irreducibility of each K, and the per-floor notes."""
    report = []
    for lvl, rec in enumerate(tower.records, start=1):
        # c-transitivity holds by CommutationGraph construction; confirm the
        # cluster shape explicitly
        cgraph = CommutationGraph(
            rec.graph.vertices,
            [tuple(e) for e in rec.graph.edges if rec.graph.tag(e) == "c"])
        for comp in components(cgraph):
            for u in comp:
                for v in comp:
                    if u < v and not cgraph.has_edge(u, v):
                        raise ValueError(f"floor {lvl}: c-edges not transitive")
        report.append((lvl, rec.floor.kind, rec.checks))
    return report


def max_c_clique(g: CommutationGraph) -> int:
    """The c-subgraph is a union of cliques, so its largest clique is its
    largest connected component."""
    cgraph = CommutationGraph(
        g.vertices, [tuple(e) for e in g.edges if g.tag(e) == "c"])
    comps = components(cgraph)
    return max((len(c) for c in comps), default=0)


def retraction_check(tower: GraphTower, level: int) -> bool:
    """The natural retraction onto the previous floor kills the floor's
    relations: fresh generators map to 1 (basic/abelian kinds) or to the
    coefficient side's words (quadratic), and the image must reduce to the
    trivial word using only free reduction and the previous graph's
    commutations."""
    rec = tower.records[level - 1]
    prev = tower.graph_at(level - 1)
    f = rec.floor
    if f.kind == "quadratic" and not rec.rank_one:
        q = f.quadratic
        sub = {}
        for i in range(2 * q.genus):
            sub[f.fresh[i]] = tuple(q.v[i].letters)
        for k in range(len(q.u)):
            sub[f.fresh[2 * q.genus + k]] = tuple(q.w[k].letters)
    else:
        sub = {x: () for x in f.fresh}

    def image(word):
        out = []
        for g, s in word:
            if g in sub:
                out.extend(sub[g] if s > 0 else
                           tuple((h, -t) for h, t in reversed(sub[g])))
            else:
                out.append((g, s))
        return out

    for rel in rec.relations:
        w = GroupWord(prev, image(rel.as_relator()))
        if not w.is_trivial():
            return False
    return True


# --- presentation emission ---------------------------------------------------

@dataclass(frozen=True)
class TowerPresentation:
    case: str                  # a1 | a2 | b1 | b2 | c
    level: int
    bottom: str                # name of the lower tower group
    amalgam_generators: tuple  # generator descriptions of the amalgamated subgroup
    amalgam_symbolic: bool
    factor: str                # textual description of the new factor
    assumptions: tuple

    def __str__(self):
        gens = ", ".join(self.amalgam_generators)
        lines = [f"case {self.case}: {self.bottom} *_{{{gens}}} ({self.factor})"]
        for a in self.assumptions:
            lines.append(f"  assuming: {a}")
        return "\n".join(lines)


def presentation(tower: GraphTower, level: int) -> TowerPresentation:
    """Amalgamated-product shape of the tower at the given floor."""
    if not 1 <= level <= tower.height:
        raise ValueError(f"level {level} out of range 1..{tower.height}")
    rec = tower.records[level - 1]
    prev = tower.graph_at(level - 1)
    f = rec.floor
    bottom = "G(base)" if level == 1 else f"T^{level - 1}"
    xs = " ".join(f.fresh)
    assumptions: List[str] = []

    if level == 1:
        cgens = tuple(sorted(_centralizer_generators(prev, rec.kperp)))
        symbolic = False
        camal = cgens if cgens else ("1",)
    else:
        camal = (f"C(K-perp@{level})",)
        symbolic = True
        assumptions.append(
            f"C(K-perp@{level}) denotes the centralizer of {sorted(rec.kperp)} "
            f"in T^{level - 1}")

    kperp_abelian = rec.kperp_kind == "abelian"
    if f.kind == "basic":
        if not kperp_abelian:
            case, factor = "a1", f"C x < {xs} > (free factor)"
        else:
            case, factor = "a2", f"C x < {xs} | [x_i, x_j]=1 > (free abelian factor)"
    elif f.kind == "abelian_basic":
        case = "a2" if kperp_abelian else "b2"
        factor = f"C x < {xs} | [x_i, x_j]=1 > (free abelian factor)"
    elif f.kind == "abelian_root":
        case = "b1"
        factor = f"C(u) x < {xs} | [x_i, x_j]=1 > (free abelian factor)"
        if level == 1:
            u = f.root
            camal = (f"C({W.word_to_str(u.canonical())})",)
            symbolic = False
        else:
            camal = (f"C(u@{level})",)
            symbolic = True
    else:  # quadratic
        if rec.rank_one:
            case, factor = "a2", f"C x < {xs} | [x1, x2]=1 > (torus as c-edge)"
        else:
            q = f.quadratic
            coeffs = " ".join(W.word_to_str(u.canonical()) for u in q.u) or "(none)"
            case = "c"
            factor = (f"< {coeffs}, {xs} | W > x C "
                      f"(surface piece, chi = {euler_characteristic(q)})")
            camal = tuple(camal) + tuple(
                W.word_to_str(u.canonical()) for u in q.u)
            assumptions.append(
                "the amalgamated subgroup is the direct product of C(K-perp) "
                "and the coefficient words (emitted, not verified)")
    return TowerPresentation(case, level, bottom, tuple(camal), symbolic,
                             factor, tuple(assumptions))


def ntq_degeneration_check(tower: GraphTower) -> list:
    """Over a free base (edgeless graph), report which classical tower piece
    each floor matches."""
    if tower.base.edges:
        raise ValueError("NTQ degeneration requires an edgeless (free) base")
    out = []
    for lvl, rec in enumerate(tower.records, start=1):
        kperp_abelian = rec.kperp_kind == "abelian"
        f = rec.floor
        if f.kind == "basic" and not kperp_abelian:
            what = "free product with free group"
        elif f.kind == "abelian_basic" and not kperp_abelian:
            what = "free product with free abelian group"
        elif kperp_abelian or f.kind == "abelian_root":
            what = "extension of centraliser"
        else:
            what = "surface amalgam"
        out.append((lvl, f.kind, what))
    return out
