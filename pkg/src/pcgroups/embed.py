"""Explicit embeddings between partially commutative groups and their
metric constants.

The padded embedding sends the i-th generator of a finite-rank free group
into F(b, c) as  w_i b^(L+i) c b^(L+i) w_i,  where the w_i are length-r words
in F(b, c) that contain c and neither begin nor end with the inverse of b.
Per-generator image lengths lie in [2r+2L+3, 4r+2L+1], and the embedding is
a quasi-isometry with multiplicative window [2L, 4r+2L+1].

The doubling embedding runs one padded embedding per deflation class of a
commutation graph, landing in the group of the doubled graph.  With
L = k * (source displacement), the target displacement is sandwiched between
2k*d^2 and 7k*d^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .graphs import CommutationGraph, deflate, double, edgeless
from .words import GroupWord, equal, reduce


@dataclass
class GeneratorMap:
    """A map between groups given by a generator -> word assignment."""

    source: CommutationGraph
    target: CommutationGraph
    images: Dict[str, GroupWord]

    def __post_init__(self):
        missing = set(self.source.vertices) - set(self.images)
        if missing:
            raise ValueError(f"unassigned generators: {sorted(missing)}")

    def apply(self, w: GroupWord) -> GroupWord:
        out = []
        for g, s in w.letters:
            img = self.images[g].letters
            out.extend(img if s > 0 else tuple((h, -t) for h, t in reversed(img)))
        return reduce(GroupWord(self.target, out))

    def compose(self, then: "GeneratorMap") -> "GeneratorMap":
        """self followed by `then`."""
        return GeneratorMap(self.source, then.target,
                            {g: then.apply(w) for g, w in self.images.items()})

    def is_homomorphism(self) -> bool:
        """Images of commuting source generators commute in the target."""
        for e in self.source.edges:
            u, v = tuple(e)
            if not equal(self.images[u] * self.images[v],
                         self.images[v] * self.images[u]):
                return False
        return True


def _check_padding_words(r: int, ws: Sequence[GroupWord], b: str, c: str):
    seen = []
    for w in ws:
        lets = w.canonical()
        if len(lets) != r:
            raise ValueError(f"padding word {w} must have length {r}")
        if lets[0] == (b, -1) or lets[-1] == (b, -1):
            raise ValueError(f"padding word {w} begins or ends with {b}'")
        if not any(g == c for g, _ in lets):
            raise ValueError(f"padding word {w} does not contain {c}")
        for prev in seen:
            if lets == prev or lets == tuple((g, -s) for g, s in reversed(prev)):
                raise ValueError("padding words must be pairwise distinct and non-inverse")
        seen.append(lets)


def default_padding_words(target: CommutationGraph, b: str, c: str, r: int) -> list:
    """w_i = b^(i-1) c^(r-i+1): positive, pairwise distinct, contain c."""
    return [GroupWord(target, [(b, 1)] * (i - 1) + [(c, 1)] * (r - i + 1))
            for i in range(1, r + 1)]


def padded_embedding(r: int, L: int, ws: Sequence[GroupWord],
                     source_names: Optional[Sequence[str]] = None,
                     target: Optional[CommutationGraph] = None,
                     b: str = "b", c: str = "c") -> GeneratorMap:
    """Embedding of the free group on r generators into F(b, c).

    a_i maps to  w_i b^(L+i) c b^(L+i) w_i.  The central letter is c (the
    padding keeps images of distinct generators from cancelling deeply).
    Extra generators a_j, j > r, would map to b^(L+r+j) c b^(L+r+j); they are
    available through `extend_image`.
    """
    if r < 1 or L < 1:
        raise ValueError("r and L must be positive")
    if len(ws) != r:
        raise ValueError(f"need exactly {r} padding words")
    if target is None:
        target = edgeless([b, c])
    ws = [w if isinstance(w, GroupWord) else GroupWord(target, w) for w in ws]
    _check_padding_words(r, ws, b, c)
    if source_names is None:
        source_names = [f"a{i}" for i in range(1, r + 1)]
    source = edgeless(source_names)
    images = {}
    for i, name in enumerate(source_names, start=1):
        pad = [(b, 1)] * (L + i)
        w = ws[i - 1].canonical()
        images[name] = GroupWord(target, list(w) + pad + [(c, 1)] + pad + list(w))
    return GeneratorMap(source, target, images)


def extend_image(L: int, r: int, j: int, target: CommutationGraph,
                 b: str = "b", c: str = "c") -> GroupWord:
    """Image of an on-demand generator a_j with j > r."""
    if j <= r:
        raise ValueError("extend_image is for generators beyond the first r")
    pad = [(b, 1)] * (L + r + j)
    return GroupWord(target, pad + [(c, 1)] + pad)


def doubling_embedding(g: CommutationGraph, L: int) -> GeneratorMap:
    """Embedding of the group of g into the group of double(g).

    Per deflation class [v] with members x_1 < ... < x_k, the member x_i maps
    under the padded embedding of F([v]) into F(v_1, v_2), with b = v_1 and
    c = v_2.  Cross-class commutation is preserved because the doubled graph
    joins classes exactly as the deflation does.
    """
    if L < 1:
        raise ValueError("L must be positive")
    target = double(g)
    _, cls = deflate(g)
    members: Dict[str, List[str]] = {}
    for v in g.vertices:
        members.setdefault(cls[v], []).append(v)
    images = {}
    for rep, mem in members.items():
        mem = sorted(mem)
        r = len(mem)
        b, c = f"{rep}_1", f"{rep}_2"
        ws = default_padding_words(target, b, c, r)
        sub = padded_embedding(r, L, ws, source_names=mem, target=target, b=b, c=c)
        images.update(sub.images)
    return GeneratorMap(g, target, images)


def displacement(g: CommutationGraph, gens: Sequence[GroupWord]) -> int:
    """Max canonical length over the generating set (basepoint the identity)."""
    gens = list(gens)
    if not gens:
        raise ValueError("empty generating set")
    return max(len(w) for w in gens)


@dataclass(frozen=True)
class DisplacementReport:
    k: int
    d_alpha: int
    d_beta: int
    lower: int   # 2 k d_alpha^2
    upper: int   # 7 k d_alpha^2
    L: int
    holds: bool


def check_displacement(h_gens: Sequence[GroupWord],
                       L: Optional[int] = None) -> DisplacementReport:
    """Build the padded embedding for a finitely generated subgroup of a free
    group and verify 2k d^2 <= target displacement <= 7k d^2 at L = k*d."""
    h_gens = list(h_gens)
    if not h_gens:
        raise ValueError("empty generating set")
    if any(w.is_trivial() for w in h_gens):
        raise ValueError("trivial generator in generating set")
    graph = h_gens[0].graph
    if graph.edges:
        raise ValueError("check_displacement expects words in a free group")
    k = len(h_gens)
    d_alpha = displacement(graph, h_gens)
    B = sorted(set().union(*(set(g for g, _ in w.canonical()) for w in h_gens)))
    r = len(B)
    if L is None:
        L = k * d_alpha
    target = edgeless(["b", "c"])
    ws = default_padding_words(target, "b", "c", r)
    psi = padded_embedding(r, L, ws, source_names=B, target=target)
    sub = edgeless(B)
    d_beta = max(len(psi.apply(GroupWord(sub, w.canonical()))) for w in h_gens)
    lower, upper = 2 * k * d_alpha ** 2, 7 * k * d_alpha ** 2
    return DisplacementReport(k, d_alpha, d_beta, lower, upper, L,
                              lower <= d_beta <= upper)
