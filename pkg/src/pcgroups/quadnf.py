"""Normalization of quadratic words by explicit automorphisms.

A quadratic word lives in a group on two kinds of generators: variables,
each occurring exactly twice, and coefficients.  `normalize` produces a
normal form of shape

    orientable:      [x1,x2] ... [x_{2g-1},x_{2g}]  c1^{y1} ... cn^{yn}  d
    non-orientable:  x1^2 ... xs^2                  c1^{y1} ... cn^{yn}  d

together with the automorphism that realises it and that automorphism's
inverse.  Here [x,y] = x^-1 y^-1 x y, c^y = y^-1 c y with c a nonempty
coefficient word, and d is a residual coefficient word (the opaque
right-hand data).  Every move fixes all coefficient generators.

The moves are compositions of elementary substitutions:
  * same-sign extraction      x -> A^-1 x A B^-1   turns A x B x C into x^2 A B^-1 C,
  * coefficient-atom ejection x -> x C^-1          turns A x^-1 B x C into A C x^-1 B x,
  * crossed-pair collection   (three substitutions) pulls a commutator atom
    to the front of A x^-1 B1 y B2 x C,
  * chunk reordering          v -> P^-1 v P        moves an atom left past P,
  * square absorption, which converts x^2 [y,z] into three squares.

Each substitution is verified on the fly: it must be invertible on the moved
variables, and the tracked word must stay the image of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .graphs import CommutationGraph
from .words import GroupWord, equal
from .embed import GeneratorMap

Letter = Tuple[str, int]


def _inv(w: Sequence[Letter]) -> tuple:
    return tuple((g, -s) for g, s in reversed(w))


def _free_reduce(w: Sequence[Letter]) -> tuple:
    stack: List[Letter] = []
    for l in w:
        if stack and stack[-1] == (l[0], -l[1]):
            stack.pop()
        else:
            stack.append(l)
    return tuple(stack)


@dataclass(frozen=True)
class QuadraticWord:
    """A word over variables (each exactly twice) and coefficients, in the
    partially commutative group `graph`."""

    graph: CommutationGraph
    variables: frozenset
    word: tuple

    def __init__(self, graph: CommutationGraph, variables: Iterable[str],
                 word: Sequence[Letter]):
        variables = frozenset(variables)
        unknown = variables - set(graph.vertices)
        if unknown:
            raise ValueError(f"undeclared variables: {sorted(unknown)}")
        w = tuple(word)
        for v in variables:
            n = sum(1 for g, _ in w if g == v)
            if n not in (0, 2):
                raise ValueError(f"variable {v} occurs {n} times, not twice")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "word", w)

    @property
    def coefficients(self) -> frozenset:
        return frozenset(self.graph.vertices) - self.variables

    def group_word(self) -> GroupWord:
        return GroupWord(self.graph, self.word)


class _State:
    """Current word plus the accumulated substitution and its inverse."""

    def __init__(self, qw: QuadraticWord):
        self.graph = qw.graph
        self.variables = set(qw.variables)
        self.done: set = set()
        self.word = _free_reduce(qw.word)
        self.fwd: Dict[str, tuple] = {g: ((g, 1),) for g in self.graph.vertices}
        self.bwd: Dict[str, tuple] = {g: ((g, 1),) for g in self.graph.vertices}

    @property
    def live(self) -> set:
        # a variable can vanish from the word by free cancellation
        present = {g for g, _ in self.word}
        return (self.variables & present) - self.done

    def _subst(self, w: Sequence[Letter], images: Dict[str, tuple]) -> tuple:
        out: List[Letter] = []
        for g, s in w:
            img = images.get(g, ((g, 1),))
            out.extend(img if s > 0 else _inv(img))
        return _free_reduce(out)

    def apply_move(self, images: Dict[str, tuple], inverses: Dict[str, tuple]):
        """Post-compose the substitution g -> images[g]; `inverses` must be
        its two-sided inverse on the moved generators."""
        for g in images:
            assert g in self.variables, f"move touches non-variable {g}"
            assert self._subst(self._subst(((g, 1),), images), inverses) == ((g, 1),)
            assert self._subst(self._subst(((g, 1),), inverses), images) == ((g, 1),)
        self.word = self._subst(self.word, images)
        self.fwd = {g: self._subst(w, images) for g, w in self.fwd.items()}
        self.bwd = {g: self._subst(inverses.get(g, ((g, 1),)), self.bwd)
                    for g in self.bwd}

    def flip(self, x: str):
        self.apply_move({x: ((x, -1),)}, {x: ((x, -1),)})

    def occurrences(self, x: str) -> list:
        return [i for i, (g, _) in enumerate(self.word) if g == x]

    def seg(self, i: int, j: int) -> tuple:
        return tuple(self.word[i:j])


def _extract_same_sign(st: _State, x: str):
    """A x B x C -> x^2 A B^-1 C (flipping x first if it occurs negatively)."""
    i, j = st.occurrences(x)
    if st.word[i][1] < 0:
        st.flip(x)
    i, j = st.occurrences(x)
    assert st.word[i][1] == st.word[j][1] == 1
    A, B = st.seg(0, i), st.seg(i + 1, j)
    st.apply_move({x: _free_reduce(_inv(A) + ((x, 1),) + A + _inv(B))},
                  {x: _free_reduce(A + ((x, 1),) + B + _inv(A))})


def _same_sign_step(st: _State) -> bool:
    cands = sorted(x for x in st.live
                   if st.word[st.occurrences(x)[0]][1]
                   == st.word[st.occurrences(x)[1]][1])
    if not cands:
        return False
    x = cands[0]
    _extract_same_sign(st, x)
    st.done.add(x)
    return True


def _coefficient_atom_step(st: _State) -> bool:
    """Eject one variable whose occurrences sandwich a variable-free segment:
    A x^-1 B x C -> A C x^-1 B x."""
    cands = []
    for x in sorted(st.live):
        i, j = st.occurrences(x)
        if not any(g in st.variables for g, _ in st.seg(i + 1, j)):
            cands.append(x)
    if not cands:
        return False
    x = cands[0]
    if st.word[st.occurrences(x)[0]][1] > 0:
        st.flip(x)
    i, j = st.occurrences(x)
    C = st.seg(j + 1, len(st.word))
    st.apply_move({x: _free_reduce(((x, 1),) + _inv(C))},
                  {x: _free_reduce(((x, 1),) + C)})
    st.done.add(x)
    return True


def _conjugate_to_front(st: _State, x: str, y: str, atom_start: int):
    A = st.seg(0, atom_start)
    move = {v: _free_reduce(_inv(A) + ((v, 1),) + A) for v in (x, y)}
    inv = {v: _free_reduce(A + ((v, 1),) + _inv(A)) for v in (x, y)}
    st.apply_move(move, inv)


def _crossed_pair_step(st: _State) -> bool:
    """Collect a crossed mixed-sign pair into a leading commutator atom.

    Picks the live variable x whose inter-occurrence segment B carries the
    fewest live variables (so B is linear), a live y inside B, and runs the
    three-substitution composition; the case with y's partner on the left of
    x is the mirrored composition.
    """
    if not st.live:
        return False

    def b_live(x):
        i, j = st.occurrences(x)
        return [g for g, _ in st.seg(i + 1, j) if g in st.live]

    x = min(st.live, key=lambda v: (len(b_live(v)), v))
    if st.word[st.occurrences(x)[0]][1] > 0:
        st.flip(x)
    inner = b_live(x)
    assert inner, "crossed step needs a live variable between the occurrences"
    y = min(inner)
    i, j = st.occurrences(x)
    ky = [k for k in range(i + 1, j) if st.word[k][0] == y][0]
    if st.word[ky][1] < 0:
        st.flip(y)
    i, j = st.occurrences(x)
    ky = [k for k in range(i + 1, j) if st.word[k][0] == y][0]
    ko = [k for k in st.occurrences(y) if not i < k < j][0]
    partner_right = ko > j
    B1, B2 = st.seg(i + 1, ky), st.seg(ky + 1, j)
    st.apply_move({y: _free_reduce(_inv(B1) + ((y, 1),) + _inv(B2))},
                  {y: _free_reduce(B1 + ((y, 1),) + B2)})

    if partner_right:
        # A x^-1 y x C1 B2 y^-1 B1 C2  --(x -> x E^-1, E = C1 B2)-->
        # A C1 B2 x^-1 y x y^-1 B1 C2, then conjugate the atom to the front.
        i, j = st.occurrences(x)
        k2 = st.occurrences(y)[1]
        E = st.seg(j + 1, k2)
        st.apply_move({x: _free_reduce(((x, 1),) + _inv(E))},
                      {x: _free_reduce(((x, 1),) + E)})
        i, _ = st.occurrences(x)
        _conjugate_to_front(st, x, y, i)
        st.flip(y)                       # x^-1 y x y^-1 -> x^-1 y^-1 x y
    else:
        # A1 B2 y^-1 D x^-1 y x C, D = B1 A2:
        # y -> D y D^-1, then x -> D x gives A1 B2 D y^-1 x^-1 y x C.
        i, _ = st.occurrences(x)
        k0 = st.occurrences(y)[0]
        D = st.seg(k0 + 1, i)
        st.apply_move({y: _free_reduce(D + ((y, 1),) + _inv(D))},
                      {y: _free_reduce(_inv(D) + ((y, 1),) + D)})
        st.apply_move({x: _free_reduce(D + ((x, 1),))},
                      {x: _free_reduce(_inv(D) + ((x, 1),))})
        k0 = st.occurrences(y)[0]
        _conjugate_to_front(st, y, x, k0)
    st.done.add(x)
    st.done.add(y)
    return True


# --- chunk parsing and reordering -------------------------------------------

@dataclass
class _Chunk:
    kind: str          # 'square' | 'comm' | 'catom' | 'const'
    letters: tuple
    vars: tuple


def _parse_chunks(st: _State) -> Optional[list]:
    w = st.word
    out = []
    i, n = 0, len(w)
    while i < n:
        g, s = w[i]
        if g not in st.variables:
            j = i
            while j < n and w[j][0] not in st.variables:
                j += 1
            out.append(_Chunk("const", w[i:j], ()))
            i = j
            continue
        if i + 1 < n and w[i + 1] == (g, s):
            out.append(_Chunk("square", w[i:i + 2], (g,)))
            i += 2
            continue
        if i + 3 < n and s < 0 and w[i + 1][1] < 0 and w[i + 1][0] in st.variables \
                and w[i + 2] == (g, 1) and w[i + 3] == (w[i + 1][0], 1):
            out.append(_Chunk("comm", w[i:i + 4], (g, w[i + 1][0])))
            i += 4
            continue
        if s < 0:
            j = i + 1
            while j < n and w[j][0] not in st.variables:
                j += 1
            if j < n and j > i + 1 and w[j] == (g, 1):
                out.append(_Chunk("catom", w[i:j + 1], (g,)))
                i = j + 1
                continue
        return None
    return out


_ORDER = {"square": 0, "comm": 1, "catom": 2, "const": 3}


def _move_left(st: _State, chunks: list, k: int):
    """Move chunk k left past chunk k-1 via v -> P^-1 v P on its variables."""
    P = chunks[k - 1].letters
    X = chunks[k]
    st.apply_move({v: _free_reduce(_inv(P) + ((v, 1),) + P) for v in X.vars},
                  {v: _free_reduce(P + ((v, 1),) + _inv(P)) for v in X.vars})


def _convert_square_comm(st: _State, sq: _Chunk, cm: _Chunk):
    """Absorb the commutator following a square into squares:
    x^2 [y,z] becomes z^2 x^2 ... y^2 after four substitutions."""
    x = sq.vars[0]
    y, z = cm.vars
    st.flip(y)
    st.flip(z)                                   # ... x x y z y^-1 z^-1 ...
    st.apply_move({y: _free_reduce(((x, -1), (y, 1)))},
                  {y: _free_reduce(((x, 1), (y, 1)))})
    _extract_same_sign(st, x)                    # x^2 ... y z^-1 y^-1 z^-1 ...
    _extract_same_sign(st, z)                    # z^2 x^2 ... y^2 ...


def _assemble(st: _State) -> None:
    """Bubble chunks into squares, commutators, coefficient atoms, constants;
    then absorb commutators into squares when both kinds are present."""
    while True:
        chunks = _parse_chunks(st)
        assert chunks is not None, f"unparseable word {st.word}"
        resigned = False
        for c in chunks:
            if c.kind == "square" and c.letters[0][1] < 0:
                st.flip(c.vars[0])
                resigned = True
                break
        if resigned:
            continue
        moved = False
        for k in range(1, len(chunks)):
            if _ORDER[chunks[k].kind] < _ORDER[chunks[k - 1].kind]:
                _move_left(st, chunks, k)
                moved = True
                break
        if moved:
            continue
        kinds = [c.kind for c in chunks]
        if "square" in kinds and "comm" in kinds:
            ks = max(i for i, k in enumerate(kinds) if k == "square")
            assert kinds[ks + 1] == "comm"
            _convert_square_comm(st, chunks[ks], chunks[ks + 1])
            continue
        return


@dataclass(frozen=True)
class NormalForm:
    orientable: bool
    genus: int                 # commutator pairs, or square count
    atoms: tuple               # the commutator/square chunks, as letter tuples
    coefficient_atoms: tuple   # the c^y chunks, as letter tuples
    residue: tuple             # trailing coefficient word
    word: tuple                # the full normal-form letter sequence


def _grammar_parse(st: _State) -> NormalForm:
    chunks = _parse_chunks(st)
    if chunks is None:
        raise ValueError(f"word fails the atom grammar: {st.word}")
    kinds = [c.kind for c in chunks]
    n = len(chunks)
    i = 0
    atoms = []
    while i < n and kinds[i] in ("square", "comm"):
        atoms.append(chunks[i])
        i += 1
    catoms = []
    while i < n and kinds[i] == "catom":
        catoms.append(chunks[i])
        i += 1
    residue = ()
    if i < n and kinds[i] == "const":
        residue = chunks[i].letters
        i += 1
    if i != n:
        raise ValueError(f"word fails the atom grammar: {st.word}")
    atom_kinds = {c.kind for c in atoms}
    if len(atom_kinds) > 1:
        raise ValueError("mixed squares and commutators")
    if any(c.kind == "square" and c.letters[0][1] < 0 for c in atoms):
        raise ValueError("negatively signed square")
    orientable = "square" not in atom_kinds
    return NormalForm(
        orientable=orientable,
        genus=len(atoms),
        atoms=tuple(c.letters for c in atoms),
        coefficient_atoms=tuple(c.letters for c in catoms),
        residue=residue,
        word=tuple(st.word),
    )


def apply_map(m: GeneratorMap, qw: QuadraticWord) -> QuadraticWord:
    """Substitute and reduce in the ambient group."""
    img = m.apply(qw.group_word())
    return QuadraticWord(qw.graph, qw.variables, img.letters)


def normalize(qw: QuadraticWord):
    """Normal form of a quadratic word with the witnessing automorphism.

    Returns (nf, auto, inverse, info): `auto` fixes all coefficients and
    maps the input to the normal form in the ambient group; `inverse` undoes
    it on every generator; `info` is the parsed NormalForm.
    """
    st = _State(qw)
    while True:
        if _same_sign_step(st):
            continue
        if _coefficient_atom_step(st):
            continue
        if _crossed_pair_step(st):
            continue
        break
    _assemble(st)
    info = _grammar_parse(st)
    graph = qw.graph
    auto = GeneratorMap(graph, graph,
                        {g: GroupWord(graph, w) for g, w in st.fwd.items()})
    inverse = GeneratorMap(graph, graph,
                           {g: GroupWord(graph, w) for g, w in st.bwd.items()})
    nf_qw = QuadraticWord(graph, qw.variables, info.word)
    return nf_qw, auto, inverse, info


def matches_grammar(qw: QuadraticWord) -> Optional[NormalForm]:
    """Parse a word against the normal-form grammar; None if it fails."""
    st = _State(qw)
    try:
        return _grammar_parse(st)
    except ValueError:
        return None


def verify_normalization(qw: QuadraticWord, nf_qw: QuadraticWord,
                         auto: GeneratorMap, inverse: GeneratorMap) -> bool:
    """auto(W) equals the normal form in the ambient group, auto fixes the
    coefficients, and inverse composes with auto to the identity map."""
    if not equal(auto.apply(qw.group_word()), nf_qw.group_word()):
        return False
    for c in sorted(qw.coefficients):
        cw = GroupWord(qw.graph, ((c, 1),))
        if not equal(auto.apply(cw), cw):
            return False
    for g in qw.graph.vertices:
        gw = GroupWord(qw.graph, ((g, 1),))
        if not equal(inverse.apply(auto.images[g]), gw):
            return False
        if not equal(auto.apply(inverse.images[g]), gw):
            return False
    return True
