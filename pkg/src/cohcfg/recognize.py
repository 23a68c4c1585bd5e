"""Schurity recognition and isomorphism testing for antisymmetric
configurations and tournaments.

The recognizer accepts exactly the schurian inputs: it recurses on fibers,
builds a maximal equivalence chain, bounds every block by a size-3 base,
majorizes the automorphism group by an iterated wreath product, intersects
by color backtracking, and certifies the result by comparing pair orbits
with the configuration's colors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import (
    CoherentConfiguration,
    EquivalenceRelation,
    equivalence_chain,
    restriction_with_parents,
    quotient_with_parents,
)
from .bases import base_number_search
from .errors import (
    BudgetExceeded,
    ChainMismatch,
    DegreeMismatch,
    InvalidAlgebraicIso,
    NotAntisymmetric,
    NotATournament,
    NotSchurian,
)
from .perm import Permutation, PermutationGroup, color_aut_backtrack, pair_orbits
from .products import ProductPointMap, glue_disjoint_union
from .refine import (
    AlgebraicIsomorphism,
    StabilizationRefusal,
    coherent_closure,
    simultaneous_stabilization,
)

__all__ = [
    "Tournament",
    "Majorant",
    "SchurityRefusal",
    "test_config_group",
    "list_isomorphisms",
    "find_isomorphism",
    "build_majorant",
    "wreath_embedding",
    "recognize_schurity",
    "tournament_pipeline",
    "TournamentReport",
]


@dataclass(frozen=True)
class SchurityRefusal:
    """A negative verdict with the reason and a witness."""

    reason: str
    witness: object = None

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Tournament:
    """An arc-colored tournament: one directed arc per vertex pair."""

    n: int
    arcs: dict

    def __post_init__(self):
        seen = set()
        colors = set()
        for (i, j), c in self.arcs.items():
            if not (0 <= i < self.n and 0 <= j < self.n) or i == j:
                raise NotATournament(f"arc ({i}, {j}) is not a pair of distinct vertices")
            key = frozenset((i, j))
            if key in seen:
                raise NotATournament(f"both directions present between {i} and {j}")
            seen.add(key)
            colors.add(c)
        if len(seen) != self.n * (self.n - 1) // 2:
            raise NotATournament("some vertex pair carries no arc")
        if colors and sorted(colors) != list(range(len(colors))):
            raise NotATournament("arc colors must be contiguous from 0")

    @property
    def num_colors(self) -> int:
        return len({c for c in self.arcs.values()})

    def color_classes(self) -> list:
        out = [set() for _ in range(self.num_colors)]
        for (i, j), c in self.arcs.items():
            out[c].add((i, j))
        return out

    def configuration(self) -> CoherentConfiguration:
        return coherent_closure(self.color_classes(), n=self.n)

    def relabel(self, f: Permutation) -> "Tournament":
        return Tournament(self.n, {(f(i), f(j)): c for (i, j), c in self.arcs.items()})

    def reverse_arc(self, i: int, j: int) -> "Tournament":
        arcs = dict(self.arcs)
        if (i, j) in arcs:
            c = arcs.pop((i, j))
            arcs[(j, i)] = c
        elif (j, i) in arcs:
            c = arcs.pop((j, i))
            arcs[(i, j)] = c
        else:
            raise NotATournament(f"no arc between {i} and {j}")
        return Tournament(self.n, arcs)


def test_config_group(X: CoherentConfiguration, G: PermutationGroup):
    """G when the colors of X are exactly the pair orbits of G, else a refusal.

    The refusal witness names a color split by the orbits or an orbit merged
    across colors.
    """
    if G.degree != X.n:
        raise DegreeMismatch(f"group degree {G.degree} != {X.n}")
    orb = pair_orbits(G).colors
    CX = X.colors
    korb = int(orb.max()) + 1
    joint = len(np.unique(CX * korb + orb))
    if joint == X.rank == korb:
        return G
    for c in range(X.rank):
        vals = np.unique(orb[CX == c])
        if len(vals) > 1:
            return SchurityRefusal(
                reason="color split by the group orbits", witness=("color", c)
            )
    for o in range(korb):
        vals = np.unique(CX[orb == o])
        if len(vals) > 1:
            return SchurityRefusal(
                reason="group orbit merges two colors", witness=("orbit", o)
            )
    return SchurityRefusal(reason="orbit partition differs", witness=None)


def _seed_masks(X: CoherentConfiguration) -> list:
    return [X.colors == c for c in range(X.rank)]


def _extract_point_map(ext: AlgebraicIsomorphism) -> tuple | None:
    """The point bijection of an algebraic isomorphism between complete fissions."""
    X1, X2 = ext.source, ext.target
    if not (X1.is_complete() and X2.is_complete()):
        return None
    out = [0] * X1.n
    diag2 = {int(X2.colors[a, a]): a for a in range(X2.n)}
    for a in range(X1.n):
        out[a] = diag2[ext(int(X1.colors[a, a]))]
    return tuple(out)


def _iso_candidates(X: CoherentConfiguration, Y: CoherentConfiguration,
                    phi: AlgebraicIsomorphism, base: tuple):
    """Ordered target tuples color-consistent with the base under phi."""
    n = Y.n
    for target in itertools.permutations(range(n), len(base)):
        ok = True
        for a in range(len(base)):
            for b in range(len(base)):
                if int(Y.colors[target[a], target[b]]) != phi(int(X.colors[base[a], base[b]])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield target


def _isomorphisms(X: CoherentConfiguration, Y: CoherentConfiguration,
                  phi: AlgebraicIsomorphism, first_only: bool, base_budget: int | None = None):
    if phi.source != X or phi.target != Y:
        raise InvalidAlgebraicIso("phi does not map between the given configurations")
    search = base_number_search(X, "base", budget=base_budget)
    base = tuple(s[0] for s in search.certificate.sets)
    masks1 = _seed_masks(X)
    masks2 = _seed_masks(Y)
    out = []
    for target in _iso_candidates(X, Y, phi, base):
        s1 = masks1 + [_point_mask(X.n, p) for p in base]
        s2 = masks2 + [_point_mask(Y.n, p) for p in target]
        psi = [phi(c) for c in range(X.rank)] + list(range(X.rank, X.rank + len(base)))
        ext = simultaneous_stabilization(s1, s2, psi, n1=X.n, n2=Y.n)
        if isinstance(ext, StabilizationRefusal):
            continue
        f = _extract_point_map(ext)
        if f is None:
            continue
        idx = np.fromiter(f, dtype=np.int64)
        mapped = Y.colors[np.ix_(idx, idx)]
        want = np.vectorize(phi, otypes=[np.int64])(X.colors)
        if not np.array_equal(mapped, want):
            continue
        out.append(f)
        if first_only:
            return out
    return sorted(set(out))


def _point_mask(n: int, p: int) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    mask[p, p] = True
    return mask


def list_isomorphisms(X: CoherentConfiguration, Y: CoherentConfiguration,
                      phi: AlgebraicIsomorphism, base_budget: int | None = None) -> list:
    """All point bijections inducing phi, as image tuples, sorted.

    Finds a minimum base of X, then for every color-consistent image tuple
    runs the lockstep stabilization with the base points individualized on
    both sides; each success pins every point through singleton fibers.
    """
    return _isomorphisms(X, Y, phi, first_only=False, base_budget=base_budget)


def find_isomorphism(X, Y, phi, base_budget: int | None = None):
    """First isomorphism inducing phi, or None."""
    out = _isomorphisms(X, Y, phi, first_only=True, base_budget=base_budget)
    return out[0] if out else None


@dataclass(frozen=True)
class Majorant:
    """A level of the wreath majorization: a group bounding the induced block
    actions together with bijections of every block onto the reference."""

    group: PermutationGroup
    blocks: tuple
    bijections: dict
    point_to_class: tuple

    @property
    def degree(self) -> int:
        return self.group.degree


def _quotient_block_classes(X, e0: EquivalenceRelation, e1: EquivalenceRelation):
    """Classes of e1 viewed as sets of e0-classes (points of the quotient)."""
    classes0 = sorted((tuple(sorted(c)) for c in e0.classes), key=lambda c: c[0])
    index0 = {}
    for zi, cl in enumerate(classes0):
        for p in cl:
            index0[p] = zi
    blocks = []
    for cl1 in sorted((tuple(sorted(c)) for c in e1.classes), key=lambda c: c[0]):
        blocks.append(tuple(sorted({index0[p] for p in cl1})))
    return classes0, tuple(sorted(blocks, key=lambda b: b[0])), index0


def build_majorant(X: CoherentConfiguration, e0: EquivalenceRelation, e1: EquivalenceRelation,
                   base_budget: int = 3):
    """Majorant of Aut(X) for the pair e0 <= e1, or a refusal.

    The reference block is the lexicographically least; its automorphism
    group is listed through a base of size at most base_budget, and every
    other block contributes one isomorphism with the reference (through the
    block algebraic isomorphism of the quotient).  A missing isomorphism or
    an oversized base is a schurity obstruction.
    """
    if not e0.colors <= e1.colors:
        raise ChainMismatch("e0 is not contained in e1")
    Z, _ = quotient_with_parents(X, e0)
    classes0, blocks, index0 = _quotient_block_classes(X, e0, e1)
    ref = blocks[0]
    R0, parents0 = restriction_with_parents(Z, ref)
    try:
        autos = list_isomorphisms(R0, R0, AlgebraicIsomorphism.identity(R0),
                                  base_budget=base_budget)
    except BudgetExceeded:
        return SchurityRefusal(reason="block base number exceeds bound", witness=ref)
    H = PermutationGroup(R0.n, [Permutation(f) for f in autos]).reduced()
    bijections = {}
    for bi, blk in enumerate(blocks):
        if blk == ref:
            for local, z in enumerate(sorted(blk)):
                bijections[z] = local
            continue
        R1, parents1 = restriction_with_parents(Z, blk)
        if sorted(parents0) != sorted(parents1):
            return SchurityRefusal(reason="blocks carry different colors", witness=blk)
        by_parent = {p: c for c, p in enumerate(parents1)}
        mapping = tuple(by_parent[p] for p in parents0)
        try:
            phi = AlgebraicIsomorphism(R0, R1, mapping)
        except InvalidAlgebraicIso:
            return SchurityRefusal(reason="block color map is not algebraic", witness=blk)
        try:
            f = find_isomorphism(R0, R1, phi, base_budget=base_budget)
        except BudgetExceeded:
            return SchurityRefusal(reason="block base number exceeds bound", witness=blk)
        if f is None:
            return SchurityRefusal(reason="no isomorphism onto the reference block", witness=blk)
        # f maps reference-local labels to blk-local labels; invert onto Delta
        local_of_z = {z: local for local, z in enumerate(sorted(blk))}
        finv = {f[a]: a for a in range(len(f))}
        for z in blk:
            bijections[z] = finv[local_of_z[z]]
    point_to_class = tuple(index0[p] for p in range(X.n))
    return Majorant(group=H, blocks=blocks, bijections=bijections,
                    point_to_class=point_to_class)


def wreath_embedding(X: CoherentConfiguration, chain: Sequence[EquivalenceRelation],
                     majorants: Sequence[Majorant]):
    """The iterated wreath product of the level majorants, in imprimitive
    action, together with the point bijection aligning X with it.

    Returns (W, f) where f maps each point to its tower coordinates and
    Aut(X) conjugated by f lies inside W.
    """
    s = len(chain) - 1
    if len(majorants) != s:
        raise ChainMismatch(f"{len(majorants)} majorants for {s} levels")
    degrees = [m.degree for m in majorants]
    if int(np.prod(degrees)) != X.n:
        raise ChainMismatch("block sizes do not multiply to the degree")
    pm = ProductPointMap(tuple(degrees))
    coords = np.empty((X.n, s), dtype=np.int64)
    for level, m in enumerate(majorants):
        for p in range(X.n):
            coords[p, level] = m.bijections[m.point_to_class[p]]
    flat = [pm.encode(tuple(int(c) for c in coords[p])) for p in range(X.n)]
    if sorted(flat) != list(range(X.n)):
        raise ChainMismatch("tower coordinates do not separate the points")
    f = Permutation(tuple(flat))

    gens = []
    table = pm.coordinate_table()
    for level, m in enumerate(majorants):
        addresses = set(map(tuple, table[:, level + 1 :].tolist()))
        for g in m.group.generators:
            for addr in sorted(addresses):
                images = np.arange(X.n, dtype=np.int64)
                sel = np.all(table[:, level + 1 :] == np.asarray(addr, dtype=np.int64), axis=1)
                moved = table[sel].copy()
                moved[:, level] = np.fromiter(
                    (g(int(d)) for d in moved[:, level]), dtype=np.int64, count=moved.shape[0]
                )
                images[sel] = [pm.encode(tuple(int(x) for x in row)) for row in moved]
                gens.append(Permutation(tuple(int(x) for x in images)))
    W = PermutationGroup(X.n, gens)
    return W, f


def recognize_schurity(X: CoherentConfiguration):
    """Aut(X) when the antisymmetric configuration X is schurian, else a refusal.

    Inhomogeneous inputs recurse on a smallest fiber and its complement; the
    homogeneous case majorizes along a maximal equivalence chain, intersects
    the iterated wreath product with the color automorphisms by backtracking,
    and certifies the group by the orbit test.
    """
    if not X.is_antisymmetric():
        raise NotAntisymmetric("schurity recognition needs an antisymmetric input")
    if X.n == 1:
        return test_config_group(X, PermutationGroup.trivial(1))
    if not X.is_homogeneous():
        fibers = sorted(X.fibers, key=lambda f: (len(f), f))
        delta1 = fibers[0]
        delta2 = tuple(sorted(p for f in fibers[1:] for p in f))
        X1, _ = restriction_with_parents(X, delta1)
        X2, _ = restriction_with_parents(X, delta2)
        r1 = recognize_schurity(X1)
        if isinstance(r1, SchurityRefusal):
            return SchurityRefusal(reason=f"fiber component refused: {r1.reason}",
                                   witness=(delta1, r1.witness))
        r2 = recognize_schurity(X2)
        if isinstance(r2, SchurityRefusal):
            return SchurityRefusal(reason=f"fiber component refused: {r2.reason}",
                                   witness=(delta2, r2.witness))
        G = _embedded_product(X.n, [(delta1, r1), (delta2, r2)])
        H = color_aut_backtrack(X, G)
        return test_config_group(X, H)

    chain = equivalence_chain(X)
    majorants = []
    for i in range(1, len(chain)):
        maj = build_majorant(X, chain[i - 1], chain[i])
        if isinstance(maj, SchurityRefusal):
            return maj
        majorants.append(maj)
    W, f = wreath_embedding(X, chain, majorants)
    # antisymmetric blocks have odd automorphism groups, so the majorizing
    # wreath product is solvable; the intersection contract relies on this
    if not W.is_odd_order():
        return SchurityRefusal(reason="wreath majorant has even order", witness=W.order())
    Gw = W.conjugate(f.inverse())
    H = color_aut_backtrack(X, Gw)
    return test_config_group(X, H)


def _embedded_product(n: int, parts) -> PermutationGroup:
    """Direct product of groups on disjoint point sets, embedded in Sym(n)."""
    gens = []
    for points, group in parts:
        points = sorted(points)
        for g in group.generators:
            images = list(range(n))
            for local, p in enumerate(points):
                images[p] = points[g(local)]
            gens.append(Permutation(tuple(images)))
    return PermutationGroup(n, gens)


@dataclass(frozen=True)
class TournamentReport:
    """Outcome of the tournament pipeline."""

    schurian: bool
    aut_order: int | None = None
    aut_generators: tuple = ()
    refusal: str | None = None
    isomorphisms: tuple | None = None
    gluing_isomorphisms: tuple | None = None


def tournament_pipeline(T1: Tournament, T2: Tournament | None = None) -> TournamentReport:
    """Schurity verdict and automorphisms of one tournament, or the full
    isomorphism set of two schurian tournaments.

    The two-tournament mode matches arc colors by name, extends the match to
    an algebraic isomorphism by lockstep stabilization, lists isomorphisms
    through a base, and cross-validates by gluing three copies and reading
    the setwise stabilizer coset inside the glued automorphism group.
    """
    X1 = T1.configuration()
    if T2 is None:
        r = recognize_schurity(X1)
        if isinstance(r, SchurityRefusal):
            return TournamentReport(schurian=False, refusal=r.reason)
        return TournamentReport(
            schurian=True, aut_order=r.order(),
            aut_generators=tuple(g.images for g in r.generators),
        )

    if T1.num_colors != T2.num_colors or T1.n != T2.n:
        return TournamentReport(schurian=True, isomorphisms=(), gluing_isomorphisms=())
    classes1 = T1.color_classes()
    classes2 = T2.color_classes()
    ext = simultaneous_stabilization(classes1, classes2, list(range(len(classes1))),
                                     n1=T1.n, n2=T2.n)
    if isinstance(ext, StabilizationRefusal):
        return TournamentReport(schurian=True, isomorphisms=(), gluing_isomorphisms=())
    X1, X2, phi = ext.source, ext.target, ext

    r1 = recognize_schurity(X1)
    if isinstance(r1, SchurityRefusal):
        raise NotSchurian(f"first tournament is not schurian: {r1.reason}")
    r2 = recognize_schurity(X2)
    if isinstance(r2, SchurityRefusal):
        raise NotSchurian(f"second tournament is not schurian: {r2.reason}")

    direct = tuple(list_isomorphisms(X1, X2, phi))

    glued = glue_disjoint_union(
        [X1, X2, X2],
        {(0, 1): phi, (1, 2): AlgebraicIsomorphism.identity(X2)},
        PermutationGroup.cyclic(3),
    )
    rec = recognize_schurity(glued)
    if isinstance(rec, SchurityRefusal):
        gluing = ()
    else:
        gluing = _isos_from_glued(rec, T1.n)
    return TournamentReport(
        schurian=True, aut_order=r1.order(),
        isomorphisms=direct, gluing_isomorphisms=gluing,
    )


def _isos_from_glued(H: PermutationGroup, n: int) -> tuple:
    """Read iso(X1, X2) from the glued automorphism group: the coset of the
    setwise stabilizer of the first block by one block-moving element."""
    block1 = list(range(n))
    g = _element_moving_block(H, n)
    if g is None:
        return ()
    stab = H.setwise_stabilizer(block1)
    restricted = PermutationGroup(
        n, [Permutation(tuple(h(i) for i in range(n))) for h in stab.generators]
    )
    out = set()
    for r in restricted.elements():
        out.add(tuple(g(r(i)) - n for i in range(n)))
    return tuple(sorted(out))


def _element_moving_block(H: PermutationGroup, n: int):
    """An element of H mapping the first n points onto the second n points."""
    first = frozenset(range(n))
    second = frozenset(range(n, 2 * n))
    start = (first, Permutation.identity(H.degree))
    seen = {first}
    queue = [start]
    while queue:
        img, word = queue.pop(0)
        if img == second:
            return word
        for g in H.generators:
            nxt = frozenset(g(p) for p in img)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word * g))
    return None
