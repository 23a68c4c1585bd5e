"""Permutation groups: orbits, Schreier-Sims chains, and backtrack searches.

Permutations act on the right: alpha^g = g.images[alpha], and (g * h) means
apply g first, then h.  Groups are immutable after construction; the strong
generating set is built lazily by a deterministic Schreier-Sims and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import ColorMatrix, CoherentConfiguration
from .errors import (
    DegreeMismatch,
    DomainNotInvariant,
    GroupTooLarge,
    ValidationError,
)

__all__ = [
    "Permutation",
    "PermutationGroup",
    "FixStats",
    "orbits",
    "pair_orbits",
    "setwise_stabilizer",
    "color_aut_backtrack",
    "fix_stats",
]

DEFAULT_ENUMERATION_BOUND = 2_000_000


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..n-1} stored as the tuple of images."""

    images: tuple

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValidationError("permutation images must be a bijection on 0..n-1")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:]):
                images[a] = b
            if cycle:
                images[cycle[-1]] = cycle[0]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition, self applied first."""
        if self.degree != other.degree:
            raise DegreeMismatch("composition of permutations of different degree")
        im = other.images
        return Permutation(tuple(im[x] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def fixed_points(self) -> tuple:
        return tuple(i for i, j in enumerate(self.images) if i == j)

    def cycles(self) -> list:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(cyc)
        return out

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


class _Level:
    """One level of a stabilizer chain: base point, generators, transversal."""

    __slots__ = ("base", "gens", "transversal")

    def __init__(self, base: int):
        self.base = base
        self.gens: list[Permutation] = []
        self.transversal: dict[int, Permutation] = {}


class PermutationGroup:
    """A permutation group given by generators, with a lazily built BSGS."""

    def __init__(self, degree: int, generators: Sequence[Permutation] = (), expect_odd: bool = False):
        self.degree = int(degree)
        gens = tuple(g for g in generators if not g.is_identity())
        for g in gens:
            if g.degree != self.degree:
                raise DegreeMismatch(f"generator degree {g.degree} != {self.degree}")
        self.generators = gens if gens else (Permutation.identity(self.degree),)
        self.expect_odd = expect_odd
        self._chains: dict | None = None
        self._order: int | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def trivial(cls, n: int) -> "PermutationGroup":
        return cls(n, ())

    @classmethod
    def cyclic(cls, n: int) -> "PermutationGroup":
        return cls(n, (Permutation(tuple((i + 1) % n for i in range(n))),))

    @classmethod
    def symmetric(cls, n: int) -> "PermutationGroup":
        if n <= 1:
            return cls.trivial(max(n, 1))
        gens = [Permutation.from_cycles(n, [tuple(range(n))]), Permutation.from_cycles(n, [(0, 1)])]
        return cls(n, gens)

    @classmethod
    def direct_sum(cls, groups: Sequence["PermutationGroup"]) -> "PermutationGroup":
        """Groups acting independently on consecutive blocks of points."""
        n = sum(g.degree for g in groups)
        gens = []
        offset = 0
        for g in groups:
            for p in g.generators:
                images = list(range(n))
                for i, j in enumerate(p.images):
                    images[offset + i] = offset + j
                gens.append(Permutation(tuple(images)))
            offset += g.degree
        return cls(n, gens)

    def conjugate(self, f: Permutation) -> "PermutationGroup":
        """The group f^-1 G f acting on relabeled points (alpha^f labels)."""
        fi = f.inverse()
        return PermutationGroup(self.degree, tuple(fi * g * f for g in self.generators))

    # -- BSGS ----------------------------------------------------------

    @staticmethod
    def _extend_transversal(lvl: "_Level", degree: int):
        """Grow the transversal in place, keeping existing representatives.

        Representative stability is what keeps previously verified Schreier
        generators verified when new generators arrive.
        """
        if not lvl.transversal:
            lvl.transversal[lvl.base] = Permutation.identity(degree)
        queue = sorted(lvl.transversal)
        while queue:
            p = queue.pop(0)
            u = lvl.transversal[p]
            for g in lvl.gens:
                q = g(p)
                if q not in lvl.transversal:
                    lvl.transversal[q] = u * g
                    queue.append(q)

    @staticmethod
    def _pick_base_point(gens: Sequence[Permutation], prescribed: Sequence[int], used: set) -> int:
        for b in prescribed:
            if b not in used and any(g(b) != b for g in gens):
                return b
        # greedy: point lying in the largest orbit of the given generators
        degree = gens[0].degree
        seen = set(used)
        best, best_len = None, 0
        for i in range(degree):
            if i in seen or all(g(i) == i for g in gens):
                continue
            orb = {i}
            queue = [i]
            while queue:
                p = queue.pop()
                for g in gens:
                    q = g(p)
                    if q not in orb:
                        orb.add(q)
                        queue.append(q)
            seen |= orb
            if len(orb) > best_len:
                best, best_len = min(orb), len(orb)
        return best

    def stabilizer_chain(self, prescribed: Sequence[int] = ()) -> list[_Level]:
        """Deterministic Schreier-Sims; prescribed points are preferred base points.

        A level is verified only when every deeper level is already complete,
        so the returned chain is a valid base and strong generating set.
        """
        prescribed = tuple(prescribed)
        if self._chains is None:
            self._chains = {}
        if prescribed in self._chains:
            return self._chains[prescribed]
        levels: list[_Level] = []
        used: set[int] = set()
        gens0 = [g for g in self.generators if not g.is_identity()]

        def sift(g: Permutation, start: int):
            for i in range(start, len(levels)):
                lvl = levels[i]
                p = g(lvl.base)
                if p not in lvl.transversal:
                    return g, i
                g = g * lvl.transversal[p].inverse()
            return g, len(levels)

        def new_level(gens: Sequence[Permutation]):
            b = self._pick_base_point(gens, prescribed, used)
            levels.append(_Level(b))
            used.add(b)

        if gens0:
            new_level(gens0)
            levels[0].gens = list(gens0)
            self._extend_transversal(levels[0], self.degree)
        i = 0
        while 0 <= i < len(levels):
            lvl = levels[i]
            self._extend_transversal(lvl, self.degree)
            drop_to = None
            for p in sorted(lvl.transversal):
                u = lvl.transversal[p]
                for s in lvl.gens:
                    schreier = u * s * lvl.transversal[s(p)].inverse()
                    if schreier.is_identity():
                        continue
                    residue, j = sift(schreier, i + 1)
                    if residue.is_identity():
                        continue
                    if j == len(levels):
                        new_level([residue])
                    for l in range(i + 1, j + 1):
                        levels[l].gens.append(residue)
                        self._extend_transversal(levels[l], self.degree)
                    drop_to = j
                    break
                if drop_to is not None:
                    break
            i = drop_to if drop_to is not None else i - 1
        self._chains[prescribed] = levels
        if not prescribed:
            self._order = self._order_from(levels)
            if self.expect_odd and self._order % 2 == 0:
                raise ValidationError("group declared odd has even order", f"order {self._order}")
        return levels

    @staticmethod
    def _order_from(levels: Sequence[_Level]) -> int:
        order = 1
        for lvl in levels:
            order *= len(lvl.transversal)
        return order

    def order(self) -> int:
        if self._order is None:
            self.stabilizer_chain()
        return self._order

    def is_odd_order(self) -> bool:
        return self.order() % 2 == 1

    def __contains__(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        for lvl in self.stabilizer_chain():
            p = g(lvl.base)
            if p not in lvl.transversal:
                return False
            g = g * lvl.transversal[p].inverse()
        return g.is_identity()

    def elements(self, bound: int = DEFAULT_ENUMERATION_BOUND):
        """Iterate all elements (products over transversals); guarded by bound."""
        if self.order() > bound:
            raise GroupTooLarge(f"order {self.order()} exceeds bound {bound}")
        levels = self.stabilizer_chain()

        def rec(i: int, acc: Permutation):
            if i < 0:
                yield acc
                return
            lvl = levels[i]
            for p in sorted(lvl.transversal):
                yield from rec(i - 1, acc * lvl.transversal[p])

        if not levels:
            yield Permutation.identity(self.degree)
        else:
            yield from rec(len(levels) - 1, Permutation.identity(self.degree))

    # -- orbit machinery -------------------------------------------------

    def reduced(self) -> "PermutationGroup":
        """Same group with a greedily thinned generating set."""
        kept: list[Permutation] = []
        H = PermutationGroup(self.degree, ())
        for g in self.generators:
            if g.is_identity() or g in H:
                continue
            kept.append(g)
            H = PermutationGroup(self.degree, tuple(kept))
        H.expect_odd = self.expect_odd
        return H

    def orbit(self, point: int) -> tuple:
        seen = {point}
        queue = [point]
        while queue:
            p = queue.pop(0)
            for g in self.generators:
                q = g(p)
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return tuple(sorted(seen))

    def orbits(self, domain: Iterable[int] | None = None) -> list[tuple]:
        return orbits(self, domain)

    def pair_orbits(self) -> ColorMatrix:
        return pair_orbits(self)

    def setwise_stabilizer(self, delta: Iterable[int]) -> "PermutationGroup":
        return setwise_stabilizer(self, delta)

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, gens={len(self.generators)})"


def orbits(G: PermutationGroup, domain: Iterable[int] | None = None) -> list[tuple]:
    """Partition of the domain into minimal G-invariant blocks.

    The domain defaults to all points and must be closed under G.
    """
    if domain is None:
        domain = range(G.degree)
    dom = sorted(set(int(d) for d in domain))
    dset = set(dom)
    for g in G.generators:
        for p in dom:
            if g(p) not in dset:
                raise DomainNotInvariant(f"generator maps {p} to {g(p)} outside the domain")
    out = []
    seen = set()
    for p in dom:
        if p in seen:
            continue
        orb = G.orbit(p)
        seen.update(orb)
        out.append(orb)
    return out


def pair_orbits(G: PermutationGroup) -> ColorMatrix:
    """Orbits of the componentwise action on ordered pairs, as a color matrix.

    Colors are assigned in first-encounter order scanning rows then columns.
    """
    n = G.degree
    colors = np.full((n, n), -1, dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(n):
            if colors[i, j] >= 0:
                continue
            queue = [(i, j)]
            colors[i, j] = k
            while queue:
                a, b = queue.pop()
                for g in G.generators:
                    c, d = g(a), g(b)
                    if colors[c, d] < 0:
                        colors[c, d] = k
                        queue.append((c, d))
            k += 1
    return ColorMatrix.from_rows(colors)


@dataclass(frozen=True)
class FixStats:
    """Fixed-point statistics over the non-identity elements."""

    fix_max: int
    fix_sum: int


def fix_stats(G: PermutationGroup, bound: int = DEFAULT_ENUMERATION_BOUND) -> FixStats:
    """Max and sum of fixed-point counts over non-identity elements."""
    fix_max = 0
    fix_sum = 0
    for g in G.elements(bound=bound):
        if g.is_identity():
            continue
        f = len(g.fixed_points())
        fix_max = max(fix_max, f)
        fix_sum += f
    return FixStats(fix_max=fix_max, fix_sum=fix_sum)


# -- generic backtrack over a stabilizer chain ---------------------------


def _group_backtrack(G: PermutationGroup, partial_ok, full_ok) -> PermutationGroup:
    """Generators of {g in G : full_ok(g)} for a subgroup-defining property.

    partial_ok(points, images) prunes: it must accept every prefix of a
    satisfying assignment of base-point images.  The search explores base
    images in increasing order, collects generators of the subgroup found so
    far, and prunes symmetric branches with its orbits (standard subgroup
    backtracking; deterministic for a fixed branch order).
    """
    n = G.degree
    levels = G.stabilizer_chain(prescribed=tuple(range(n)))
    if not levels:
        return PermutationGroup(n, ())
    found: list[Permutation] = []

    def known_orbit(point: int, fixed: Sequence[int]) -> set:
        """Orbit of point under found generators fixing all of `fixed`."""
        gens = [g for g in found if all(g(x) == x for x in fixed)]
        orb = {point}
        queue = [point]
        while queue:
            p = queue.pop()
            for g in gens:
                q = g(p)
                if q not in orb:
                    orb.add(q)
                    queue.append(q)
        return orb

    base = [lvl.base for lvl in levels]

    def search(depth: int, prefix: Permutation, pinned, spine: bool) -> bool:
        if depth == len(levels):
            g = prefix
            if not g.is_identity() and full_ok(g):
                found.append(g)
                return True
            return False
        lvl = levels[depth]
        inv = prefix.inverse()
        candidates = sorted(prefix(v) for v in lvl.transversal)
        if spine:
            # descend the stabilizer spine first so the subgroup below is
            # fully generated before its cosets are pruned
            candidates.remove(lvl.base)
            candidates.insert(0, lvl.base)
        hit = False
        done: set[int] = set()
        for w in candidates:
            if spine and w != lvl.base:
                # only explore orbit representatives of the known subgroup
                if w in done:
                    continue
                done.update(known_orbit(w, base[:depth]))
            if not partial_ok(pinned + [(lvl.base, w)]):
                continue
            child = lvl.transversal[inv(w)] * prefix
            ok = search(depth + 1, child, pinned + [(lvl.base, w)], spine and w == lvl.base)
            hit = hit or ok
            if ok and not spine:
                return True
        return hit

    identity = Permutation.identity(n)
    search(0, identity, [], True)
    return PermutationGroup(n, tuple(found)).reduced()


def setwise_stabilizer(G: PermutationGroup, delta: Iterable[int]) -> PermutationGroup:
    """The subgroup {g in G : delta^g = delta}, returned by generators."""
    dset = frozenset(int(d) for d in delta)
    if any(d < 0 or d >= G.degree for d in dset):
        raise ValidationError("stabilized set not within the point set")

    def partial_ok(pinned):
        b, w = pinned[-1]
        return (b in dset) == (w in dset)

    def full_ok(g):
        return all((g(p) in dset) == (p in dset) for p in range(G.degree))

    return _group_backtrack(G, partial_ok, full_ok)


def _colors_of(X) -> np.ndarray:
    if isinstance(X, CoherentConfiguration):
        return X.colors
    if isinstance(X, ColorMatrix):
        return X.colors
    return np.asarray(X, dtype=np.int64)


def color_aut_backtrack(X, G: PermutationGroup | None = None) -> PermutationGroup:
    """The color automorphism group Aut(X), intersected with G when given.

    Every returned generator preserves every color of the matrix.  Without G
    the search runs over all of Sym(n) with fiber and color pruning; with G it
    walks G's stabilizer chain, pruning candidate base images by color
    consistency with previously pinned points.
    """
    C = _colors_of(X)
    n = C.shape[0]

    if G is not None:
        if G.degree != n:
            raise DegreeMismatch(f"group degree {G.degree} != {n}")
        # quick exit: if every generator already preserves colors, Aut∩G = G
        if all(_preserves_colors(C, g) for g in G.generators):
            return G

        def partial_ok(pinned):
            b, w = pinned[-1]
            if C[b, b] != C[w, w]:
                return False
            for b2, w2 in pinned[:-1]:
                if C[b, b2] != C[w, w2] or C[b2, b] != C[w2, w]:
                    return False
            return True

        def full_ok(g):
            return _preserves_colors(C, g)

        return _group_backtrack(G, partial_ok, full_ok)

    # free search over Sym(n)
    found: list[Permutation] = []

    def known_orbit(point: int, fixed_upto: int) -> set:
        gens = [g for g in found if all(g(x) == x for x in range(fixed_upto))]
        orb = {point}
        queue = [point]
        while queue:
            p = queue.pop()
            for g in gens:
                q = g(p)
                if q not in orb:
                    orb.add(q)
                    queue.append(q)
        return orb

    def extend(images: list, used: set, spine: bool) -> bool:
        d = len(images)
        if d == n:
            g = Permutation(tuple(images))
            if not g.is_identity():
                found.append(g)
                return True
            return False
        hit = False
        done: set[int] = set()
        order = [d] + [w for w in range(n) if w != d] if spine else range(n)
        for w in order:
            if w in used:
                continue
            if spine and w != d:
                if w in done:
                    continue
                done.update(known_orbit(w, d))
            if C[d, d] != C[w, w]:
                continue
            if any(C[d, j] != C[w, images[j]] or C[j, d] != C[images[j], w] for j in range(d)):
                continue
            images.append(w)
            used.add(w)
            ok = extend(images, used, spine and w == d)
            images.pop()
            used.remove(w)
            hit = hit or ok
            if ok and not spine:
                return True
        return hit

    extend([], set(), True)
    return PermutationGroup(n, tuple(found)).reduced()


def _preserves_colors(C: np.ndarray, g: Permutation) -> bool:
    idx = np.fromiter(g.images, dtype=np.int64)
    return bool(np.array_equal(C[np.ix_(idx, idx)], C))
