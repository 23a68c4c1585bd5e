"""Coherent configurations: the color-matrix data model and its axioms.

A configuration is stored as an n x n matrix of color ids partitioning the
ordered pairs of points.  Validation checks the three axioms (diagonal is a
union of colors, the partition is closed under transpose, triple intersection
counts are constant on every color) and derives fibers, valencies and the
sparse intersection tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ColorOutOfRange,
    DiagonalMixed,
    NotCoherent,
    NotEquivalence,
    NotFiberUnion,
    NotHomogeneous,
    ValidationError,
)

__all__ = [
    "ColorMatrix",
    "CoherentConfiguration",
    "EquivalenceRelation",
    "StructureFlags",
    "build_config",
    "intersection_number",
    "equivalence_relations",
    "restriction",
    "quotient",
    "structure_flags",
    "equivalence_chain",
    "verify_tensor_identities",
    "same_partition",
]


def _as_matrix(rows) -> np.ndarray:
    m = np.asarray(rows, dtype=np.int64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("color matrix must be square", f"shape {m.shape}")
    return m


@dataclass(frozen=True)
class ColorMatrix:
    """An n x n matrix of color ids in {0..k-1}, every color occurring."""

    n: int
    k: int
    colors: np.ndarray

    @classmethod
    def from_rows(cls, rows) -> "ColorMatrix":
        m = _as_matrix(rows)
        n = m.shape[0]
        if n == 0:
            raise ValidationError("empty point set")
        if m.min() < 0:
            raise ColorOutOfRange("negative color id")
        k = int(m.max()) + 1
        used = np.zeros(k, dtype=bool)
        used[m.reshape(-1)] = True
        if not used.all():
            missing = int(np.flatnonzero(~used)[0])
            raise ValidationError("color ids must be contiguous from 0", f"color {missing} unused")
        m = m.copy()
        m.setflags(write=False)
        return cls(n=n, k=k, colors=m)

    def __eq__(self, other):
        return (
            isinstance(other, ColorMatrix)
            and self.n == other.n
            and self.k == other.k
            and np.array_equal(self.colors, other.colors)
        )

    def __hash__(self):
        return hash((self.n, self.k, self.colors.tobytes()))


def same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    """True when two color matrices induce the same partition of pairs."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    pair = a.astype(np.int64) * (int(b.max()) + 1) + b
    return len(np.unique(pair)) == len(np.unique(a)) == len(np.unique(b))


def _one_refinement_round(C: np.ndarray) -> np.ndarray:
    """One Weisfeiler-Leman round: split colors by path-pair count signatures."""
    n = C.shape[0]
    k = int(C.max()) + 1
    paths = C[:, :, None] * k + C[None, :, :]
    paths.sort(axis=1)
    sig = np.empty((n, n, n + 1), dtype=np.int64)
    sig[:, :, 0] = C
    sig[:, :, 1:] = np.moveaxis(paths, 1, 2)
    _, inverse = np.unique(sig.reshape(n * n, n + 1), axis=0, return_inverse=True)
    return inverse.reshape(n, n).astype(np.int64)


def _coherence_witness(C: np.ndarray, refined: np.ndarray):
    """Locate a split color and two pairs of it with differing (r, s) counts."""
    n = C.shape[0]
    k = int(C.max()) + 1
    for t in range(k):
        idx = np.argwhere(C == t)
        sub = refined[C == t]
        if len(np.unique(sub)) == 1:
            continue
        first = np.flatnonzero(sub != sub[0])[0]
        a = tuple(int(x) for x in idx[0])
        b = tuple(int(x) for x in idx[first])
        ca = np.unique(C[a[0], :] * k + C[:, a[1]], return_counts=True)
        cb = np.unique(C[b[0], :] * k + C[:, b[1]], return_counts=True)
        da = dict(zip(ca[0].tolist(), ca[1].tolist()))
        db = dict(zip(cb[0].tolist(), cb[1].tolist()))
        for code in sorted(set(da) | set(db)):
            if da.get(code, 0) != db.get(code, 0):
                r, s = divmod(code, k)
                return (int(r), int(s), int(t), a, b)
    return None


class CoherentConfiguration:
    """A validated color matrix plus derived structure.

    Instances are immutable after construction and safe to share; build them
    through :func:`build_config`.
    """

    def __init__(self, matrix: ColorMatrix, star, fibers, fiber_index, color_fibers, valency, tensor, diagonal_colors):
        self.matrix = matrix
        self.star = star
        self.fibers = fibers
        self.fiber_index = fiber_index
        self.color_fibers = color_fibers
        self.valency = valency
        self.tensor = tensor
        self.diagonal_colors = diagonal_colors

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def rank(self) -> int:
        return self.matrix.k

    @property
    def colors(self) -> np.ndarray:
        return self.matrix.colors

    def color_of(self, alpha: int, beta: int) -> int:
        return int(self.colors[alpha, beta])

    def color_pairs(self, c: int):
        """All ordered pairs carrying color c, in row-major order."""
        self._check_color(c)
        return [(int(i), int(j)) for i, j in np.argwhere(self.colors == c)]

    def color_size(self, c: int) -> int:
        self._check_color(c)
        return int(np.count_nonzero(self.colors == c))

    def _check_color(self, c: int):
        if not 0 <= c < self.rank:
            raise ColorOutOfRange(f"color {c} not in 0..{self.rank - 1}")

    def intersection_number(self, r: int, s: int, t: int) -> int:
        for c in (r, s, t):
            self._check_color(c)
        fr, fs, ft = self.color_fibers[r], self.color_fibers[s], self.color_fibers[t]
        if fr[0] != ft[0] or fs[1] != ft[1] or fr[1] != fs[0]:
            return 0
        return self.tensor.get((r, s, t), 0)

    def is_homogeneous(self) -> bool:
        return len(self.diagonal_colors) == 1

    def is_antisymmetric(self) -> bool:
        return all(self.star[c] != c for c in range(self.rank) if c not in self.diagonal_colors)

    def is_complete(self) -> bool:
        return self.rank == self.n * self.n

    def is_semiregular(self) -> bool:
        return all(int(v) == 1 for v in self.valency)

    def regular_points(self) -> tuple[int, ...]:
        """Points alpha with at most one r-neighbor for every color r."""
        good_fibers = set(range(len(self.fibers)))
        for c in range(self.rank):
            if int(self.valency[c]) > 1:
                good_fibers.discard(int(self.color_fibers[c][0]))
        return tuple(
            p for fi in sorted(good_fibers) for p in self.fibers[fi]
        )

    def canonicalize(self) -> "CoherentConfiguration":
        """Renumber colors by (source fiber, target fiber, valency, first use)."""
        flat = self.colors.reshape(-1)
        _, first = np.unique(flat, return_index=True)
        order = sorted(
            range(self.rank),
            key=lambda c: (
                int(self.color_fibers[c][0]),
                int(self.color_fibers[c][1]),
                int(self.valency[c]),
                int(first[c]),
            ),
        )
        relabel = np.empty(self.rank, dtype=np.int64)
        for new, old in enumerate(order):
            relabel[old] = new
        return self._relabeled(relabel)

    def _relabeled(self, relabel: np.ndarray) -> "CoherentConfiguration":
        matrix = ColorMatrix.from_rows(relabel[self.colors])
        k = self.rank
        new_star = [0] * k
        new_cf = [None] * k
        new_val = [0] * k
        for old in range(k):
            new = int(relabel[old])
            new_star[new] = int(relabel[self.star[old]])
            new_cf[new] = self.color_fibers[old]
            new_val[new] = self.valency[old]
        tensor = {
            (int(relabel[r]), int(relabel[s]), int(relabel[t])): v
            for (r, s, t), v in self.tensor.items()
        }
        diag = frozenset(int(relabel[c]) for c in self.diagonal_colors)
        return CoherentConfiguration(
            matrix, tuple(new_star), self.fibers, self.fiber_index,
            tuple(new_cf), tuple(new_val), tensor, diag,
        )

    def __eq__(self, other):
        return isinstance(other, CoherentConfiguration) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"CoherentConfiguration(n={self.n}, rank={self.rank}, fibers={len(self.fibers)})"


def build_config(matrix) -> CoherentConfiguration:
    """Validate a color matrix against the axioms and derive its structure.

    Raises DiagonalMixed when a diagonal color appears off the diagonal and
    NotCoherent (with a witness triple and pair of pairs) when some triple
    count is not constant on a color.
    """
    if isinstance(matrix, CoherentConfiguration):
        return matrix
    if not isinstance(matrix, ColorMatrix):
        matrix = ColorMatrix.from_rows(matrix)
    C = matrix.colors
    n, k = matrix.n, matrix.k

    diag_colors = frozenset(int(c) for c in np.unique(np.diagonal(C)))
    off = C[~np.eye(n, dtype=bool)]
    if off.size and frozenset(np.unique(off).tolist()) & diag_colors:
        bad = sorted(frozenset(np.unique(off).tolist()) & diag_colors)[0]
        raise DiagonalMixed(f"color {bad} appears both on and off the diagonal")

    # transpose closure: colors[j][i] must be a function of colors[i][j]
    star = np.full(k, -1, dtype=np.int64)
    firsts = {}
    for c in range(k):
        i, j = np.argwhere(C == c)[0]
        firsts[c] = (int(i), int(j))
        star[c] = C[j, i]
    if not np.array_equal(C.T, star[C]):
        bad = np.argwhere(C.T != star[C])[0]
        i, j = int(bad[1]), int(bad[0])
        raise NotCoherent(
            witness=(int(C[i, j]), int(C[j, i]), None, (i, j), firsts[int(C[i, j])]),
            detail="partition not closed under transpose",
        )

    # fibers from diagonal colors, ordered by smallest point
    fiber_of_diag = {}
    fibers = []
    for c in sorted(diag_colors, key=lambda c: int(np.flatnonzero(np.diagonal(C) == c)[0])):
        pts = tuple(int(p) for p in np.flatnonzero(np.diagonal(C) == c))
        fiber_of_diag[c] = len(fibers)
        fibers.append(pts)
    fiber_index = np.empty(n, dtype=np.int64)
    for fi, pts in enumerate(fibers):
        for p in pts:
            fiber_index[p] = fi

    # every color sits inside one fiber pair
    color_fibers = []
    for c in range(k):
        pairs = np.argwhere(C == c)
        src = np.unique(fiber_index[pairs[:, 0]])
        tgt = np.unique(fiber_index[pairs[:, 1]])
        if len(src) != 1 or len(tgt) != 1:
            raise NotCoherent(
                witness=(c, c, c, tuple(int(x) for x in pairs[0]), tuple(int(x) for x in pairs[-1])),
                detail=f"color {c} not contained in a single fiber pair",
            )
        color_fibers.append((int(src[0]), int(tgt[0])))

    refined = _one_refinement_round(C)
    if len(np.unique(refined)) != k:
        raise NotCoherent(witness=_coherence_witness(C, refined))

    # intersection tensor from one representative pair per color
    tensor = {}
    valency = [0] * k
    for t in range(k):
        a, b = firsts[t]
        codes, counts = np.unique(C[a, :] * k + C[:, b], return_counts=True)
        for code, cnt in zip(codes.tolist(), counts.tolist()):
            r, s = divmod(int(code), k)
            tensor[(r, s, t)] = int(cnt)
    for c in range(k):
        src = color_fibers[c][0]
        row = fibers[src][0]
        valency[c] = int(np.count_nonzero(C[row, :] == c))

    return CoherentConfiguration(
        matrix,
        tuple(int(x) for x in star),
        tuple(fibers),
        fiber_index,
        tuple(color_fibers),
        tuple(valency),
        tensor,
        diag_colors,
    )


def intersection_number(X: CoherentConfiguration, r: int, s: int, t: int) -> int:
    return X.intersection_number(r, s, t)


def verify_tensor_identities(X: CoherentConfiguration) -> None:
    """Assert the transpose and size identities on every tensor entry.

    Checks c_{r*s*}^{t*} = c_{sr}^t together with
    |t| c_{rs}^{t*} = |r| c_{st}^{r*} = |s| c_{tr}^{s*}, and the scheme form
    with valencies when X is homogeneous.  Iterating the nonzero entries is
    exhaustive: a violating triple always has a nonzero member, and every
    nonzero entry checks its two cyclic partners.  Raises NotCoherent on
    failure.
    """
    size = [X.color_size(c) for c in range(X.rank)]
    st = X.star
    homogeneous = X.is_homogeneous()
    for (r, s, t), v in X.tensor.items():
        if v != X.intersection_number(st[s], st[r], st[t]):
            raise NotCoherent(witness=(r, s, t), detail="transpose identity fails")
        a = size[st[t]] * v
        b = size[r] * X.intersection_number(s, st[t], st[r])
        c = size[s] * X.intersection_number(st[t], r, st[s])
        if not a == b == c:
            raise NotCoherent(witness=(r, s, t), detail="size identity fails")
        if homogeneous:
            a = X.valency[st[t]] * v
            b = X.valency[r] * X.intersection_number(s, st[t], st[r])
            c = X.valency[s] * X.intersection_number(st[t], r, st[s])
            if not a == b == c:
                raise NotCoherent(witness=(r, s, t), detail="valency identity fails")


@dataclass(frozen=True)
class EquivalenceRelation:
    """A union of colors that is an equivalence relation on its support."""

    colors: frozenset
    classes: tuple
    support: tuple

    def contains(self, other: "EquivalenceRelation") -> bool:
        return other.colors <= self.colors and set(other.support) <= set(self.support)

    def num_classes(self) -> int:
        return len(self.classes)

    def class_of(self, point: int):
        for cl in self.classes:
            if point in cl:
                return cl
        raise KeyError(point)


def _composition_map(X: CoherentConfiguration) -> dict:
    """(r, s) -> colors meeting the composition r . s, from the tensor."""
    comp: dict = {}
    for (r, s, t), _ in X.tensor.items():
        comp.setdefault((r, s), set()).add(t)
    return comp


def _equivalence_from_colors(X: CoherentConfiguration, colors: frozenset,
                             comp: dict | None = None) -> EquivalenceRelation | None:
    """Build the relation for a star-closed color set, or None if not transitive."""
    if comp is None:
        comp = _composition_map(X)
    touched = set()
    for c in colors:
        touched.add(X.color_fibers[c][0])
        touched.add(X.color_fibers[c][1])
    for fi in touched:
        dc = X.color_of(X.fibers[fi][0], X.fibers[fi][0])
        if dc not in colors:
            return None
    for r in colors:
        if X.star[r] not in colors:
            return None
    for r in colors:
        for s in colors:
            if not comp.get((r, s), _EMPTY).issubset(colors):
                return None
    support = tuple(sorted(p for fi in touched for p in X.fibers[fi]))
    # union-find over the support
    parent = {p: p for p in support}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    C = X.colors
    for c in colors:
        for i, j in np.argwhere(C == c):
            a, b = find(int(i)), find(int(j))
            if a != b:
                parent[a] = b
    groups = {}
    for p in support:
        groups.setdefault(find(p), []).append(p)
    classes = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=lambda g: g[0]))
    # the union of colors must exactly cover the classes squared
    total = sum(X.color_size(c) for c in colors)
    if total != sum(len(cl) ** 2 for cl in classes):
        return None
    return EquivalenceRelation(colors=colors, classes=classes, support=support)


_EMPTY: frozenset = frozenset()


def _equivalences_by_subsets(X: CoherentConfiguration) -> list[EquivalenceRelation]:
    comp = _composition_map(X)
    items = []
    seen = set()
    for c in range(X.rank):
        if c in seen:
            continue
        if c in X.diagonal_colors:
            items.append((c,))
            seen.add(c)
        else:
            pair = (c, X.star[c]) if X.star[c] != c else (c,)
            items.append(tuple(sorted(set(pair))))
            seen.update(pair)
    out = []
    for mask in range(1, 1 << len(items)):
        colors = frozenset(c for b, item in enumerate(items) if mask >> b & 1 for c in item)
        e = _equivalence_from_colors(X, colors, comp)
        if e is not None:
            out.append(e)
    return out


def _atomic_equivalence(X: CoherentConfiguration, seed_colors: Iterable[int],
                        comp: dict | None = None) -> frozenset:
    """Smallest star/transitive/reflexive-closed color set containing the seeds."""
    if comp is None:
        comp = _composition_map(X)
    colors = set(seed_colors)
    changed = True
    while changed:
        changed = False
        for c in list(colors):
            s = X.star[c]
            if s not in colors:
                colors.add(s)
                changed = True
        touched = set()
        for c in colors:
            touched.add(X.color_fibers[c][0])
            touched.add(X.color_fibers[c][1])
        for fi in touched:
            dc = X.color_of(X.fibers[fi][0], X.fibers[fi][0])
            if dc not in colors:
                colors.add(dc)
                changed = True
        grown = set()
        for r in colors:
            for s in colors:
                grown |= comp.get((r, s), _EMPTY)
        if not grown.issubset(colors):
            colors |= grown
            changed = True
    return frozenset(colors)


def _equivalences_by_lattice(X: CoherentConfiguration) -> list[EquivalenceRelation]:
    comp = _composition_map(X)
    atoms = {_atomic_equivalence(X, (c,), comp) for c in range(X.rank)}
    closed = set(atoms)
    work = list(atoms)
    joined: set = set()
    while work:
        a = work.pop()
        for b in list(closed):
            key = frozenset((a, b))
            if key in joined:
                continue
            joined.add(key)
            if a <= b or b <= a:
                continue
            j = _atomic_equivalence(X, a | b, comp)
            if j not in closed:
                closed.add(j)
                work.append(j)
    out = []
    for colors in closed:
        e = _equivalence_from_colors(X, colors, comp)
        if e is not None:
            out.append(e)
    return out


def equivalence_relations(X: CoherentConfiguration) -> list[EquivalenceRelation]:
    """All equivalence relations among the unions of colors.

    For homogeneous X only full-support relations exist (the trivial diagonal
    and full relations always among them); inhomogeneous X also yields
    relations supported on proper fiber unions.  Exhaustive over star-closed
    color subsets when the rank is at most 20, otherwise generated as the
    join lattice of the single-color atomic equivalences.
    """
    if X.rank <= 20:
        out = _equivalences_by_subsets(X)
    else:
        out = _equivalences_by_lattice(X)
    if X.is_homogeneous():
        out = [e for e in out if len(e.support) == X.n]
    out.sort(key=lambda e: (len(e.support), len(e.colors), sorted(e.colors)))
    # dedupe (lattice path may produce duplicates)
    uniq = []
    seen = set()
    for e in out:
        if e.colors not in seen:
            seen.add(e.colors)
            uniq.append(e)
    return uniq


def trivial_equivalences(X: CoherentConfiguration) -> tuple[EquivalenceRelation, EquivalenceRelation]:
    """The diagonal relation and the full relation of a homogeneous X."""
    if not X.is_homogeneous():
        raise NotHomogeneous("trivial equivalences of a scheme")
    diag = _equivalence_from_colors(X, frozenset(X.diagonal_colors))
    full = _equivalence_from_colors(X, frozenset(range(X.rank)))
    assert diag is not None and full is not None
    return diag, full


def restriction(X: CoherentConfiguration, gamma: Sequence[int]) -> CoherentConfiguration:
    cfg, _ = restriction_with_parents(X, gamma)
    return cfg


def restriction_with_parents(X: CoherentConfiguration, gamma: Sequence[int]):
    """Restrict X to gamma; also return the map restricted color -> parent color.

    gamma must be a union of fibers or a class of an equivalence relation of X.
    """
    gamma = tuple(sorted(set(int(g) for g in gamma)))
    if not gamma or any(g < 0 or g >= X.n for g in gamma):
        raise NotFiberUnion(f"{gamma} is not a subset of the point set")
    gset = set(gamma)
    fiber_union = all(set(X.fibers[fi]) <= gset or not (set(X.fibers[fi]) & gset) for fi in range(len(X.fibers)))
    if not fiber_union and not _is_equivalence_class(X, gset):
        raise NotFiberUnion(f"{gamma} is neither a fiber union nor an equivalence class")
    sub = X.colors[np.ix_(gamma, gamma)]
    present = np.unique(sub)
    relabel = {int(c): i for i, c in enumerate(present)}
    dense = np.vectorize(relabel.get, otypes=[np.int64])(sub)
    cfg = build_config(ColorMatrix.from_rows(dense)).canonicalize()
    # recover parent colors through the canonical relabel
    parents = [None] * cfg.rank
    for new_c in range(cfg.rank):
        i, j = np.argwhere(cfg.colors == new_c)[0]
        parents[new_c] = int(X.colors[gamma[int(i)], gamma[int(j)]])
    return cfg, tuple(parents)


def _is_equivalence_class(X: CoherentConfiguration, gset: set) -> bool:
    # gamma is a class of some equivalence in the color unions iff it is a
    # class of the smallest such relation containing gamma x gamma
    touched = {int(X.colors[i, j]) for i in gset for j in gset}
    closure = _atomic_equivalence(X, touched)
    e = _equivalence_from_colors(X, closure)
    return e is not None and tuple(sorted(gset)) in e.classes


def quotient(X: CoherentConfiguration, e: EquivalenceRelation) -> CoherentConfiguration:
    cfg, _ = quotient_with_parents(X, e)
    return cfg


def quotient_with_parents(X: CoherentConfiguration, e: EquivalenceRelation):
    """Quotient modulo a full-support equivalence; also return parent color sets."""
    if len(e.support) != X.n:
        raise NotEquivalence("quotient requires an equivalence with full support")
    if not e.colors <= frozenset(range(X.rank)):
        raise NotEquivalence("equivalence colors out of range")
    if _equivalence_from_colors(X, e.colors) is None:
        raise NotEquivalence("color union is not an equivalence relation")
    classes = sorted((tuple(sorted(cl)) for cl in e.classes), key=lambda cl: cl[0])
    m = len(classes)
    class_of = np.empty(X.n, dtype=np.int64)
    for ci, cl in enumerate(classes):
        for p in cl:
            class_of[p] = ci
    key = {}
    qcolors = np.empty((m, m), dtype=np.int64)
    parent_sets = []
    for a in range(m):
        for b in range(m):
            cs = frozenset(int(c) for c in np.unique(X.colors[np.ix_(classes[a], classes[b])]))
            if cs not in key:
                key[cs] = len(parent_sets)
                parent_sets.append(cs)
            qcolors[a, b] = key[cs]
    cfg = build_config(ColorMatrix.from_rows(qcolors)).canonicalize()
    parents = [None] * cfg.rank
    for new_c in range(cfg.rank):
        a, b = np.argwhere(cfg.colors == new_c)[0]
        parents[new_c] = parent_sets[int(qcolors[int(a), int(b)])]
    return cfg, tuple(parents)


@dataclass(frozen=True)
class StructureFlags:
    homogeneous: bool
    antisymmetric: bool
    primitive: bool
    regular: bool
    one_regular_points: tuple


def _connected(X: CoherentConfiguration, colors: set) -> bool:
    """Connectivity of the (symmetric) union of the given colors."""
    n = X.n
    adj = np.zeros((n, n), dtype=bool)
    for c in colors:
        adj |= X.colors == c
    adj |= adj.T
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(adj[v]):
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


def structure_flags(X: CoherentConfiguration) -> StructureFlags:
    homogeneous = X.is_homogeneous()
    antisymmetric = X.is_antisymmetric()
    primitive = homogeneous and all(
        _connected(X, {c, X.star[c]})
        for c in range(X.rank)
        if c not in X.diagonal_colors
    )
    regular_pts = X.regular_points()
    regular = homogeneous and len(regular_pts) == X.n
    return StructureFlags(
        homogeneous=homogeneous,
        antisymmetric=antisymmetric,
        primitive=primitive,
        regular=regular,
        one_regular_points=regular_pts,
    )


def equivalence_chain(X: CoherentConfiguration) -> list[EquivalenceRelation]:
    """A maximal chain of equivalences from the diagonal up to the full relation.

    Deterministic: each step picks an inclusion-minimal strict extension,
    breaking ties by smallest class size.  Requires homogeneous X.
    """
    if not X.is_homogeneous():
        raise NotHomogeneous("equivalence chain")
    all_eq = equivalence_relations(X)
    diag, full = trivial_equivalences(X)
    chain = [diag]
    current = diag
    while current.colors != full.colors:
        above = [e for e in all_eq if current.colors < e.colors]
        minimal = [
            e for e in above
            if not any(current.colors < f.colors < e.colors for f in above)
        ]
        minimal.sort(key=lambda e: (max(len(cl) for cl in e.classes),
                                    sorted(len(cl) for cl in e.classes),
                                    sorted(e.colors)))
        current = minimal[0]
        chain.append(current)
    return chain
