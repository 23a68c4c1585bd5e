"""Product constructions: wreath product, Cartesian power, exponentiation,
Hamming relations, and the disjoint-union gluing used by the tournament test.

Points of a product are flat indices in row-major order with the last factor
varying fastest.  The exponentiation index convention: a permutation l of the
coordinate set moves a tuple so that coordinate i of the image is the old
coordinate at the l-preimage of i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .config import ColorMatrix, CoherentConfiguration, build_config
from .errors import DegreeMismatch, InconsistentPsi, PreconditionViolated
from .perm import Permutation, PermutationGroup, pair_orbits
from .refine import AlgebraicIsomorphism, coherent_closure

__all__ = [
    "ProductPointMap",
    "wreath_product",
    "cartesian_power",
    "exponentiation",
    "hamming_relations",
    "rho_map",
    "glue_disjoint_union",
]


@dataclass(frozen=True)
class ProductPointMap:
    """Flat point indices for a tuple space, last factor fastest."""

    factors: tuple

    def __post_init__(self):
        if not self.factors or any(f < 1 for f in self.factors):
            raise DegreeMismatch("all factors must be positive")

    @property
    def size(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise DegreeMismatch(f"expected {len(self.factors)} coordinates")
        idx = 0
        for c, f in zip(coords, self.factors):
            if not 0 <= c < f:
                raise DegreeMismatch(f"coordinate {c} outside 0..{f - 1}")
            idx = idx * f + c
        return idx

    def decode(self, idx: int) -> tuple:
        out = []
        for f in reversed(self.factors):
            idx, c = divmod(idx, f)
            out.append(c)
        return tuple(reversed(out))

    def coordinate_table(self) -> np.ndarray:
        """(size, m) array of coordinates for every flat index."""
        table = np.empty((self.size, len(self.factors)), dtype=np.int64)
        idx = np.arange(self.size)
        for pos in range(len(self.factors) - 1, -1, -1):
            idx, table[:, pos] = np.divmod(idx, self.factors[pos])
        return table


def wreath_product(X1: CoherentConfiguration, X2: CoherentConfiguration) -> CoherentConfiguration:
    """The wreath product: copies of X1 inside blocks indexed by X2's points.

    Homogeneous inputs use the direct color formula (rank k1 + k2 - 1);
    otherwise the smallest configuration is built by closure over the
    generating relations.
    """
    n1, n2 = X1.n, X2.n
    pm = ProductPointMap((n1, n2))
    n = pm.size
    idx = np.arange(n)
    a1, a2 = idx // n2, idx % n2
    if X1.is_homogeneous() and X2.is_homogeneous():
        diag2 = next(iter(X2.diagonal_colors))
        out_ids = {}
        for c in range(X2.rank):
            if c != diag2:
                out_ids[c] = X1.rank + len(out_ids)
        same = a2[:, None] == a2[None, :]
        inner = X1.colors[np.ix_(a1, a1)]
        outer = np.vectorize(lambda c: out_ids.get(int(c), 0), otypes=[np.int64])(
            X2.colors[np.ix_(a2, a2)]
        )
        colors = np.where(same, inner, outer)
        return build_config(ColorMatrix.from_rows(colors)).canonicalize()
    # smallest-configuration definition via closure
    seeds = []
    same = a2[:, None] == a2[None, :]
    for c in range(X1.rank):
        seeds.append(same & (X1.colors[np.ix_(a1, a1)] == c))
    for c in range(X2.rank):
        seeds.append(X2.colors[np.ix_(a2, a2)] == c)
    return coherent_closure(seeds, n=n)


def cartesian_power(Y: CoherentConfiguration, m: int) -> CoherentConfiguration:
    """The m-fold Cartesian power: colors are m-tuples of Y-colors."""
    if m < 1:
        raise PreconditionViolated("power exponent must be at least 1")
    pm = ProductPointMap((Y.n,) * m)
    coords = pm.coordinate_table()
    k = Y.rank
    code = np.zeros((pm.size, pm.size), dtype=np.int64)
    for i in range(m):
        code = code * k + Y.colors[np.ix_(coords[:, i], coords[:, i])]
    _, inverse = np.unique(code.reshape(-1), return_inverse=True)
    colors = inverse.reshape(pm.size, pm.size)
    return build_config(ColorMatrix.from_rows(colors)).canonicalize()


def _tuple_action_tables(L: PermutationGroup, m: int) -> list[np.ndarray]:
    """For each l in L, the coordinate-source table: image coordinate i is
    read from source coordinate table[i] (the l-preimage of i)."""
    if L.degree != m:
        raise DegreeMismatch(f"group degree {L.degree} != coordinate count {m}")
    tables = []
    for l in L.elements():
        linv = l.inverse()
        tables.append(np.fromiter((linv(i) for i in range(m)), dtype=np.int64, count=m))
    return tables


def exponentiation(Y: CoherentConfiguration, L: PermutationGroup) -> CoherentConfiguration:
    """The exponentiation of Y by a permutation group L on the coordinates.

    Colors are the L-orbits of m-tuples of Y-colors; for the trivial group on
    one coordinate the result is Y itself.
    """
    m = L.degree
    pm = ProductPointMap((Y.n,) * m)
    coords = pm.coordinate_table()
    k = Y.rank
    tuples = np.empty((pm.size, pm.size, m), dtype=np.int64)
    for i in range(m):
        tuples[:, :, i] = Y.colors[np.ix_(coords[:, i], coords[:, i])]
    weights = k ** np.arange(m - 1, -1, -1, dtype=np.int64)
    rep = None
    for table in _tuple_action_tables(L, m):
        code = tuples[:, :, table] @ weights
        rep = code if rep is None else np.minimum(rep, code)
    _, inverse = np.unique(rep.reshape(-1), return_inverse=True)
    colors = inverse.reshape(pm.size, pm.size)
    return build_config(ColorMatrix.from_rows(colors)).canonicalize()


def point_action_of(L: PermutationGroup, gamma_size: int) -> PermutationGroup:
    """L acting on tuple points of gamma_size^m by permuting coordinates."""
    m = L.degree
    pm = ProductPointMap((gamma_size,) * m)
    coords = pm.coordinate_table()
    gens = []
    for l in L.generators:
        table = np.fromiter((l.inverse()(i) for i in range(m)), dtype=np.int64, count=m)
        moved = coords[:, table]
        images = [pm.encode(tuple(int(x) for x in row)) for row in moved]
        gens.append(Permutation(tuple(images)))
    return PermutationGroup(pm.size, gens)


def hamming_relations(Y: CoherentConfiguration, m: int) -> list:
    """Relations r_0..r_m pairing tuples at each Hamming distance."""
    if m < 1:
        raise PreconditionViolated("coordinate count must be at least 1")
    pm = ProductPointMap((Y.n,) * m)
    coords = pm.coordinate_table()
    dist = np.zeros((pm.size, pm.size), dtype=np.int64)
    for i in range(m):
        dist += (coords[:, i][:, None] != coords[:, i][None, :]).astype(np.int64)
    return [dist == i for i in range(m + 1)]


def rho_map(Y: CoherentConfiguration, m: int, gamma0: int, beta: int) -> frozenset:
    """Neighbors of the constant tuple reachable one step closer to beta.

    With alpha the all-gamma0 tuple and d the Hamming distance from alpha to
    beta, returns the set of points at distance 1 from alpha and distance
    d - 1 from beta (an injection over the whole tuple space).
    """
    pm = ProductPointMap((Y.n,) * m)
    if not 0 <= gamma0 < Y.n:
        raise DegreeMismatch(f"gamma0 {gamma0} outside 0..{Y.n - 1}")
    bcoords = pm.decode(beta)
    d = sum(1 for c in bcoords if c != gamma0)
    if d == 0:
        return frozenset()
    out = []
    for i in range(m):
        for g in range(Y.n):
            if g == gamma0:
                continue
            delta = [gamma0] * m
            delta[i] = g
            dd = sum(1 for a, b in zip(delta, bcoords) if a != b)
            if dd == d - 1:
                out.append(pm.encode(delta))
    return frozenset(out)


def _normalize_psi(parts: Sequence[CoherentConfiguration], psi) -> dict:
    """Validate the family of color bijections and fill in identities."""
    t = len(parts)
    table: dict = {}
    if psi is None:
        psi = {}
    if isinstance(psi, Mapping):
        items = psi.items()
    else:
        items = (
            ((i, j), psi[i][j])
            for i in range(t)
            for j in range(t)
            if psi[i][j] is not None
        )
    for (i, j), iso in items:
        if iso is None:
            continue
        if not (0 <= i < t and 0 <= j < t):
            raise InconsistentPsi(f"index pair ({i}, {j}) out of range")
        if iso.source != parts[i] or iso.target != parts[j]:
            raise InconsistentPsi(f"psi[{i},{j}] does not map part {i} to part {j}")
        table[(i, j)] = iso
    for i in range(t):
        ident = AlgebraicIsomorphism.identity(parts[i])
        if (i, i) in table and table[(i, i)].mapping != ident.mapping:
            raise InconsistentPsi(f"psi[{i},{i}] is not the identity")
        table[(i, i)] = ident
    for (i, j), iso in list(table.items()):
        if (j, i) in table:
            if table[(j, i)].mapping != iso.inverse().mapping:
                raise InconsistentPsi(f"psi[{j},{i}] is not the inverse of psi[{i},{j}]")
        else:
            table[(j, i)] = iso.inverse()
    for (i, j) in list(table):
        for (j2, k) in list(table):
            if j2 != j or (i, k) not in table:
                continue
            comp = table[(i, j)].compose(table[(j, k)])
            if comp.mapping != table[(i, k)].mapping:
                raise InconsistentPsi(f"psi[{i},{j}] o psi[{j},{k}] != psi[{i},{k}]")
    return table


def glue_disjoint_union(
    parts: Sequence[CoherentConfiguration],
    psi=None,
    Q: PermutationGroup | None = None,
) -> CoherentConfiguration:
    """Smallest configuration on the disjoint union gluing the parts.

    Colors of parts linked by the bijections in psi are tagged as one seed
    relation; the pair orbits of Q on the part indices seed the block
    relations, so the quotient modulo the block equivalence is the coherent
    configuration of Q.
    """
    t = len(parts)
    if t == 0:
        raise DegreeMismatch("at least one part required")
    if Q is None:
        Q = PermutationGroup.trivial(t)
    if Q.degree != t:
        raise DegreeMismatch(f"group degree {Q.degree} != part count {t}")
    table = _normalize_psi(parts, psi)
    offsets = np.cumsum([0] + [p.n for p in parts])
    n = int(offsets[-1])

    # color classes across parts under the psi links
    node = {}
    for i, p in enumerate(parts):
        for c in range(p.rank):
            node[(i, c)] = len(node)
    parent = list(range(len(node)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j), iso in table.items():
        for c in range(parts[i].rank):
            a, b = find(node[(i, c)]), find(node[(j, iso(c))])
            if a != b:
                parent[a] = b
    classes: dict = {}
    for (i, c), x in node.items():
        classes.setdefault(find(x), []).append((i, c))

    seeds = []
    for members in classes.values():
        mask = np.zeros((n, n), dtype=bool)
        for i, c in members:
            o = int(offsets[i])
            mask[o : o + parts[i].n, o : o + parts[i].n] |= parts[i].colors == c
        seeds.append(mask)
    block_orbits = pair_orbits(Q)
    for c in range(block_orbits.k):
        mask = np.zeros((n, n), dtype=bool)
        for i, j in np.argwhere(block_orbits.colors == c):
            oi, oj = int(offsets[i]), int(offsets[j])
            mask[oi : oi + parts[int(i)].n, oj : oj + parts[int(j)].n] = True
        seeds.append(mask)
    return coherent_closure(seeds, n=n)
