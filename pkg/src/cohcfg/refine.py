"""Weisfeiler-Leman coherent closure, fissions, and algebraic isomorphisms.

The refinement replaces the color of each pair (i, j) by the signature
(old color, sorted multiset over t of (color(i, t), color(t, j))) until no
color splits.  Signatures are mapped to dense ids through a deterministic
lexicographic sort, so runs are reproducible.  Provided the initial coloring
separates the diagonal and determines the color of the transposed pair, the
stable partition is a coherent configuration, and it is the smallest fission
containing the seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import (
    ColorMatrix,
    CoherentConfiguration,
    build_config,
)
from .errors import DegreeMismatch, InvalidAlgebraicIso, SizeMismatch
from .perm import PermutationGroup, pair_orbits

__all__ = [
    "AlgebraicIsomorphism",
    "StabilizationRefusal",
    "coherent_closure",
    "fission",
    "fission_points",
    "simultaneous_stabilization",
    "inv_of_group",
]


def _dense(values: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(values.reshape(-1), return_inverse=True)
    return inverse.reshape(values.shape).astype(np.int64)


def _refine_stack(stack: np.ndarray) -> np.ndarray:
    """Refine a stack of m color matrices with one shared signature dictionary."""
    m, n, _ = stack.shape
    C = _dense(stack)
    while True:
        k = int(C.max()) + 1
        sig = np.empty((m, n, n, n + 1), dtype=np.int64)
        for a in range(m):
            paths = C[a][:, :, None] * k + C[a][None, :, :]
            paths.sort(axis=1)
            sig[a, :, :, 0] = C[a]
            sig[a, :, :, 1:] = np.moveaxis(paths, 1, 2)
        _, inverse = np.unique(sig.reshape(m * n * n, n + 1), axis=0, return_inverse=True)
        new = inverse.reshape(m, n, n).astype(np.int64)
        if int(new.max()) + 1 == k:
            return C
        C = new


def _relation_mask(rel, n: int) -> np.ndarray:
    if isinstance(rel, np.ndarray) and rel.dtype == bool:
        if rel.shape != (n, n):
            raise DegreeMismatch(f"relation shape {rel.shape} != ({n}, {n})")
        return rel
    mask = np.zeros((n, n), dtype=bool)
    for i, j in rel:
        if not (0 <= i < n and 0 <= j < n):
            raise DegreeMismatch(f"pair ({i}, {j}) outside 0..{n - 1}")
        mask[i, j] = True
    return mask


def _initial_colors(n: int, masks: Sequence[np.ndarray], base: np.ndarray | None = None) -> np.ndarray:
    """Initial coloring from seed relations: diagonal bit plus the membership
    of (i, j) and of (j, i) in every seed, on top of an optional base matrix."""
    layers = [np.eye(n, dtype=np.int64)]
    if base is not None:
        layers.insert(0, base.astype(np.int64))
    for mask in masks:
        layers.append(mask.astype(np.int64))
        layers.append(mask.T.astype(np.int64))
    stacked = np.stack(layers, axis=-1)
    _, inverse = np.unique(stacked.reshape(n * n, len(layers)), axis=0, return_inverse=True)
    return inverse.reshape(n, n).astype(np.int64)


def coherent_closure(seed, n: int | None = None) -> CoherentConfiguration:
    """Smallest coherent configuration containing every seed relation.

    The seed is a ColorMatrix (or square integer array) taken as a full
    partition, or a list of binary relations (boolean matrices or pair
    iterables), not necessarily disjoint.  An empty seed list yields the
    trivial configuration: the diagonal and, for n > 1, its complement.
    """
    if isinstance(seed, ColorMatrix):
        init = _initial_colors(seed.n, [], base=seed.colors)
    elif isinstance(seed, CoherentConfiguration):
        init = _initial_colors(seed.n, [], base=seed.colors)
    elif isinstance(seed, np.ndarray) and seed.ndim == 2 and seed.dtype != bool:
        m = ColorMatrix.from_rows(seed)
        init = _initial_colors(m.n, [], base=m.colors)
    else:
        rels = list(seed)
        if n is None:
            raise DegreeMismatch("point count required for a relation-list seed")
        masks = [_relation_mask(r, n) for r in rels]
        init = _initial_colors(n, masks)
    stable = _refine_stack(init[None, :, :])[0]
    return build_config(ColorMatrix.from_rows(stable)).canonicalize()


def fission(X: CoherentConfiguration, pi: Iterable[Iterable[int]]) -> CoherentConfiguration:
    """The smallest fission of X in which every set of pi is a fiber union.

    Each set Delta contributes the reflexive relation on Delta (the set is
    adjoined as a whole, not point by point).
    """
    n = X.n
    masks = []
    for delta in pi:
        pts = sorted(set(int(d) for d in delta))
        if any(p < 0 or p >= n for p in pts):
            raise DegreeMismatch(f"set {pts} outside 0..{n - 1}")
        mask = np.zeros((n, n), dtype=bool)
        for p in pts:
            mask[p, p] = True
        masks.append(mask)
    init = _initial_colors(n, masks, base=X.colors)
    stable = _refine_stack(init[None, :, :])[0]
    return build_config(ColorMatrix.from_rows(stable)).canonicalize()


def fission_points(X: CoherentConfiguration, gamma: Iterable[int]) -> CoherentConfiguration:
    """Fission individualizing every point of gamma (singleton sets)."""
    return fission(X, [{int(g)} for g in gamma])


@dataclass(frozen=True)
class StabilizationRefusal:
    """Lockstep refinement diverged: no extension of psi exists."""

    round: int
    detail: str

    def __bool__(self):
        return False


class AlgebraicIsomorphism:
    """A color bijection between two configurations preserving all triple counts."""

    def __init__(self, source: CoherentConfiguration, target: CoherentConfiguration, mapping: Sequence[int]):
        mapping = tuple(int(m) for m in mapping)
        if source.rank != target.rank or sorted(mapping) != list(range(source.rank)):
            raise InvalidAlgebraicIso("color map is not a bijection between the color sets")
        if source.n != target.n:
            raise InvalidAlgebraicIso("configurations have different degrees")
        self.source = source
        self.target = target
        self.mapping = mapping
        self._verify()

    def _verify(self):
        X, Y, m = self.source, self.target, self.mapping
        for c in range(X.rank):
            if m[X.star[c]] != Y.star[m[c]]:
                raise InvalidAlgebraicIso(f"star not preserved at color {c}")
            if X.color_size(c) != Y.color_size(m[c]):
                raise InvalidAlgebraicIso(f"relation size not preserved at color {c}")
            if (c in X.diagonal_colors) != (m[c] in Y.diagonal_colors):
                raise InvalidAlgebraicIso(f"reflexive colors not preserved at color {c}")
            if X.valency[c] != Y.valency[m[c]]:
                raise InvalidAlgebraicIso(f"valency not preserved at color {c}")
        mapped = {(m[r], m[s], m[t]): v for (r, s, t), v in X.tensor.items()}
        if mapped != Y.tensor:
            bad = next(iter(set(mapped.items()) ^ set(Y.tensor.items())))
            raise InvalidAlgebraicIso(f"intersection numbers differ near {bad[0]}")

    @classmethod
    def identity(cls, X: CoherentConfiguration) -> "AlgebraicIsomorphism":
        return cls(X, X, tuple(range(X.rank)))

    def __call__(self, color: int) -> int:
        return self.mapping[color]

    def inverse(self) -> "AlgebraicIsomorphism":
        inv = [0] * len(self.mapping)
        for c, d in enumerate(self.mapping):
            inv[d] = c
        return AlgebraicIsomorphism(self.target, self.source, tuple(inv))

    def compose(self, other: "AlgebraicIsomorphism") -> "AlgebraicIsomorphism":
        """self then other; requires other.source == self.target."""
        if other.source is not self.target and other.source != self.target:
            raise InvalidAlgebraicIso("composition targets do not match")
        return AlgebraicIsomorphism(
            self.source, other.target, tuple(other.mapping[c] for c in self.mapping)
        )

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraicIsomorphism)
            and self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __repr__(self):
        return f"AlgebraicIsomorphism(rank={len(self.mapping)})"


def _first_color_positions(C: np.ndarray):
    flat = C.reshape(-1)
    colors, first = np.unique(flat, return_index=True)
    return {int(c): int(f) for c, f in zip(colors, first)}


def simultaneous_stabilization(
    s1: Sequence, s2: Sequence, psi: Sequence[int] | Mapping[int, int],
    n1: int | None = None, n2: int | None = None,
):
    """Extend the seed bijection psi to an algebraic isomorphism of the closures.

    s1 and s2 are relation lists on point sets of equal size; psi maps seed
    indices of s1 to seed indices of s2.  Both closures run in lockstep with
    one shared signature dictionary; if the color multisets diverge at some
    round the result is a StabilizationRefusal recording that round, otherwise
    the unique extension is returned.
    """
    if len(s1) != len(s2):
        raise SizeMismatch(f"{len(s1)} seed relations vs {len(s2)}")
    if isinstance(psi, Mapping):
        psi = [psi[i] for i in range(len(s1))]
    psi = [int(p) for p in psi]
    if sorted(psi) != list(range(len(s2))):
        raise SizeMismatch("psi is not a bijection between the seed lists")

    def infer_n(rels, n):
        if n is not None:
            return n
        mx = -1
        for r in rels:
            if isinstance(r, np.ndarray):
                return r.shape[0]
            for i, j in r:
                mx = max(mx, i, j)
        return mx + 1

    n1 = infer_n(s1, n1)
    n2 = infer_n(s2, n2)
    if n1 != n2:
        raise SizeMismatch(f"point sets have sizes {n1} and {n2}")
    n = n1
    masks1 = [_relation_mask(r, n) for r in s1]
    masks2_by_target = [_relation_mask(r, n) for r in s2]
    # align seed bit positions: position i of side 2 carries psi(s1[i])
    masks2 = [masks2_by_target[psi[i]] for i in range(len(s1))]
    init1 = _initial_colors(n, masks1)
    init2 = _initial_colors(n, masks2)

    # lockstep refinement with divergence detection per round
    C = _dense(np.stack([init1, init2]))
    round_no = 0
    while True:
        h1 = np.bincount(C[0].reshape(-1))
        h2 = np.bincount(C[1].reshape(-1), minlength=len(h1))
        if len(np.bincount(C[1].reshape(-1))) > len(h1) or not np.array_equal(h1, h2):
            return StabilizationRefusal(round=round_no, detail="color multisets diverged")
        k = int(C.max()) + 1
        sig = np.empty((2, n, n, n + 1), dtype=np.int64)
        for a in range(2):
            paths = C[a][:, :, None] * k + C[a][None, :, :]
            paths.sort(axis=1)
            sig[a, :, :, 0] = C[a]
            sig[a, :, :, 1:] = np.moveaxis(paths, 1, 2)
        _, inverse = np.unique(sig.reshape(2 * n * n, n + 1), axis=0, return_inverse=True)
        new = inverse.reshape(2, n, n).astype(np.int64)
        if int(new.max()) + 1 == k:
            break
        C = new
        round_no += 1

    X1 = build_config(ColorMatrix.from_rows(_dense(C[0]))).canonicalize()
    X2 = build_config(ColorMatrix.from_rows(_dense(C[1]))).canonicalize()
    # shared ids induce the color bijection; read it off through both relabels
    shared1 = {}
    for c, pos in _first_color_positions(C[0]).items():
        shared1[c] = int(X1.colors.reshape(-1)[pos])
    mapping = [0] * X1.rank
    for c, pos in _first_color_positions(C[1]).items():
        mapping[shared1[int(c)]] = int(X2.colors.reshape(-1)[pos])
    try:
        return AlgebraicIsomorphism(X1, X2, tuple(mapping))
    except InvalidAlgebraicIso as exc:  # pragma: no cover - guarded by lockstep
        return StabilizationRefusal(round=round_no, detail=str(exc))


def inv_of_group(G: PermutationGroup) -> CoherentConfiguration:
    """The coherent configuration of G: pair orbits, validated and canonical."""
    return build_config(pair_orbits(G)).canonicalize()
