"""Bases and generalized bases: completeness tests, exhaustive searches,
indistinguishing numbers, sufficient conditions for a base of size 2, and the
constructive generalized-base builders for wreath products and exponentiations.

A point set family Pi is a generalized base when the Pi-fission is complete
(every fiber a singleton); a base is the singleton-family special case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import CoherentConfiguration, restriction_with_parents
from .errors import BudgetExceeded, NotHomogeneous, PreconditionViolated
from .perm import PermutationGroup
from .products import ProductPointMap
from .refine import fission, fission_points, inv_of_group

__all__ = [
    "BaseCertificate",
    "BaseSearchResult",
    "Base2Verdicts",
    "is_generalized_base",
    "base_number_search",
    "indistinguishing_numbers",
    "sufficient_base2_checks",
    "build_wreath_generalized_base",
    "build_thin_generalized_base",
    "build_exponentiation_base",
]


@dataclass(frozen=True)
class BaseCertificate:
    """A (generalized) base candidate and the rank its fission achieved."""

    kind: str  # "base" | "generalized"
    sets: tuple
    fission_rank: int
    complete: bool


@dataclass(frozen=True)
class BaseSearchResult:
    size: int
    certificate: BaseCertificate


def _normalize_family(pi) -> tuple:
    return tuple(tuple(sorted(set(int(p) for p in delta))) for delta in pi)


def is_generalized_base(X: CoherentConfiguration, pi: Iterable[Iterable[int]]):
    """Whether the Pi-fission of X is complete, with a certificate."""
    sets = _normalize_family(pi)
    fissioned = fission(X, sets)
    kind = "base" if all(len(s) == 1 for s in sets) else "generalized"
    cert = BaseCertificate(kind=kind, sets=sets, fission_rank=fissioned.rank,
                           complete=fissioned.is_complete())
    return cert.complete, cert


def _upper_bound(X: CoherentConfiguration) -> int:
    # individualizing all but one point of every fiber always completes
    return X.n - len(X.fibers)


def base_number_search(X: CoherentConfiguration, mode: str = "base", budget: int | None = None) -> BaseSearchResult:
    """Exact b(X) or gb(X) by exhaustive search up to the budget.

    mode "base" enumerates point subsets of growing size in lexicographic
    order; mode "gb" enumerates single subsets (smallest first, complements
    skipped), then pairs of subsets.  Raises BudgetExceeded past the budget,
    carrying the best known upper bound.
    """
    if mode not in ("base", "gb"):
        raise ValueError(f"unknown mode {mode!r}")
    if X.is_complete():
        kind = "base" if mode == "base" else "generalized"
        cert = BaseCertificate(kind=kind, sets=(), fission_rank=X.rank, complete=True)
        return BaseSearchResult(size=0, certificate=cert)
    n = X.n
    if mode == "base":
        budget = _upper_bound(X) if budget is None else min(budget, n)
        # incremental fissions: lexicographic subsets share prefixes
        cache1: dict = {}
        cache2: dict = {}
        for k in range(1, budget + 1):
            for subset in itertools.combinations(range(n), k):
                current = X
                if k >= 1:
                    a = subset[0]
                    if a not in cache1:
                        cache1[a] = fission_points(X, (a,))
                    current = cache1[a]
                if k >= 2:
                    ab = subset[:2]
                    if ab not in cache2:
                        cache2.clear()
                        cache2[ab] = fission_points(current, (subset[1],))
                    current = cache2[ab]
                for p in subset[2:]:
                    current = fission_points(current, (p,))
                if current.is_complete():
                    cert = BaseCertificate(
                        kind="base", sets=tuple((p,) for p in subset),
                        fission_rank=current.rank, complete=True,
                    )
                    return BaseSearchResult(size=k, certificate=cert)
        raise BudgetExceeded(budget, upper_bound=_upper_bound(X))

    budget = 2 if budget is None else budget
    if budget >= 1:
        for size in range(1, n // 2 + 1):
            for subset in itertools.combinations(range(n), size):
                if 2 * size == n and 0 not in subset:
                    continue  # complements give the same fission
                ok, cert = is_generalized_base(X, (subset,))
                if ok:
                    return BaseSearchResult(size=1, certificate=cert)
    if budget >= 2:
        subsets = [
            s
            for size in range(1, n // 2 + 1)
            for s in itertools.combinations(range(n), size)
            if 2 * size < n or 0 in s
        ]
        for s1, s2 in itertools.combinations(subsets, 2):
            ok, cert = is_generalized_base(X, (s1, s2))
            if ok:
                return BaseSearchResult(size=2, certificate=cert)
    raise BudgetExceeded(budget, upper_bound=_upper_bound(X))


def indistinguishing_numbers(X: CoherentConfiguration):
    """c(s) = sum_t c_{t t*}^s per color, and the maximum over non-reflexive s.

    c(X) = 0 exactly for regular schemes.
    """
    if not X.is_homogeneous():
        raise NotHomogeneous("indistinguishing numbers need a scheme")
    per_color = {}
    for s in range(X.rank):
        per_color[s] = sum(
            X.intersection_number(t, X.star[t], s) for t in range(X.rank)
        )
    non_reflexive = [per_color[s] for s in range(X.rank) if s not in X.diagonal_colors]
    c_max = max(non_reflexive) if non_reflexive else 0
    return per_color, c_max


@dataclass(frozen=True)
class Base2Verdicts:
    """Outcomes of the three sufficient conditions for b(X) <= 2.

    The sparse-composition verdict only implies a small base for
    antisymmetric primitive schurian schemes; any_true gates it on the
    checkable flags (schurity stays the caller's responsibility).
    """

    local_semiregular: bool
    local_witness: tuple | None
    small_indistinguishing: bool
    one_regular_everywhere: bool | None
    sparse_composition: bool
    sparse_witness: int | None
    homogeneous: bool
    antisymmetric: bool
    primitive: bool

    def any_true(self) -> bool:
        applicable_sparse = self.sparse_composition and self.antisymmetric and self.primitive
        return self.local_semiregular or self.small_indistinguishing or applicable_sparse


def _local_config(X: CoherentConfiguration, alpha: int, support: tuple):
    """(X_alpha) restricted to a point set that is a fiber union of X_alpha."""
    Xa = fission_points(X, (alpha,))
    cfg, _ = restriction_with_parents(Xa, support)
    return cfg


def sufficient_base2_checks(X: CoherentConfiguration) -> Base2Verdicts:
    """Three verifiable conditions, each implying a base of size at most 2.

    A: some connected symmetric color union s has (X_alpha)_{alpha s}
    semiregular for every alpha (any pair inside s is then a base).
    B: 4 c (m - 1) < n for c the maximal indistinguishing number and m the
    maximal valency (every one-point fission is then 1-regular).
    C: some non-reflexive r has enough compositions with multiplicity <= 2
    (meaningful for antisymmetric primitive schurian schemes; flags echoed).
    """
    if not X.is_homogeneous():
        raise NotHomogeneous("the base-2 conditions need a scheme")
    from .config import structure_flags

    flags = structure_flags(X)
    n = X.n

    # verdict A over candidate unions r ∪ r*
    local_semiregular = False
    local_witness = None
    seen_unions = set()
    for r in range(X.rank):
        if r in X.diagonal_colors:
            continue
        union = frozenset({r, X.star[r]})
        if union in seen_unions:
            continue
        seen_unions.add(union)
        if not _symmetric_union_connected(X, union):
            continue
        ok = True
        for alpha in range(n):
            support = tuple(
                int(b) for b in np.flatnonzero(
                    np.isin(X.colors[alpha], list(union))
                )
            )
            if not support:
                ok = False
                break
            local = _local_config(X, alpha, support)
            if not local.is_semiregular():
                ok = False
                break
        if ok:
            local_semiregular = True
            local_witness = tuple(sorted(union))
            break

    per_color, c_max = indistinguishing_numbers(X)
    m = max(int(v) for v in X.valency)
    small = 4 * c_max * (m - 1) < n
    one_regular = None
    if small:
        one_regular = all(
            len(fission_points(X, (alpha,)).regular_points()) > 0 for alpha in range(n)
        )

    sparse = False
    sparse_witness = None
    for r in range(X.rank):
        if r in X.diagonal_colors:
            continue
        rs = X.star[r]
        in_rr = {
            t for t in range(X.rank)
            if X.intersection_number(rs, r, t) > 0 and X.intersection_number(r, t, r) <= 2
        }
        in_rrs = {
            t for t in range(X.rank)
            if X.intersection_number(rs, rs, t) > 0 and X.intersection_number(r, t, rs) <= 2
        }
        if in_rrs and 3 * len(in_rr | in_rrs) > 2 * int(X.valency[r]):
            sparse = True
            sparse_witness = r
            break

    return Base2Verdicts(
        local_semiregular=local_semiregular,
        local_witness=local_witness,
        small_indistinguishing=small,
        one_regular_everywhere=one_regular,
        sparse_composition=sparse,
        sparse_witness=sparse_witness,
        homogeneous=flags.homogeneous,
        antisymmetric=flags.antisymmetric,
        primitive=flags.primitive,
    )


def _symmetric_union_connected(X: CoherentConfiguration, colors: frozenset) -> bool:
    n = X.n
    adj = np.zeros((n, n), dtype=bool)
    for c in colors:
        adj |= X.colors == c
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(adj[v] | adj[:, v]):
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


def _require(cond: bool, hypothesis: str):
    if not cond:
        raise PreconditionViolated(hypothesis)


def _validate_gb(X: CoherentConfiguration, pi, name: str):
    ok, _ = is_generalized_base(X, pi)
    _require(ok, f"{name} is not a generalized base")


def build_wreath_generalized_base(
    X1: CoherentConfiguration, X2: CoherentConfiguration,
    pi1: Sequence[Iterable[int]], pi2: Sequence[Iterable[int]],
) -> tuple:
    """A generalized base of X1 wr X2 of size max(|pi1|, |pi2|).

    Each output set is Gamma1 x Gamma2 joined with the product of the two
    complements; the smaller family is padded by repeating its last element.
    Requires antisymmetric X1, homogeneous factors, sizes > 0, and a proper
    first-factor set.
    """
    pi1 = _normalize_family(pi1)
    pi2 = _normalize_family(pi2)
    _require(X1.is_antisymmetric(), "first factor is antisymmetric")
    _require(X1.is_homogeneous() and X2.is_homogeneous(), "factors are homogeneous")
    _require(len(pi1) > 0 and len(pi2) > 0, "base families are non-empty")
    _require(any(0 < len(g) < X1.n for g in pi1), "first family contains a proper subset")
    _validate_gb(X1, pi1, "pi1")
    _validate_gb(X2, pi2, "pi2")
    b = max(len(pi1), len(pi2))
    pi1 = pi1 + (pi1[-1],) * (b - len(pi1))
    pi2 = pi2 + (pi2[-1],) * (b - len(pi2))
    pm = ProductPointMap((X1.n, X2.n))
    out = []
    for g1, g2 in zip(pi1, pi2):
        c1 = tuple(p for p in range(X1.n) if p not in g1)
        c2 = tuple(p for p in range(X2.n) if p not in g2)
        gamma = {pm.encode((a, b2)) for a in g1 for b2 in g2}
        gamma |= {pm.encode((a, b2)) for a in c1 for b2 in c2}
        out.append(tuple(sorted(gamma)))
    return tuple(out)


def build_thin_generalized_base(
    X1: CoherentConfiguration, X2: CoherentConfiguration,
    b1_points: Iterable[int], pi2: Sequence[Iterable[int]],
) -> tuple:
    """A thin generalized base of X1 wr X2 (at most one point per block).

    Follows the pairing construction: the base of X1 is split in half (padded
    to even size first), each half-point carries one set of pi2 and its
    complement, leftovers fall on a fixed first-factor point.  The size is
    b1 + max(0, b2 - b1/2) for the padded even b1.
    """
    base1 = tuple(sorted(set(int(p) for p in b1_points)))
    pi2 = _normalize_family(pi2)
    _require(X1.is_antisymmetric(), "first factor is antisymmetric")
    ok, _ = is_generalized_base(X1, tuple((p,) for p in base1))
    _require(ok, "first-factor point set is a base")
    _validate_gb(X2, pi2, "pi2")
    b1, b2 = len(base1), len(pi2)
    pm = ProductPointMap((X1.n, X2.n))
    out = []
    if 2 * b2 >= b1:
        if b1 % 2 == 1:
            extra = min(p for p in range(X1.n) if p not in base1)
            base1 = tuple(sorted(base1 + (extra,)))
            b1 += 1
        half = b1 // 2
        B, Bp = base1[:half], base1[half:]
        delta = 0
        for idx, beta in enumerate(B):
            gamma2 = pi2[idx]
            comp2 = tuple(p for p in range(X2.n) if p not in gamma2)
            beta_p = Bp[idx]
            out.append(tuple(sorted(
                {pm.encode((beta, a)) for a in gamma2}
                | {pm.encode((beta_p, a)) for a in comp2}
            )))
            out.append(tuple(sorted(
                {pm.encode((beta_p, a)) for a in gamma2}
                | {pm.encode((beta, a)) for a in comp2}
            )))
        for gamma2 in pi2[half:]:
            out.append(tuple(sorted(pm.encode((delta, a)) for a in gamma2)))
    else:
        B, Bp = base1[:b2], base1[b2 : 2 * b2]
        rest = base1[2 * b2 :]
        for idx, beta in enumerate(B):
            gamma2 = pi2[idx]
            comp2 = tuple(p for p in range(X2.n) if p not in gamma2)
            beta_p = Bp[idx]
            out.append(tuple(sorted(
                {pm.encode((beta, a)) for a in gamma2}
                | {pm.encode((beta_p, a)) for a in comp2}
            )))
            out.append(tuple(sorted(
                {pm.encode((beta_p, a)) for a in gamma2}
                | {pm.encode((beta, a)) for a in comp2}
            )))
        for beta in rest:
            out.append(tuple(pm.encode((beta, a)) for a in range(X2.n)))
    # thinness: at most one point per block {.} x {alpha}
    for gamma in out:
        per_block = {}
        for p in gamma:
            _, a = pm.decode(p)
            per_block[a] = per_block.get(a, 0) + 1
        assert all(v <= 1 for v in per_block.values())
    return tuple(out)


def thin_base_size_bound(b1: int, b2: int) -> int:
    """Size bound of the thin-base construction with b1 padded to even."""
    if 2 * b2 >= b1:
        b1 = b1 + (b1 % 2)
        return b1 // 2 + b2
    return b1


def build_exponentiation_base(
    Y: CoherentConfiguration, L: PermutationGroup,
    base_y: Iterable[int], pi_l: Sequence[Iterable[int]],
) -> tuple:
    """A point base of the exponentiation of Y by L.

    Built from a thin generalized base of (restriction of the gamma0-fission)
    wr inv(L), pulled through the coordinate bijection onto the neighborhood
    of the constant tuple and decoded to preimage points; the constant tuple
    itself is appended.  Requires antisymmetric non-complete Y, transitive L
    of odd order, and a base of Y whose first point is gamma0.
    """
    base_y = tuple(int(p) for p in base_y)
    pi_l = _normalize_family(pi_l)
    _require(Y.is_antisymmetric(), "Y is antisymmetric")
    _require(not Y.is_complete(), "Y is not complete")
    m = L.degree
    if m == 1:
        return tuple(sorted(set(base_y)))
    _require(len(L.orbits()) == 1, "L is transitive")
    _require(L.is_odd_order(), "L has odd order")
    ok, _ = is_generalized_base(Y, tuple((p,) for p in base_y))
    _require(ok, "base_y is a base of Y")
    XL = inv_of_group(L)
    _validate_gb(XL, pi_l, "pi_l")

    gamma0 = base_y[0]
    others = tuple(sorted(set(base_y) - {gamma0}))
    Yg = fission_points(Y, (gamma0,))
    gamma_rest = tuple(p for p in range(Y.n) if p != gamma0)
    Y0, _ = restriction_with_parents(Yg, gamma_rest)
    # base of Y0: base_y minus gamma0, relabeled into the restriction
    relabel = {p: i for i, p in enumerate(gamma_rest)}
    base0 = tuple(sorted(relabel[p] for p in others))
    pi_thin = build_thin_generalized_base(Y0, XL, base0, pi_l)

    # map (gamma, i) in Gamma0 x Delta to the point of alpha-r with
    # coordinate i equal to gamma and all others gamma0
    pm_pair = ProductPointMap((Y0.n, m))
    pm = ProductPointMap((Y.n,) * m)

    def to_alpha_r(pair_point: int) -> int:
        gi, i = pm_pair.decode(pair_point)
        gamma = gamma_rest[gi]
        coords = [gamma0] * m
        coords[i] = gamma
        return pm.encode(coords)

    alpha = pm.encode((gamma0,) * m)
    points = [alpha]
    for lam in pi_thin:
        members = sorted(to_alpha_r(p) for p in lam)
        # lambda = rho(beta): recover beta from the touched coordinates
        coords = [gamma0] * m
        for p in members:
            c = pm.decode(p)
            i = next(i for i in range(m) if c[i] != gamma0)
            coords[i] = c[i]
        points.append(pm.encode(coords))
    return tuple(sorted(set(points)))
