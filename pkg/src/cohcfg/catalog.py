"""Named fixtures: Paley tournaments, odd-order groups, and the
doubly-regular-tournament negative instance.

Every fixture is generated deterministically here and also shipped as a data
file; the files are the canonical serialized forms.  The DRT-15 matrix was
found by a seeded arc-flipping search (seed 59 of the generator below) and is
frozen as a literal.
"""

from __future__ import annotations

import random
from importlib import resources

import numpy as np

from .config import CoherentConfiguration
from .errors import ValidationError
from .perm import Permutation, PermutationGroup
from .products import ProductPointMap, point_action_of
from .recognize import Tournament

__all__ = [
    "paley_tournament",
    "paley_scheme",
    "cyclic_group",
    "frobenius21_group",
    "z3_wr_z3_group",
    "exp27_group",
    "drt15_tournament",
    "drt15_scheme",
    "base_groups",
    "random_odd_group",
    "fixture_names",
    "load_fixture",
    "fixture_text",
]

PALEY_ORDERS = (7, 11, 19, 23)

# out-neighbor matrix of a doubly regular tournament on 15 vertices:
# every out-degree 7, every ordered pair with exactly 3 common out-neighbors
_DRT15_ROWS = (
    "010010001110011",
    "001001010110101",
    "100100000111110",
    "110001011101000",
    "011100101100100",
    "101010100101001",
    "111100010000011",
    "101011001000110",
    "011001100011010",
    "000000111001111",
    "000111110100010",
    "110010110010100",
    "100101101010001",
    "010111000001101",
    "001110011011000",
)


def paley_tournament(q: int) -> Tournament:
    """Arcs along the nonzero quadratic residues of GF(q), q = 3 mod 4."""
    if q % 4 != 3 or not _is_prime(q):
        raise ValidationError("paley order", f"{q} is not a prime = 3 mod 4")
    residues = {(x * x) % q for x in range(1, q)}
    arcs = {(i, (i + d) % q): 0 for i in range(q) for d in residues}
    return Tournament(q, arcs)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def paley_scheme(q: int) -> CoherentConfiguration:
    return paley_tournament(q).configuration()


def cyclic_group(n: int) -> PermutationGroup:
    return PermutationGroup.cyclic(n)


def frobenius21_group() -> PermutationGroup:
    """Maps x -> ax + b on GF(7) with a a nonzero quadratic residue."""
    add1 = Permutation(tuple((x + 1) % 7 for x in range(7)))
    mul2 = Permutation(tuple((2 * x) % 7 for x in range(7)))
    return PermutationGroup(7, [add1, mul2])


def z3_wr_z3_group() -> PermutationGroup:
    """The imprimitive wreath product of two cyclic groups of order 3.

    Points are pairs (w, a) encoded w * 3 + a, blocks {(., a)}; generators
    rotate the first coordinate inside block 0 and shift the block index.
    """
    pm = ProductPointMap((3, 3))
    rot0 = [pm.encode(((w + 1) % 3, a)) if a == 0 else pm.encode((w, a))
            for w, a in map(pm.decode, range(9))]
    shift = [pm.encode((w, (a + 1) % 3)) for w, a in map(pm.decode, range(9))]
    return PermutationGroup(9, [Permutation(tuple(rot0)), Permutation(tuple(shift))])


def exp27_group() -> PermutationGroup:
    """Translations of Z3^3 extended by the cyclic coordinate shift.

    The pair orbits of this group are exactly the colors of the
    exponentiation of the order-3 cyclic scheme by the cyclic group.
    """
    pm = ProductPointMap((3, 3, 3))
    tr = [pm.encode((((c[0] + 1) % 3,) + c[1:])) for c in map(pm.decode, range(27))]
    shift = point_action_of(PermutationGroup.cyclic(3), 3)
    return PermutationGroup(27, [Permutation(tuple(tr))] + list(shift.generators))


def drt15_tournament() -> Tournament:
    arcs = {}
    for i, row in enumerate(_DRT15_ROWS):
        for j, ch in enumerate(row):
            if ch == "1":
                arcs[(i, j)] = 0
    T = Tournament(15, arcs)
    _validate_drt(T, out_degree=7, common=3)
    return T


def _validate_drt(T: Tournament, out_degree: int, common: int):
    n = T.n
    adj = np.zeros((n, n), dtype=np.int64)
    for (i, j) in T.arcs:
        adj[i, j] = 1
    if not (adj.sum(axis=1) == out_degree).all():
        raise ValidationError("doubly regular", "out-degrees differ")
    co = adj @ adj.T
    off = ~np.eye(n, dtype=bool)
    if not (co[off] == common).all():
        raise ValidationError("doubly regular", "common out-neighbor counts differ")


def drt15_scheme() -> CoherentConfiguration:
    return drt15_tournament().configuration()


def base_groups(max_degree: int = 27) -> dict:
    """The named odd-order groups of the catalog, keyed by fixture name."""
    out = {}
    for n in range(3, max_degree + 1, 2):
        out[f"cyclic{n}"] = cyclic_group(n)
    if max_degree >= 7:
        out["frobenius21"] = frobenius21_group()
    if max_degree >= 9:
        out["z3wrz3"] = z3_wr_z3_group()
    if max_degree >= 27:
        out["exp27"] = exp27_group()
    return out


def random_odd_group(rng: random.Random, max_degree: int = 27) -> PermutationGroup:
    """A random direct sum of catalog groups, randomly relabeled."""
    pool = list(base_groups(max_degree).values())
    parts = []
    total = 0
    while True:
        candidates = [g for g in pool if total + g.degree <= max_degree]
        if not candidates or (parts and rng.random() < 0.35):
            break
        g = candidates[rng.randrange(len(candidates))]
        parts.append(g)
        total += g.degree
    G = PermutationGroup.direct_sum(parts)
    relabel = Permutation(tuple(rng.sample(range(G.degree), G.degree)))
    return G.conjugate(relabel)


def fixture_names() -> list:
    names = [f"paley{q}" for q in PALEY_ORDERS]
    names += [f"paley{q}_scheme" for q in PALEY_ORDERS]
    names += ["drt15", "drt15_scheme"]
    names += sorted(base_groups().keys())
    return names


def _build_fixture(name: str):
    from . import fileio

    if name.startswith("paley") and name.endswith("_scheme"):
        q = int(name[len("paley"):-len("_scheme")])
        return paley_scheme(q), fileio.serialize_config
    if name.startswith("paley"):
        return paley_tournament(int(name[len("paley"):])), fileio.serialize_tournament
    if name == "drt15":
        return drt15_tournament(), fileio.serialize_tournament
    if name == "drt15_scheme":
        return drt15_scheme(), fileio.serialize_config
    groups = base_groups()
    if name in groups:
        return groups[name], fileio.serialize_group
    raise ValidationError("fixture", f"unknown fixture {name!r}")


def load_fixture(name: str):
    obj, _ = _build_fixture(name)
    return obj


def fixture_text(name: str) -> str:
    obj, ser = _build_fixture(name)
    return ser(obj)


def fixture_filename(name: str) -> str:
    if name.endswith("_scheme"):
        return f"{name}.ccfg"
    if name.startswith("paley") or name == "drt15":
        return f"{name}.trn"
    return f"{name}.grp"


def write_fixture_files(directory) -> list:
    """Regenerate every fixture file; returns the paths written."""
    import pathlib

    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in fixture_names():
        path = directory / fixture_filename(name)
        path.write_text(fixture_text(name), encoding="utf-8")
        written.append(path)
    return written


def packaged_fixture_path(name: str):
    return resources.files("cohcfg").joinpath("data", fixture_filename(name))
