"""Text formats: configurations, tournaments, groups, seed relations.

Formats are line-oriented; lines starting with '#' are comments.  Serializers
emit a canonical form so that parsing and re-serializing a canonical fixture
is byte-identical.
"""

from __future__ import annotations

import re

import numpy as np

from .config import ColorMatrix, CoherentConfiguration, build_config
from .errors import ParseError, ValidationError
from .perm import Permutation, PermutationGroup
from .recognize import Tournament

__all__ = [
    "parse_and_validate",
    "parse_config",
    "parse_tournament",
    "parse_group",
    "parse_relations",
    "parse_point_sets",
    "serialize_config",
    "serialize_tournament",
    "serialize_group",
    "serialize_relations",
    "config_to_json",
]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _ints(parts, lineno):
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {parts!r}")


def parse_config(text: str) -> CoherentConfiguration:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "empty configuration file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "ccfg":
        raise ParseError(lineno, "header must be 'ccfg n k'")
    n, k = _ints(parts[1:], lineno)
    rows = []
    for lineno, line in lines[1:]:
        row = _ints(line.split(), lineno)
        if len(row) != n:
            raise ParseError(lineno, f"expected {n} colors per row, got {len(row)}")
        if any(c < 0 or c >= k for c in row):
            raise ParseError(lineno, f"color outside 0..{k - 1}")
        rows.append(row)
    if len(rows) != n:
        raise ParseError(lines[-1][0] if lines else 1, f"expected {n} rows, got {len(rows)}")
    matrix = np.asarray(rows, dtype=np.int64)
    if len(np.unique(matrix)) != k:
        raise ParseError(lines[0][0], "not all declared colors occur")
    return build_config(ColorMatrix.from_rows(matrix))


def serialize_config(X: CoherentConfiguration) -> str:
    out = [f"ccfg {X.n} {X.rank}"]
    for row in X.colors:
        out.append(" ".join(str(int(c)) for c in row))
    return "\n".join(out) + "\n"


def config_to_json(X: CoherentConfiguration) -> dict:
    """Full JSON export: colors plus tensor, fibers, valencies, and flags."""
    from .config import structure_flags

    flags = structure_flags(X)
    return {
        "n": X.n,
        "rank": X.rank,
        "colors": [[int(c) for c in row] for row in X.colors],
        "star": [int(s) for s in X.star],
        "fibers": [list(f) for f in X.fibers],
        "valencies": [int(v) for v in X.valency],
        "tensor": [[r, s, t, v] for (r, s, t), v in sorted(X.tensor.items())],
        "flags": {
            "homogeneous": flags.homogeneous,
            "antisymmetric": flags.antisymmetric,
            "primitive": flags.primitive,
            "regular": flags.regular,
            "one_regular_points": list(flags.one_regular_points),
        },
    }


def parse_tournament(text: str) -> Tournament:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "empty tournament file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "trn":
        raise ParseError(lineno, "header must be 'trn n k'")
    n, k = _ints(parts[1:], lineno)
    arcs = {}
    for lineno, line in lines[1:]:
        vals = _ints(line.split(), lineno)
        if len(vals) != 3:
            raise ParseError(lineno, "arc lines are 'i j c'")
        i, j, c = vals
        if not 0 <= c < k:
            raise ParseError(lineno, f"arc color outside 0..{k - 1}")
        if (i, j) in arcs or (j, i) in arcs:
            raise ParseError(lineno, f"duplicate arc between {i} and {j}")
        arcs[(i, j)] = c
    try:
        return Tournament(n, arcs)
    except Exception as exc:
        raise ValidationError("tournament", str(exc))


def serialize_tournament(T: Tournament) -> str:
    out = [f"trn {T.n} {max(T.num_colors, 1)}"]
    for (i, j) in sorted(T.arcs):
        out.append(f"{i} {j} {T.arcs[(i, j)]}")
    return "\n".join(out) + "\n"


def _parse_cycles(line: str, n: int, lineno: int) -> Permutation:
    rest = _CYCLE_RE.sub("", line).strip()
    if rest:
        raise ParseError(lineno, f"stray text {rest!r} outside cycles")
    cycles = []
    for body in _CYCLE_RE.findall(line):
        pts = _ints(body.split(), lineno)
        if any(p < 0 or p >= n for p in pts):
            raise ParseError(lineno, f"cycle point outside 0..{n - 1}")
        if len(set(pts)) != len(pts):
            raise ParseError(lineno, "repeated point in a cycle")
        cycles.append(pts)
    try:
        return Permutation.from_cycles(n, cycles)
    except ValidationError as exc:
        raise ParseError(lineno, str(exc))


def parse_group(text: str, expect_odd: bool = False) -> PermutationGroup:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "empty group file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "degree":
        raise ParseError(lineno, "header must be 'degree n'")
    (n,) = _ints(parts[1:], lineno)
    gens = []
    for lineno, line in lines[1:]:
        if line.startswith("img"):
            images = _ints(line.split()[1:], lineno)
            if len(images) != n:
                raise ParseError(lineno, f"expected {n} images")
            try:
                gens.append(Permutation(tuple(images)))
            except ValidationError as exc:
                raise ParseError(lineno, str(exc))
        elif line.startswith("("):
            gens.append(_parse_cycles(line, n, lineno))
        else:
            raise ParseError(lineno, f"unrecognized generator line {line!r}")
    return PermutationGroup(n, gens, expect_odd=expect_odd)


def serialize_group(G: PermutationGroup) -> str:
    out = [f"degree {G.degree}", f"# order = {G.order()}"]
    for g in G.generators:
        out.append("img " + " ".join(str(i) for i in g.images))
    return "\n".join(out) + "\n"


def parse_relations(text: str):
    """Seed relation file: 'rels n m' then m blocks 'rel name cnt' + pairs."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "empty relation file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "rels":
        raise ParseError(lineno, "header must be 'rels n m'")
    n, m = _ints(parts[1:], lineno)
    idx = 1
    rels = []
    for _ in range(m):
        if idx >= len(lines):
            raise ParseError(lines[-1][0], "missing relation block")
        lineno, line = lines[idx]
        parts = line.split()
        if len(parts) != 3 or parts[0] != "rel":
            raise ParseError(lineno, "relation header must be 'rel name cnt'")
        name = parts[1]
        cnt = _ints(parts[2:], lineno)[0]
        idx += 1
        pairs = set()
        for _ in range(cnt):
            if idx >= len(lines):
                raise ParseError(lines[-1][0], f"relation {name}: missing pairs")
            lineno, line = lines[idx]
            vals = _ints(line.split(), lineno)
            if len(vals) != 2:
                raise ParseError(lineno, "pair lines are 'i j'")
            if not all(0 <= v < n for v in vals):
                raise ParseError(lineno, f"point outside 0..{n - 1}")
            pairs.add((vals[0], vals[1]))
            idx += 1
        rels.append((name, pairs))
    if idx != len(lines):
        raise ParseError(lines[idx][0], "trailing content after the last relation")
    return n, rels


def serialize_relations(n: int, rels) -> str:
    out = [f"rels {n} {len(rels)}"]
    for name, pairs in rels:
        out.append(f"rel {name} {len(pairs)}")
        for i, j in sorted(pairs):
            out.append(f"{i} {j}")
    return "\n".join(out) + "\n"


def parse_point_sets(text: str) -> list:
    """Families of point sets: one set per line, whitespace separated."""
    out = []
    for lineno, line in _content_lines(text):
        out.append(tuple(sorted(set(_ints(line.split(), lineno)))))
    return out


_PARSERS = {
    "ccfg": parse_config,
    "trn": parse_tournament,
    "grp": parse_group,
    "rels": parse_relations,
}


def parse_and_validate(path, kind: str):
    """Parse a file of the given kind; every type invariant checked on parse."""
    if kind not in _PARSERS:
        raise ValidationError("kind", f"unknown kind {kind!r}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return _PARSERS[kind](text)
