"""Independent reference implementations used as test oracles.

Pure-Python, dictionary-based, sharing no code with the library: refinement
by explicit signature multisets, exhaustive group closure, and partition
comparison helpers.
"""

from collections import Counter


def naive_closure_partition(n, relations, individualized=()):
    """Partition of the pair set from a naive fixpoint stabilizer.

    relations: iterable of pair collections; individualized: point sets each
    adjoined as a reflexive relation.  Returns a frozenset of frozensets.
    """
    rels = [set(map(tuple, r)) for r in relations]
    sets = [frozenset(s) for s in individualized]
    color = {}
    for i in range(n):
        for j in range(n):
            color[(i, j)] = (
                i == j,
                tuple((i, j) in r for r in rels),
                tuple((j, i) in r for r in rels),
                tuple(i == j and i in s for s in sets),
            )
    while True:
        sig = {}
        for i in range(n):
            for j in range(n):
                around = Counter((color[(i, t)], color[(t, j)]) for t in range(n))
                sig[(i, j)] = (color[(i, j)], tuple(sorted(around.items(), key=repr)))
        relabel = {}
        for key in sorted(set(sig.values()), key=repr):
            relabel[key] = len(relabel)
        new = {p: relabel[sig[p]] for p in sig}
        if len(set(new.values())) == len(set(color.values())):
            break
        color = new
    return partition_of_color_map(color, n)


def partition_of_color_map(color, n):
    part = {}
    for i in range(n):
        for j in range(n):
            part.setdefault(color[(i, j)], set()).add((i, j))
    return frozenset(frozenset(s) for s in part.values())


def partition_of_matrix(C):
    n = len(C)
    part = {}
    for i in range(n):
        for j in range(n):
            part.setdefault(int(C[i][j]), set()).add((i, j))
    return frozenset(frozenset(s) for s in part.values())


def config_partition(X):
    return partition_of_matrix(X.colors)


def naive_group_closure(generators):
    """All elements generated by composition, as image tuples."""
    gens = [tuple(g) for g in generators]
    if not gens:
        return set()
    els = set(gens)
    frontier = list(els)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = tuple(g[x] for x in a)
                if c not in els:
                    els.add(c)
                    new.append(c)
        frontier = new
    return els


def random_colored_tournament(rng, n, num_colors):
    rels = [set() for _ in range(num_colors)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = (i, j) if rng.random() < 0.5 else (j, i)
            rels[rng.randrange(num_colors)].add((a, b))
    return [r for r in rels if r]
