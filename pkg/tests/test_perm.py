import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cohcfg.config import build_config
from cohcfg.errors import DomainNotInvariant, GroupTooLarge, ValidationError
from cohcfg.perm import (
    Permutation,
    PermutationGroup,
    color_aut_backtrack,
    fix_stats,
    orbits,
    pair_orbits,
    setwise_stabilizer,
)

from _naive import naive_group_closure


def frobenius21():
    add1 = Permutation(tuple((x + 1) % 7 for x in range(7)))
    mul2 = Permutation(tuple((2 * x) % 7 for x in range(7)))
    return PermutationGroup(7, [add1, mul2])


class TestPermutation:
    def test_identity_and_inverse(self):
        p = Permutation((1, 2, 0, 4, 3))
        assert (p * p.inverse()).is_identity()
        assert p.inverse()(1) == 0

    def test_composition_order(self):
        # (p * q) applies p first
        p = Permutation((1, 0, 2))
        q = Permutation((0, 2, 1))
        assert (p * q).images == (2, 0, 1)

    def test_rejects_non_bijection(self):
        with pytest.raises(ValidationError):
            Permutation((0, 0, 1))

    def test_cycles_roundtrip(self):
        p = Permutation.from_cycles(6, [(0, 1, 2), (3, 4)])
        assert p.images == (1, 2, 0, 4, 3, 5)
        assert p.cycles() == [[0, 1, 2], [3, 4]]

    @given(st.permutations(list(range(6))), st.permutations(list(range(6))))
    def test_associativity_sampled(self, a, b):
        p, q = Permutation(tuple(a)), Permutation(tuple(b))
        assert ((p * q) * p.inverse()).images == (p * (q * p.inverse())).images


class TestOrderAndMembership:
    def test_cyclic(self):
        assert PermutationGroup.cyclic(3).order() == 3

    def test_frobenius21(self):
        G = frobenius21()
        assert G.order() == 21
        assert Permutation(tuple((3 * x) % 7 for x in range(7))) not in G
        assert Permutation(tuple((2 * x + 5) % 7 for x in range(7))) in G

    def test_symmetric(self):
        assert PermutationGroup.symmetric(6).order() == 720

    @pytest.mark.parametrize("seed", range(12))
    def test_order_matches_exhaustive_closure(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 8)
        gens = [Permutation(tuple(rng.sample(range(n), n))) for _ in range(rng.randint(1, 3))]
        G = PermutationGroup(n, gens)
        want = naive_group_closure([g.images for g in gens])
        assert G.order() == len(want)
        assert {g.images for g in G.elements()} == want

    def test_expect_odd_flag(self):
        with pytest.raises(ValidationError):
            PermutationGroup(2, [Permutation((1, 0))], expect_odd=True).order()
        assert PermutationGroup.cyclic(5).is_odd_order()


class TestOrbits:
    def test_single_cycle(self):
        G = PermutationGroup(3, [Permutation((1, 2, 0))])
        assert orbits(G, {0, 1, 2}) == [(0, 1, 2)]

    def test_identity_group(self):
        G = PermutationGroup.trivial(4)
        assert orbits(G) == [(0,), (1,), (2,), (3,)]

    def test_z7_two_generators(self):
        G = PermutationGroup(7, [
            Permutation(tuple((x + 1) % 7 for x in range(7))),
            Permutation(tuple((2 * x) % 7 for x in range(7))),
        ])
        assert orbits(G) == [tuple(range(7))]

    def test_domain_not_invariant(self):
        G = PermutationGroup(4, [Permutation((1, 2, 3, 0))])
        with pytest.raises(DomainNotInvariant):
            orbits(G, {0, 1})


class TestPairOrbits:
    def test_regular_z3(self):
        cm = pair_orbits(PermutationGroup.cyclic(3))
        assert cm.k == 3

    def test_two_transitive(self):
        cm = pair_orbits(PermutationGroup.symmetric(3))
        assert cm.k == 2

    def test_frobenius21_valencies(self):
        X = build_config(pair_orbits(frobenius21()))
        off = sorted(int(X.valency[c]) for c in range(X.rank) if c not in X.diagonal_colors)
        assert off == [3, 3]

    def test_always_coherent(self):
        rng = random.Random(3)
        for _ in range(10):
            n = rng.randint(2, 8)
            gens = [Permutation(tuple(rng.sample(range(n), n))) for _ in range(2)]
            build_config(pair_orbits(PermutationGroup(n, gens)))


class TestSetwiseStabilizer:
    def test_sym3_point(self):
        S = setwise_stabilizer(PermutationGroup.symmetric(3), {0})
        assert S.order() == 2

    def test_frobenius_point(self):
        S = setwise_stabilizer(frobenius21(), {0})
        assert S.order() == 3

    def test_whole_domain(self):
        G = frobenius21()
        assert setwise_stabilizer(G, range(7)).order() == G.order()

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_exhaustive_filter(self, seed):
        rng = random.Random(100 + seed)
        n = rng.randint(2, 7)
        gens = [Permutation(tuple(rng.sample(range(n), n))) for _ in range(2)]
        G = PermutationGroup(n, gens)
        delta = set(rng.sample(range(n), rng.randint(1, n - 1)))
        S = setwise_stabilizer(G, delta)
        want = {
            e for e in naive_group_closure([g.images for g in gens])
            if {e[d] for d in delta} == delta
        }
        want.add(tuple(range(n)))
        assert {g.images for g in S.elements()} == want


class TestColorAutBacktrack:
    def test_complete_config_trivial_group(self):
        import numpy as np
        colors = np.arange(9).reshape(3, 3)
        assert color_aut_backtrack(build_config(colors)).order() == 1

    def test_paley7(self):
        X = build_config(pair_orbits(frobenius21()))
        assert color_aut_backtrack(X).order() == 21

    def test_intersection_with_group(self):
        X = build_config(pair_orbits(PermutationGroup.cyclic(3)))
        A = color_aut_backtrack(X, PermutationGroup.symmetric(3))
        assert A.order() == 3

    def test_trivial_config_full_symmetric(self):
        from cohcfg.refine import coherent_closure
        X = coherent_closure([], n=5)
        assert color_aut_backtrack(X).order() == 120

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_exhaustive_search(self, seed):
        rng = random.Random(200 + seed)
        n = rng.randint(2, 6)
        gens = [Permutation(tuple(rng.sample(range(n), n))) for _ in range(2)]
        G = PermutationGroup(n, gens)
        X = build_config(pair_orbits(G))
        A = color_aut_backtrack(X)
        C = X.colors
        want = sum(
            1 for imgs in itertools.permutations(range(n))
            if all(C[imgs[i], imgs[j]] == C[i, j] for i in range(n) for j in range(n))
        )
        assert A.order() == want
        # the 2-closure contains the group
        for g in G.generators:
            assert g in A


class TestFixStats:
    def test_trivial_group(self):
        st = fix_stats(PermutationGroup.trivial(4))
        assert (st.fix_max, st.fix_sum) == (0, 0)

    def test_three_cycle(self):
        st = fix_stats(PermutationGroup.cyclic(3))
        assert (st.fix_max, st.fix_sum) == (0, 0)

    def test_multiplicative_group_mod7(self):
        G = PermutationGroup(7, [Permutation(tuple((2 * x) % 7 for x in range(7)))])
        st = fix_stats(G)
        assert (st.fix_max, st.fix_sum) == (1, 2)

    def test_too_large(self):
        with pytest.raises(GroupTooLarge):
            fix_stats(PermutationGroup.symmetric(8), bound=1000)


class TestGroupCombinators:
    def test_direct_sum_order(self):
        G = PermutationGroup.direct_sum([PermutationGroup.cyclic(3), PermutationGroup.cyclic(5)])
        assert G.degree == 8 and G.order() == 15

    def test_conjugate_preserves_order(self):
        G = frobenius21()
        f = Permutation((3, 1, 4, 0, 6, 2, 5))
        assert G.conjugate(f).order() == 21

    def test_reduced_generators(self):
        G = frobenius21()
        fat = PermutationGroup(7, list(G.elements()))
        thin = fat.reduced()
        assert thin.order() == 21
        assert len(thin.generators) <= 4
