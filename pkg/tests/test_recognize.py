import itertools
import random

import numpy as np
import pytest

from cohcfg.catalog import (
    drt15_scheme,
    drt15_tournament,
    frobenius21_group,
    paley_scheme,
    paley_tournament,
    z3_wr_z3_group,
)
from cohcfg.config import equivalence_chain, same_partition
from cohcfg.errors import NotAntisymmetric, NotSchurian
from cohcfg.perm import Permutation, PermutationGroup, color_aut_backtrack, pair_orbits
from cohcfg.products import exponentiation, wreath_product
from cohcfg.recognize import (
    SchurityRefusal,
    Tournament,
    build_majorant,
    list_isomorphisms,
    recognize_schurity,
    test_config_group as check_config_group,
    tournament_pipeline,
    wreath_embedding,
)
from cohcfg.refine import AlgebraicIsomorphism, coherent_closure, inv_of_group


@pytest.fixture(scope="module")
def z3():
    return inv_of_group(PermutationGroup.cyclic(3))


@pytest.fixture(scope="module")
def paley7():
    return paley_scheme(7)


@pytest.fixture(scope="module")
def w9(z3):
    return wreath_product(z3, z3)


class TestTournamentType:
    def test_missing_arc_rejected(self):
        from cohcfg.errors import NotATournament
        with pytest.raises(NotATournament):
            Tournament(3, {(0, 1): 0, (1, 2): 0})

    def test_double_arc_rejected(self):
        from cohcfg.errors import NotATournament
        with pytest.raises(NotATournament):
            Tournament(2, {(0, 1): 0, (1, 0): 0})

    def test_color_classes(self):
        T = Tournament(3, {(0, 1): 0, (1, 2): 1, (0, 2): 0})
        assert T.num_colors == 2
        assert T.color_classes()[0] == {(0, 1), (0, 2)}


class TestTestConfigGroup:
    def test_accepts_generating_group(self, z3):
        G = PermutationGroup.cyclic(3)
        assert check_config_group(z3, G) is G

    def test_refuses_too_small_group(self, z3):
        r = check_config_group(z3, PermutationGroup.trivial(3))
        assert isinstance(r, SchurityRefusal) and r.witness is not None

    def test_refuses_too_large_group(self, paley7):
        r = check_config_group(paley7, PermutationGroup.symmetric(7))
        assert isinstance(r, SchurityRefusal)

    def test_accepts_frobenius(self, paley7):
        G = frobenius21_group()
        assert check_config_group(paley7, G) is G


class TestListIsomorphisms:
    def test_z3_automorphisms(self, z3):
        isos = list_isomorphisms(z3, z3, AlgebraicIsomorphism.identity(z3))
        assert len(isos) == 3

    def test_paley7_equals_backtrack(self, paley7):
        isos = list_isomorphisms(paley7, paley7, AlgebraicIsomorphism.identity(paley7))
        A = color_aut_backtrack(paley7)
        assert len(isos) == 21
        assert {g.images for g in A.elements()} == set(isos)

    def test_relabeled_paley(self, paley7):
        rng = random.Random(11)
        pi = Permutation(tuple(rng.sample(range(7), 7)))
        idx = np.fromiter(pi.images, dtype=np.int64)
        relabeled = coherent_closure(paley7.colors[np.ix_(*(np.argsort(idx),) * 2)])
        # match colors by the relabeling to build phi
        from cohcfg.refine import simultaneous_stabilization
        classes1 = [set(map(tuple, np.argwhere(paley7.colors == c))) for c in range(3)]
        classes2 = [set((pi(i), pi(j)) for (i, j) in cl) for cl in classes1]
        phi = simultaneous_stabilization(classes1, classes2, [0, 1, 2])
        isos = list_isomorphisms(phi.source, phi.target, phi)
        assert len(isos) == 21
        auts = {g.images for g in color_aut_backtrack(paley7).elements()}
        assert set(isos) == {tuple(pi(a(i)) for i in range(7)) for a in map(Permutation, auts)}

    def test_complete_config_base_zero(self):
        from cohcfg.refine import fission_points
        X = fission_points(coherent_closure([], n=3), (0, 1))
        isos = list_isomorphisms(X, X, AlgebraicIsomorphism.identity(X))
        assert isos == [(0, 1, 2)]

    def test_composition_coherence(self, z3):
        phi = AlgebraicIsomorphism.identity(z3)
        isos = list_isomorphisms(z3, z3, phi)
        for f in isos:
            for g in isos:
                fg = tuple(g[f[i]] for i in range(3))
                assert fg in isos

    def test_composition_coherence_on_relabeled_triple(self, paley7):
        from cohcfg.refine import simultaneous_stabilization
        rng = random.Random(5)
        pi1 = Permutation(tuple(rng.sample(range(7), 7)))
        pi2 = Permutation(tuple(rng.sample(range(7), 7)))
        classes = [set(map(tuple, np.argwhere(paley7.colors == c))) for c in range(3)]
        cl1 = [set((pi1(i), pi1(j)) for (i, j) in cl) for cl in classes]
        cl2 = [set((pi2(i), pi2(j)) for (i, j) in cl) for cl in classes]
        phi1 = simultaneous_stabilization(classes, cl1, [0, 1, 2])
        phi12 = simultaneous_stabilization(cl1, cl2, [0, 1, 2])
        phi2 = phi1.compose(phi12)
        isos01 = list_isomorphisms(phi1.source, phi1.target, phi1)
        isos12 = list_isomorphisms(phi12.source, phi12.target, phi12)
        isos02 = set(list_isomorphisms(phi2.source, phi2.target, phi2))
        for f in isos01[:5]:
            for g in isos12[:5]:
                assert tuple(g[f[i]] for i in range(7)) in isos02


class TestBuildMajorant:
    def test_wreath_level_one(self, w9):
        chain = equivalence_chain(w9)
        maj = build_majorant(w9, chain[0], chain[1])
        assert maj.group.order() == 3
        assert len(maj.blocks) == 3
        assert len(maj.bijections) == 9

    def test_primitive_single_block(self, paley7):
        chain = equivalence_chain(paley7)
        maj = build_majorant(paley7, chain[0], chain[1])
        assert len(maj.blocks) == 1
        assert maj.group.order() == 21

    def test_refusal_when_block_base_exceeds_bound(self, z3):
        # blocks carrying the trivial configuration on 5 points have base
        # number 4, beyond the schurian bound of 3
        trivial5 = coherent_closure([], n=5)
        W = wreath_product(trivial5, z3)
        chain = equivalence_chain(W)
        blocks = next(e for e in chain if len(e.classes) == 3)
        r = build_majorant(W, chain[0], blocks)
        assert isinstance(r, SchurityRefusal)
        assert "base" in r.reason

    def test_majorant_bounds_induced_action(self, w9):
        # (Aut(X)^Gamma)^{f_Gamma} <= H for each block
        chain = equivalence_chain(w9)
        maj = build_majorant(w9, chain[0], chain[1])
        A = color_aut_backtrack(w9)
        for blk in maj.blocks:
            pts = [p for p in range(9) if maj.point_to_class[p] in blk]
            stab = A.setwise_stabilizer(pts)
            for g in stab.generators:
                induced = {maj.bijections[maj.point_to_class[p]]:
                           maj.bijections[maj.point_to_class[g(p)]] for p in pts}
                img = tuple(induced[i] for i in range(len(induced)))
                assert Permutation(img) in maj.group


class TestWreathEmbedding:
    def test_wreath_order(self, w9):
        chain = equivalence_chain(w9)
        majorants = [build_majorant(w9, chain[i - 1], chain[i]) for i in range(1, len(chain))]
        W, f = wreath_embedding(w9, chain, majorants)
        assert W.order() == 3 ** 4
        assert (f * f.inverse()).is_identity()

    def test_aut_conjugate_inside(self, w9):
        chain = equivalence_chain(w9)
        majorants = [build_majorant(w9, chain[i - 1], chain[i]) for i in range(1, len(chain))]
        W, f = wreath_embedding(w9, chain, majorants)
        A = color_aut_backtrack(w9)
        finv = f.inverse()
        for g in A.generators:
            assert (finv * g * f) in W

    def test_primitive_is_single_level(self, paley7):
        chain = equivalence_chain(paley7)
        majorants = [build_majorant(paley7, chain[0], chain[1])]
        W, f = wreath_embedding(paley7, chain, majorants)
        assert W.order() == 21


class TestRecognizeSchurity:
    def test_needs_antisymmetric(self):
        X = coherent_closure([], n=4)
        with pytest.raises(NotAntisymmetric):
            recognize_schurity(X)

    def test_paley7(self, paley7):
        H = recognize_schurity(paley7)
        assert not isinstance(H, SchurityRefusal)
        assert H.order() == 21
        assert check_config_group(paley7, H) is H

    def test_wreath_scheme(self, w9):
        H = recognize_schurity(w9)
        assert H.order() == 81

    def test_exponentiation_scheme(self, z3):
        E = exponentiation(z3, PermutationGroup.cyclic(3))
        H = recognize_schurity(E)
        assert not isinstance(H, SchurityRefusal)
        assert same_partition(pair_orbits(H).colors, E.colors)

    def test_drt15_refused(self):
        X = drt15_scheme()
        r = recognize_schurity(X)
        assert isinstance(r, SchurityRefusal)

    def test_inhomogeneous_direct_sum(self):
        G = PermutationGroup.direct_sum([PermutationGroup.cyclic(3), PermutationGroup.cyclic(5)])
        X = inv_of_group(G)
        H = recognize_schurity(X)
        assert H.order() == 15

    def test_inhomogeneous_with_nonschurian_fiber(self, paley7):
        from cohcfg.products import glue_disjoint_union
        glued = glue_disjoint_union([paley7, drt15_scheme()])
        r = recognize_schurity(glued)
        assert isinstance(r, SchurityRefusal)

    @pytest.mark.parametrize("group_maker", [
        lambda: PermutationGroup.cyclic(5),
        lambda: PermutationGroup.cyclic(9),
        frobenius21_group,
        z3_wr_z3_group,
    ])
    def test_accepts_catalog_inv(self, group_maker):
        G = group_maker()
        X = inv_of_group(G)
        H = recognize_schurity(X)
        assert not isinstance(H, SchurityRefusal)
        # the result contains G and has the same pair orbits
        for g in G.generators:
            assert g in H
        assert same_partition(pair_orbits(H).colors, X.colors)

    def test_two_closure_on_small_degrees(self):
        # the recognizer returns the 2-closure: the largest group with the
        # given pair orbits, here cross-checked by scanning all of Sym(n)
        groups = (
            PermutationGroup.cyclic(5),
            PermutationGroup(6, [Permutation((1, 2, 0, 4, 5, 3))]),
            frobenius21_group(),
        )
        for G in groups:
            X = inv_of_group(G)
            H = recognize_schurity(X)
            want = {
                imgs for imgs in itertools.permutations(range(G.degree))
                if _preserves(X.colors, imgs)
            }
            assert {g.images for g in H.elements()} == want


def _preserves(C, imgs):
    n = len(imgs)
    return all(C[imgs[i], imgs[j]] == C[i, j] for i in range(n) for j in range(n))


from cohcfg.perm import PermutationGroup  # noqa: E402  (used in an assert above)


class TestTournamentPipeline:
    def test_paley7_single(self):
        rep = tournament_pipeline(paley_tournament(7))
        assert rep.schurian and rep.aut_order == 21

    def test_drt15_single(self):
        rep = tournament_pipeline(drt15_tournament())
        assert not rep.schurian

    def test_relabeled_pair_routes_agree(self):
        T1 = paley_tournament(7)
        rng = random.Random(3)
        T2 = T1.relabel(Permutation(tuple(rng.sample(range(7), 7))))
        rep = tournament_pipeline(T1, T2)
        assert len(rep.isomorphisms) == 21
        assert rep.isomorphisms == rep.gluing_isomorphisms
        for f in rep.isomorphisms:
            for (i, j), c in T1.arcs.items():
                assert T2.arcs[(f[i], f[j])] == c

    def test_reversed_arc_no_isomorphism(self):
        T1 = paley_tournament(7)
        T2 = T1.reverse_arc(0, 1)
        rep = tournament_pipeline(T1, T2)
        assert rep.isomorphisms == () and rep.gluing_isomorphisms == ()

    def test_non_schurian_pair_raises(self):
        T = drt15_tournament()
        with pytest.raises(NotSchurian):
            tournament_pipeline(T, T)

    def test_different_sizes_no_isomorphism(self):
        rep = tournament_pipeline(paley_tournament(7), paley_tournament(11))
        assert rep.isomorphisms == ()

    def test_multicolored_tournament(self):
        # color arcs by their difference class: the closure is the full
        # cyclic scheme, so only the rotations survive
        arcs = {}
        for i in range(7):
            for k, d in enumerate((1, 2, 4)):
                arcs[(i, (i + d) % 7)] = k
        T = Tournament(7, arcs)
        rep = tournament_pipeline(T)
        assert rep.schurian and rep.aut_order == 7
        rng = random.Random(8)
        T2 = T.relabel(Permutation(tuple(rng.sample(range(7), 7))))
        rep2 = tournament_pipeline(T, T2)
        assert len(rep2.isomorphisms) == 7
        assert rep2.isomorphisms == rep2.gluing_isomorphisms
        for f in rep2.isomorphisms:
            for (i, j), c in T.arcs.items():
                assert T2.arcs[(f[i], f[j])] == c
