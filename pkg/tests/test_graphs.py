import itertools
import random
from fractions import Fraction
from math import comb

import pytest

from genset import (
    CapExceeded,
    GensetError,
    Graph,
    canonical_generator,
    clique_density,
    count_cliques,
    dense_subset_fraction,
    disjointness_graph,
    erdos_max_check,
    find_blowup,
    format_graph,
    graph_from_edges,
    make_family,
    parse_graph,
    turan_blowup_graph,
    turan_clique_closed_form,
    turan_eta,
)


def triple_loop_triangles(masks):
    """Independent oracle: disjoint triples by direct triple loop."""
    total = 0
    m = len(masks)
    for i in range(m):
        for j in range(i + 1, m):
            if masks[i] & masks[j]:
                continue
            for l in range(j + 1, m):
                if masks[i] & masks[l] == 0 and masks[j] & masks[l] == 0:
                    total += 1
    return total


def kneser_edge_closed_form(q):
    """Edges of the disjointness graph of the canonical 2-class generator on 2q elements."""
    return (3**q - 2 ** (q + 1) + 1) + (2**q - 1) ** 2


def random_graph(m, p, seed):
    rng = random.Random(seed)
    edges = [(u, v) for u in range(m) for v in range(u + 1, m) if rng.random() < p]
    return graph_from_edges(m, edges)


class TestDisjointnessGraph:
    def test_nonempty_subsets_of_2(self):
        g = disjointness_graph(make_family(2, [0b01, 0b10, 0b11]))
        assert g.edge_count() == 1
        assert g.has_edge(0, 1)

    def test_empty_set_is_adjacent_to_everything(self):
        g = disjointness_graph(make_family(3, [0, 0b101]))
        assert g.has_edge(0, 1)

    def test_vertex_order_is_family_order(self):
        fam = canonical_generator(4, 2)
        g = disjointness_graph(fam)
        assert g.labels == fam.members

    @pytest.mark.parametrize("q", range(1, 9))
    def test_edge_count_closed_form(self, q):
        g = disjointness_graph(canonical_generator(2 * q, 2))
        assert g.edge_count() == kneser_edge_closed_form(q)

    def test_vertex_cap(self):
        with pytest.raises(CapExceeded):
            disjointness_graph(canonical_generator(4, 2), graph_cap=3)


class TestCountCliques:
    def test_turan_graph_edges(self):
        assert count_cliques(turan_blowup_graph(3, 2), 2) == 12

    def test_turan_graph_triangles(self):
        assert count_cliques(turan_blowup_graph(3, 2), 3) == 8

    def test_single_vertex_count(self):
        g = random_graph(9, 0.5, seed=1)
        assert count_cliques(g, 1) == 9

    def test_canonical_12_3_triangles_vs_triple_loop(self):
        fam = canonical_generator(12, 3)
        g = disjointness_graph(fam)
        assert count_cliques(g, 3) == triple_loop_triangles(fam.members) == 5655

    @pytest.mark.parametrize("seed", range(4))
    def test_random_graphs_vs_enumeration(self, seed):
        g = random_graph(10, 0.6, seed=seed)
        for r in range(2, 6):
            expected = sum(
                1
                for combo in itertools.combinations(range(10), r)
                if all(g.has_edge(u, v) for u, v in itertools.combinations(combo, 2))
            )
            assert count_cliques(g, r) == expected

    def test_closed_form_grid(self):
        for s in range(1, 6):
            for T in range(1, 7):
                g = turan_blowup_graph(s, T)
                for r in range(1, s + 1):
                    assert count_cliques(g, r) == turan_clique_closed_form(s, T, r)


class TestCliqueDensity:
    def test_complete_graph(self):
        k5 = graph_from_edges(5, itertools.combinations(range(5), 2))
        assert clique_density(k5, 3) == 1

    def test_edgeless_graph(self):
        assert clique_density(Graph((0, 0, 0)), 2) == 0

    def test_kneser_density_value(self):
        g = disjointness_graph(canonical_generator(10, 2))
        assert clique_density(g, 2) == Fraction(g.edge_count(), comb(g.m, 2))

    def test_too_few_vertices(self):
        with pytest.raises(GensetError):
            clique_density(Graph((0,)), 2)


class TestTuranEta:
    def test_values(self):
        assert turan_eta(2, 2) == Fraction(1, 2)
        assert turan_eta(3, 3) == Fraction(2, 9)
        for s in range(1, 8):
            assert turan_eta(1, s) == 1

    def test_r_above_s_rejected(self):
        with pytest.raises(GensetError):
            turan_eta(3, 2)

    def test_blowup_density_approaches_eta(self):
        for s in range(1, 5):
            for r in range(1, s + 1):
                exact = Fraction(turan_clique_closed_form(s, 50, r), comb(50 * s, r))
                assert abs(exact - turan_eta(r, s)) < Fraction(2, 100)


class TestTuranBlowupGraph:
    def test_two_parts_of_one(self):
        g = turan_blowup_graph(2, 1)
        assert g.m == 2 and g.edge_count() == 1

    def test_3_2(self):
        g = turan_blowup_graph(3, 2)
        assert g.m == 6 and g.edge_count() == 12

    def test_edge_count_closed_form(self):
        for s in range(1, 6):
            for T in range(1, 5):
                assert turan_blowup_graph(s, T).edge_count() == comb(s, 2) * T**2


class TestFindBlowup:
    def test_turan_graph_is_its_own_blowup(self):
        classes = find_blowup(turan_blowup_graph(3, 2), 3, 2)
        assert classes is not None
        assert sorted(itertools.chain.from_iterable(classes)) == list(range(6))

    def test_five_cycle_has_no_2_2_blowup(self):
        c5 = graph_from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
        assert find_blowup(c5, 2, 2) is None

    def test_a2_t1_is_an_edge(self):
        c5 = graph_from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
        assert find_blowup(c5, 2, 1) is not None
        assert find_blowup(Graph((0, 0, 0)), 2, 1) is None

    def test_cross_edges_verified_independently(self):
        g = random_graph(12, 0.8, seed=7)
        classes = find_blowup(g, 3, 2)
        if classes is not None:
            for ca, cb in itertools.combinations(classes, 2):
                for u in ca:
                    for v in cb:
                        assert g.has_edge(u, v)

    def test_intra_class_edges_are_ignored(self):
        # K4 contains a 2+2 blow-up even though each class is internally joined.
        k4 = graph_from_edges(4, itertools.combinations(range(4), 2))
        assert find_blowup(k4, 2, 2) is not None

    def test_vertex_cap(self):
        with pytest.raises(CapExceeded):
            find_blowup(turan_blowup_graph(3, 2), 2, 2, vertex_cap=5)


class TestErdosMaxCheck:
    def test_mantel_on_5(self):
        rep = erdos_max_check(5, 2, 2)
        assert rep.max_count == 6 == 5**2 // 4
        assert rep.attained_by_turan

    def test_mantel_on_6(self):
        rep = erdos_max_check(6, 2, 2)
        assert rep.max_count == 9
        assert rep.attained_by_turan

    def test_k4_free_triangles_on_4(self):
        rep = erdos_max_check(4, 3, 3)
        assert rep.max_count == rep.turan_count
        assert rep.attained_by_turan

    def test_max_graph_is_forbidden_free_and_attains_max(self):
        rep = erdos_max_check(5, 2, 2)
        assert count_cliques(rep.max_graph, 3) == 0
        assert rep.max_graph.edge_count() == rep.max_count

    def test_l_cap(self):
        with pytest.raises(CapExceeded):
            erdos_max_check(8, 2, 2)


class TestDenseSubsetFraction:
    def test_complete_graph_fraction_one(self):
        k6 = graph_from_edges(6, itertools.combinations(range(6), 2))
        res = dense_subset_fraction(k6, 4, 2, Fraction(1))
        assert res.exact and res.fraction == 1

    def test_edgeless_graph_fraction_zero(self):
        g = Graph((0,) * 6)
        res = dense_subset_fraction(g, 4, 2, Fraction(1, 100))
        assert res.exact and res.fraction == 0

    def test_exact_mode_counts_match_direct_enumeration(self):
        g = random_graph(9, 0.6, seed=3)
        threshold = Fraction(1, 2)
        res = dense_subset_fraction(g, 5, 2, threshold)
        direct = 0
        for combo in itertools.combinations(range(9), 5):
            edges = sum(
                1 for u, v in itertools.combinations(combo, 2) if g.has_edge(u, v)
            )
            if Fraction(edges, comb(5, 2)) >= threshold:
                direct += 1
        assert res.dense_count == direct

    @pytest.mark.parametrize("seed", range(5))
    def test_double_counting_inequality(self, seed):
        # A graph with r-clique density eta + eps must have at least
        # (eps/2) C(m, l) dense l-subsets at threshold eta + eps/2.
        r = s = 2
        g = random_graph(12, 0.75, seed=seed)
        density = clique_density(g, r)
        eta = turan_eta(r, s)
        if density <= eta:
            pytest.skip("sampled graph not dense enough for the hypothesis")
        eps = density - eta
        res = dense_subset_fraction(g, 6, r, eta + eps / 2)
        assert res.fraction >= eps / 2

    def test_sampling_reproducible(self):
        g = random_graph(12, 0.5, seed=11)
        a = dense_subset_fraction(g, 5, 2, Fraction(1, 2), sample=500, seed=99)
        b = dense_subset_fraction(g, 5, 2, Fraction(1, 2), sample=500, seed=99)
        assert a.fraction == b.fraction and not a.exact

    def test_sampling_requires_seed(self):
        g = random_graph(8, 0.5, seed=0)
        with pytest.raises(GensetError):
            dense_subset_fraction(g, 4, 2, Fraction(1, 2), sample=10)

    def test_exact_budget(self):
        g = random_graph(14, 0.5, seed=0)
        with pytest.raises(CapExceeded):
            dense_subset_fraction(g, 7, 2, Fraction(1, 2), budget=100)


class TestGraphFileFormat:
    def test_round_trip(self):
        g = random_graph(7, 0.4, seed=5)
        assert parse_graph(format_graph(g)) == g

    def test_bad_header(self):
        from genset import FamilyFormatError

        with pytest.raises(FamilyFormatError):
            parse_graph("0 1\n")

    def test_bad_edge(self):
        from genset import FamilyFormatError

        with pytest.raises(FamilyFormatError):
            parse_graph("vertices=2\n0 5\n")
