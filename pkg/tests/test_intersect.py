"""Compatibility, the coloring insertion, meets, and product decoration."""

import itertools
import random

import pytest

from m0nbar.errors import DegreeMismatch, EdgeConditionFails, GroundMismatch
from m0nbar.intersect import (
    BLUE,
    EMPTY,
    RED,
    BoundaryProduct,
    apply_coloring,
    color_for_divisor,
    compatible,
    flag_equivalence,
    meet_all,
    meet_divisor,
    product_to_decorated,
    strata_product_to_decorated,
)
from m0nbar.trees import (
    MarkedSet,
    enumerate_stable_trees,
    make_split,
    tree_equal,
    tree_from_splits,
)

G5 = MarkedSet.range(5)
G6 = MarkedSet.range(6)
G9 = MarkedSet.range(9)


def all_divisors(n):
    ground = MarkedSet.range(n)
    out = set()
    for size in range(2, n - 1):
        for side in itertools.combinations(ground.labels, size):
            out.add(make_split(ground, side))
    return sorted(out, key=lambda s: s.block)


class TestCompatible:
    def test_nested_blocks(self):
        assert compatible(make_split(G5, {1, 2}), make_split(G5, {4, 5}))

    def test_crossing_blocks(self):
        assert not compatible(make_split(G5, {1, 2}), make_split(G5, {1, 3}))

    def test_self(self):
        s = make_split(G5, {1, 2})
        assert compatible(s, s)

    def test_ground_mismatch(self):
        with pytest.raises(GroundMismatch):
            compatible(make_split(G5, {1, 2}), make_split(G6, {1, 2}))


class TestColoring:
    def test_nine_point_example(self, nine_point_tree):
        t = nine_point_tree
        d = make_split(G9, {3, 7, 9})
        coloring = color_for_divisor(t, d)
        assert {lab for lab, c in coloring.leaf_colors.items() if c == BLUE} == {3, 7, 9}
        expected_edge_colors = {
            make_split(G9, {2, 6, 8}): RED,
            make_split(G9, {3, 5, 7, 9}): RED,
            make_split(G9, {1, 4}): RED,
            make_split(G9, {3, 9}): BLUE,
        }
        assert coloring.edge_colors == expected_edge_colors
        # the split vertex separates the {3,7,9} side: it carries leaves 5 and 7
        assert coloring.split_vertex == t.leaf_vertex(5) == t.leaf_vertex(7)

    def test_single_vertex_tree(self):
        t = tree_from_splits(G5, ())
        coloring = color_for_divisor(t, make_split(G5, {1, 2}))
        assert coloring.split_vertex == 0
        assert coloring.leaf_colors == {1: RED, 2: RED, 3: BLUE, 4: BLUE, 5: BLUE}

    def test_incompatible_divisor_reports_witness(self):
        t = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        with pytest.raises(EdgeConditionFails) as info:
            color_for_divisor(t, make_split(G5, {1, 3}))
        assert info.value.witness == make_split(G5, {1, 2})

    def test_branches_at_split_vertex_are_monochromatic(self):
        for n in (5, 6):
            for t in enumerate_stable_trees(n):
                for d in all_divisors(n):
                    try:
                        coloring = color_for_divisor(t, d)
                    except EdgeConditionFails:
                        continue
                    v = coloring.split_vertex
                    for e in t.edges_at(v):
                        edges, leaves = t.branch(v, e)
                        colors = {coloring.edge_colors[e]}
                        colors |= {coloring.edge_colors[f] for f in edges}
                        colors |= {coloring.leaf_colors[lab] for lab in leaves}
                        assert len(colors) == 1

    def test_split_vertex_is_path_independent(self):
        # recompute the vertex from every blue/red leaf pair
        for t in enumerate_stable_trees(5):
            for d in all_divisors(5):
                try:
                    coloring = color_for_divisor(t, d)
                except EdgeConditionFails:
                    continue
                for blue_leaf in d.block:
                    for red_leaf in d.complement:
                        vertices, edges = t.leaf_path(blue_leaf, red_leaf)
                        vertex = vertices[-1]
                        for i, e in enumerate(edges):
                            if coloring.edge_colors[e] == RED:
                                vertex = vertices[i]
                                break
                        assert vertex == coloring.split_vertex


class TestMeetDivisor:
    def test_nine_point_insertion(self, nine_point_tree):
        d = make_split(G9, {3, 7, 9})
        result = meet_divisor(nine_point_tree, d)
        expected = tree_from_splits(G9, (*nine_point_tree.splits, d))
        assert tree_equal(result, expected)

    def test_existing_edge_returns_same_stratum(self, nine_point_tree):
        d = make_split(G9, {2, 6, 8})
        assert meet_divisor(nine_point_tree, d) is nine_point_tree

    def test_incompatible_gives_empty(self):
        t = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        assert meet_divisor(t, make_split(G5, {1, 3})) is EMPTY

    def test_agrees_with_coloring_construction(self):
        for n in (5, 6):
            for t in enumerate_stable_trees(n):
                for d in all_divisors(n):
                    met = meet_divisor(t, d)
                    try:
                        coloring = color_for_divisor(t, d)
                    except EdgeConditionFails:
                        assert met is EMPTY
                        continue
                    assert met is not EMPTY
                    assert tree_equal(apply_coloring(coloring), met)


class TestMeetAll:
    def test_single(self, nine_point_tree):
        assert tree_equal(meet_all([nine_point_tree]), nine_point_tree)

    def test_caterpillar(self):
        t1 = tree_from_splits(G6, (make_split(G6, {1, 2}),))
        t2 = tree_from_splits(G6, (make_split(G6, {5, 6}),))
        met = meet_all([t1, t2])
        assert met.splits == {make_split(G6, {1, 2}), make_split(G6, {5, 6})}

    def test_incompatible(self):
        t1 = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        t2 = tree_from_splits(G5, (make_split(G5, {1, 3}),))
        assert meet_all([t1, t2]) is EMPTY

    def test_idempotent(self, nine_point_tree):
        assert tree_equal(meet_all([nine_point_tree, nine_point_tree]), nine_point_tree)

    def test_order_independent_on_random_shuffles(self):
        rng = random.Random(7)
        trees = [t for t in enumerate_stable_trees(6) if t.codim >= 1]
        for _ in range(60):
            sample = rng.sample(trees, rng.randint(2, 4))
            met = meet_all(sample)
            for _ in range(3):
                shuffled = sample[:]
                rng.shuffle(shuffled)
                other = meet_all(shuffled)
                if met is EMPTY:
                    assert other is EMPTY
                else:
                    assert tree_equal(met, other)


class TestFlagEquivalence:
    def test_reflexive(self, nine_point_tree):
        assert flag_equivalence(nine_point_tree, nine_point_tree)

    def test_disjoint_divisors(self):
        t1 = tree_from_splits(G6, (make_split(G6, {1, 2}),))
        t2 = tree_from_splits(G6, (make_split(G6, {5, 6}),))
        assert flag_equivalence(t1, t2)

    def test_crossing_divisors(self):
        t1 = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        t2 = tree_from_splits(G5, (make_split(G5, {1, 3}),))
        assert not flag_equivalence(t1, t2)

    def test_matches_meet_all_exhaustively(self):
        for n in (5, 6):
            trees = list(enumerate_stable_trees(n))
            for t1, t2 in itertools.combinations_with_replacement(trees, 2):
                assert flag_equivalence(t1, t2) == (meet_all([t1, t2]) is not EMPTY)

    def test_matches_meet_all_on_sampled_seven_point_pairs(self):
        trees = [t for t in enumerate_stable_trees(7) if t.codim >= 1]
        rng = random.Random(0)
        for _ in range(100_000):
            t1 = trees[rng.randrange(len(trees))]
            t2 = trees[rng.randrange(len(trees))]
            assert flag_equivalence(t1, t2) == (meet_all([t1, t2]) is not EMPTY)

    def test_matches_common_coarsening_search(self):
        # independent witness: an enumerated tree refining both split systems
        trees = list(enumerate_stable_trees(5))
        for t1, t2 in itertools.combinations_with_replacement(trees, 2):
            union = t1.splits | t2.splits
            witnessed = any(union <= t.splits for t in trees)
            assert flag_equivalence(t1, t2) == witnessed


class TestProductToDecorated:
    def test_fifteen_point_decoration(self, example_product):
        decorated = product_to_decorated(example_product)
        tree = decorated.tree
        assert sorted(decorated.vertex_dim(v) for v in tree.vertices) == [0, 0, 1, 1, 2, 3]
        g15 = example_product.ground
        weight_by_side = {
            frozenset({1, 2}): 1,
            frozenset({3, 4, 5}): 2,
            frozenset({1, 2, 3, 4, 5, 6, 7, 8}): 3,
            frozenset({11, 12}): 0,
            frozenset({13, 14, 15}): 1,
        }
        for side, expected in weight_by_side.items():
            assert decorated.edge_weight[make_split(g15, side)] == expected
        # the dimension-balance identity comes out automatically
        assert decorated.weight_total == tree.dim == 7

    def test_pure_psi_product(self):
        product = BoundaryProduct(G6, {}, {1: 1, 2: 1, 3: 1})
        decorated = product_to_decorated(product)
        assert decorated.tree.num_vertices == 1
        assert decorated.psi_weight == {1: 1, 2: 1, 3: 1}

    def test_incompatible_support_is_empty(self):
        product = BoundaryProduct(
            G5, {make_split(G5, {1, 2}): 1, make_split(G5, {1, 3}): 1}, {}
        )
        assert product_to_decorated(product) is EMPTY

    def test_degree_enforcement(self):
        product = BoundaryProduct(G5, {make_split(G5, {1, 2}): 1}, {})
        with pytest.raises(DegreeMismatch):
            product_to_decorated(product)

    def test_exponents_must_be_positive(self):
        with pytest.raises(ValueError):
            BoundaryProduct(G5, {make_split(G5, {1, 2}): 0}, {})
        with pytest.raises(ValueError):
            BoundaryProduct(G5, {}, {1: 0})


class TestStrataProduct:
    def test_self_intersection(self):
        t = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        decorated = strata_product_to_decorated([t, t])
        assert tree_equal(decorated.tree, t)
        assert decorated.edge_weight[make_split(G5, {1, 2})] == 1

    def test_matches_divisor_power_decoration(self, example_product):
        # the same product expressed as twelve codim-1 strata
        g15 = example_product.ground
        factors = []
        for split, power in example_product.divisor_powers.items():
            factors += [tree_from_splits(g15, (split,))] * power
        via_strata = strata_product_to_decorated(factors)
        via_powers = product_to_decorated(example_product)
        assert tree_equal(via_strata.tree, via_powers.tree)
        assert via_strata.edge_weight == via_powers.edge_weight

    def test_empty_propagates(self):
        t1 = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        t2 = tree_from_splits(G5, (make_split(G5, {1, 3}),))
        assert strata_product_to_decorated([t1, t2]) is EMPTY

    def test_codimension_budget(self):
        t = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        with pytest.raises(DegreeMismatch):
            strata_product_to_decorated([t])
