"""Splits, tree reconstruction, canonical equality, and enumeration."""

import itertools
import math

import pytest

from m0nbar.errors import (
    GroundMismatch,
    IncompatibleSplits,
    LabelOutOfRange,
    NotInternalEdge,
    TooLarge,
    UnstableSplit,
)
from m0nbar.intersect import compatible
from m0nbar.trees import (
    MarkedSet,
    Split,
    enumerate_stable_trees,
    make_split,
    ordered_splits,
    split_of_edge,
    tree_equal,
    tree_from_splits,
)

G4 = MarkedSet.range(4)
G5 = MarkedSet.range(5)


def all_splits(ground):
    n = ground.n
    out = []
    for size in range(2, n - 1):
        for side in itertools.combinations(ground.labels, size):
            out.append(make_split(ground, side))
    return sorted(set(out), key=lambda s: s.block)


class TestSplit:
    def test_canonical_side_excludes_smallest_label(self):
        assert make_split(G5, {1, 2}).block == (3, 4, 5)
        assert make_split(G5, {3, 4, 5}).block == (3, 4, 5)

    def test_two_spellings_compare_equal(self):
        assert make_split(G5, {1, 2}) == make_split(G5, {3, 4, 5})

    def test_singleton_side_is_unstable(self):
        with pytest.raises(UnstableSplit):
            make_split(G4, {1})
        with pytest.raises(UnstableSplit):
            make_split(G5, {2, 3, 4, 5})

    def test_labels_must_belong_to_ground(self):
        with pytest.raises(LabelOutOfRange):
            make_split(G5, {4, 9})

    def test_direct_construction_must_be_canonical(self):
        with pytest.raises(ValueError):
            Split(G5, G5.mask_of({1, 2}))

    def test_text_form_shows_block_then_complement(self):
        assert str(make_split(G5, {1, 2})) == "3,4,5|1,2"

    def test_canonicalization_is_idempotent(self):
        ground = MarkedSet.range(6)
        for s in all_splits(ground):
            assert make_split(ground, s.block) == s


class TestMarkedSet:
    def test_labels_are_sorted_and_distinct(self):
        assert MarkedSet((3, 1, 2)).labels == (1, 2, 3)
        with pytest.raises(ValueError):
            MarkedSet((1, 1, 2))

    def test_needs_three_labels(self):
        with pytest.raises(ValueError):
            MarkedSet((1, 2))

    def test_mask_round_trip(self):
        mask = G5.mask_of((2, 4))
        assert G5.labels_of(mask) == (2, 4)


class TestReconstruction:
    def test_nine_point_fixture_shape(self, nine_point_tree):
        t = nine_point_tree
        assert t.num_vertices == 5
        assert t.codim == 4
        assert t.dim == 2
        assert sorted(t.degree(v) for v in t.vertices) == [3, 3, 3, 4, 4]
        assert t.leaves_at(0) == (1, 4)

    def test_no_splits_gives_one_big_vertex(self):
        t = tree_from_splits(G5, ())
        assert t.num_vertices == 1
        assert t.degree(0) == 5
        assert t.dim == 2

    def test_incompatible_pair_is_rejected(self):
        with pytest.raises(IncompatibleSplits):
            tree_from_splits(G5, (make_split(G5, {1, 2}), make_split(G5, {1, 3})))

    def test_ground_mismatch(self):
        with pytest.raises(GroundMismatch):
            tree_from_splits(G5, (make_split(G4, {1, 2}),))

    def test_total_on_compatible_pairs_and_only_those(self):
        # reconstruction succeeds exactly when the pair is compatible
        for n in (5, 6):
            ground = MarkedSet.range(n)
            for s, t in itertools.combinations(all_splits(ground), 2):
                if compatible(s, t):
                    tree_from_splits(ground, (s, t))
                else:
                    with pytest.raises(IncompatibleSplits):
                        tree_from_splits(ground, (s, t))

    def test_vertex_numbering_is_deterministic(self, nine_point_tree):
        ground = MarkedSet.range(9)
        again = tree_from_splits(ground, reversed(ordered_splits(nine_point_tree.splits)))
        for v in nine_point_tree.vertices:
            assert nine_point_tree.leaves_at(v) == again.leaves_at(v)
            assert nine_point_tree.edges_at(v) == again.edges_at(v)


class TestSplitOfEdge:
    def test_fixture_edge(self, nine_point_tree):
        e = make_split(nine_point_tree.ground, {2, 6, 8})
        assert split_of_edge(nine_point_tree, e) == e

    def test_single_edge_tree(self):
        e = make_split(G4, {1, 2})
        t = tree_from_splits(G4, (e,))
        assert split_of_edge(t, e) == e

    def test_round_trip_on_every_enumerated_edge(self):
        for n in (5, 6):
            for t in enumerate_stable_trees(n):
                for e in t.splits:
                    assert split_of_edge(t, e) == e

    def test_foreign_split_is_not_an_edge(self, nine_point_tree):
        with pytest.raises(NotInternalEdge):
            split_of_edge(nine_point_tree, make_split(nine_point_tree.ground, {5, 6}))


class TestTreeEqual:
    def test_reflexive_and_order_blind(self):
        splits = (make_split(G5, {1, 2}), make_split(G5, {4, 5}))
        t1 = tree_from_splits(G5, splits)
        t2 = tree_from_splits(G5, tuple(reversed(splits)))
        assert tree_equal(t1, t1)
        assert tree_equal(t1, t2)

    def test_distinct_splits_differ(self):
        t1 = tree_from_splits(G5, (make_split(G5, {1, 2}),))
        t2 = tree_from_splits(G5, (make_split(G5, {4, 5}),))
        assert not tree_equal(t1, t2)

    def test_ground_mismatch(self):
        t1 = tree_from_splits(G4, ())
        t2 = tree_from_splits(G5, ())
        with pytest.raises(GroundMismatch):
            tree_equal(t1, t2)


class TestEnumeration:
    def test_four_points_codim_one(self):
        trees = list(enumerate_stable_trees(4, 1))
        assert len(trees) == 3
        found = {next(iter(t.splits)) for t in trees}
        assert found == {make_split(G4, s) for s in ({1, 2}, {1, 3}, {1, 4})}

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_divisor_count_formula(self, n):
        assert sum(1 for _ in enumerate_stable_trees(n, 1)) == 2 ** (n - 1) - n - 1

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_trivalent_count_is_double_factorial(self, n):
        expected = math.prod(range(2 * n - 5, 0, -2))
        assert sum(1 for _ in enumerate_stable_trees(n, n - 3)) == expected

    def test_five_points_codim_two_count(self):
        assert sum(1 for _ in enumerate_stable_trees(5, 2)) == 15

    def test_each_tree_appears_once(self):
        for n in (4, 5, 6):
            systems = [t.splits for t in enumerate_stable_trees(n)]
            assert len(systems) == len(set(systems))

    def test_dimension_identity(self):
        for n in (4, 5, 6):
            for t in enumerate_stable_trees(n):
                assert t.dim + t.codim == n - 3
                assert t.dim == sum(t.degree(v) - 3 for v in t.vertices)
                assert all(t.degree(v) >= 3 for v in t.vertices)

    def test_guard(self):
        with pytest.raises(TooLarge):
            enumerate_stable_trees(10)
