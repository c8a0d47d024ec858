"""Tests for app.services.trees (canonical rooted trees and enumeration)."""

from collections import Counter
from fractions import Fraction

import pytest

from app.errors import TreeError
from app.services.trees.enumeration import enumerate_trees
from app.services.trees.rooted_tree import (
    LEAF,
    RootedTree,
    canonical_code,
    e_coefficient,
    merge,
    multiplicity_profile,
    parse_code,
    path,
    plant,
    remove_child,
    star,
)


class TestCanonicalCode:
    def test_leaf(self):
        assert canonical_code(LEAF) == "()"

    def test_single_child(self):
        assert canonical_code(plant(LEAF)) == "(())"

    def test_child_order_does_not_matter(self):
        a = RootedTree((LEAF, path(2)))
        b = RootedTree((path(2), LEAF))
        assert canonical_code(a) == canonical_code(b) == "((())())"
        assert a == b
        assert hash(a) == hash(b)

    def test_plant_wraps_code(self):
        tree = star(3)
        assert canonical_code(plant(tree)) == "(" + canonical_code(tree) + ")"

    @pytest.mark.parametrize("code", ["()", "(())", "((())())", "(()()())"])
    def test_parse_inverts_code(self, code):
        assert parse_code(code).code == code

    def test_parse_canonicalizes(self):
        assert parse_code("(()(()))").code == "((())())"

    @pytest.mark.parametrize("code", ["", "(", "())", "()()", "(x)"])
    def test_parse_rejects_malformed(self, code):
        with pytest.raises(TreeError):
            parse_code(code)


class TestOperations:
    def test_plant_leaf(self):
        tree = plant(LEAF)
        assert tree.vertices == 2
        assert tree.height == 1

    def test_merge_two_planted_leaves(self):
        tree = merge([plant(LEAF), plant(LEAF)])
        assert tree == star(2)
        assert tree.vertices == 3

    def test_merge_single_tree(self):
        assert merge([star(3)]) == star(3)

    def test_merge_vertex_count(self):
        trees = [star(2), path(3), plant(star(1))]
        merged = merge(trees)
        assert merged.vertices == sum(t.vertices for t in trees) - len(trees) + 1
        assert merged.height == max(t.height for t in trees)

    def test_merge_empty(self):
        with pytest.raises(TreeError):
            merge([])

    def test_path_rejects_zero_vertices(self):
        with pytest.raises(TreeError):
            path(0)

    def test_multiplicity_profile(self):
        tree = RootedTree((LEAF, LEAF, path(2)))
        profile = multiplicity_profile(tree)
        assert profile.entries == ((path(2), 1), (LEAF, 2))
        assert profile.root_degree == 3

    def test_remove_child(self):
        assert remove_child(star(3), LEAF) == star(2)


class TestECoefficient:
    def test_star(self):
        assert e_coefficient(star(3)) == Fraction(1, 6)

    def test_multiplicities_one_three_three(self):
        tree = RootedTree((LEAF,) + (path(2),) * 3 + (path(3),) * 3)
        assert e_coefficient(tree) == Fraction(1, 36)

    def test_leaf(self):
        assert e_coefficient(LEAF) == 1

    @pytest.mark.parametrize("copies", [1, 2, 4])
    def test_copies_of_planted_tree(self, copies):
        assert e_coefficient(merge([plant(star(1))] * copies)) == Fraction(1, [1, 1, 2, 6, 24][copies])


class TestEnumeration:
    def test_height_zero(self):
        assert enumerate_trees(0, 5) == [LEAF]

    def test_height_two_four_vertices(self):
        assert len(enumerate_trees(2, 4)) == 7

    def test_rooted_tree_counts(self):
        trees = enumerate_trees(5, 6)
        assert len(trees) == 37
        assert Counter(tree.vertices for tree in trees) == {1: 1, 2: 1, 3: 2, 4: 4, 5: 9, 6: 20}

    def test_order_and_uniqueness(self):
        trees = enumerate_trees(3, 6)
        keys = [(t.vertices, t.code) for t in trees]
        assert keys == sorted(keys)
        assert len(set(t.code for t in trees)) == len(trees)
        assert all(t.height <= 3 and t.vertices <= 6 for t in trees)

    def test_rejects_bad_bounds(self):
        with pytest.raises(TreeError):
            enumerate_trees(-1, 3)
