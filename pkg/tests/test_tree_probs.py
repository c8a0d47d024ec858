"""Tests for app.services.probabilities (tree laws, tabulated balls, separation)."""

import math
import random

import pytest

from app.errors import KernelError, TreeError
from app.services.kernels.operations import degree, split_type
from app.services.kernels.step_kernel import constant_kernel, uniform_kernel
from app.services.probabilities.balls import u_ball_distribution, x_ball_distribution, x_ball_distribution_at
from app.services.probabilities.separation import separating_tree_search
from app.services.probabilities.tree_probs import XTreeLaw, u_tree_prob, x_tree_prob, x_tree_prob_at
from app.services.trees.enumeration import enumerate_trees
from app.services.refinement.color_refinement import refine
from app.services.trees.rooted_tree import LEAF, e_coefficient, merge, path, plant, star


class TestXTreeProb:
    @pytest.mark.parametrize("d", [1, 2, 5])
    def test_leaf_on_constant_kernel(self, d):
        assert x_tree_prob(constant_kernel(d), LEAF, 1) == pytest.approx(math.exp(-d), abs=1e-12)

    @pytest.mark.parametrize("leaves", [0, 1, 2, 4])
    def test_star_is_poisson_pmf(self, leaves):
        expected = math.exp(-2) * 2**leaves / math.factorial(leaves)
        assert x_tree_prob(constant_kernel(2), star(leaves), 1) == pytest.approx(expected, abs=1e-12)

    def test_leaf_at_type(self, two_one):
        assert x_tree_prob_at(two_one, 0, LEAF, 1) == pytest.approx(0.223130, abs=1e-6)

    def test_leaf_averaged_over_types(self, two_one):
        expected = (math.exp(-1.5) + math.exp(-0.5)) / 2
        assert x_tree_prob(two_one, LEAF, 1) == pytest.approx(expected, abs=1e-9)

    def test_depth_zero_is_certain(self, two_one):
        assert x_tree_prob(two_one, LEAF, 0) == pytest.approx(1.0)

    def test_path_depth_two(self):
        # One child, which has no children: e^-1 * (1 * e^-1).
        assert x_tree_prob(constant_kernel(1), path(2), 2) == pytest.approx(math.exp(-2), abs=1e-12)

    def test_zero_kernel(self):
        kernel = constant_kernel(0)
        assert x_tree_prob(kernel, LEAF, 3) == pytest.approx(1.0)
        assert x_tree_prob(kernel, star(1), 3) == 0.0

    def test_tree_higher_than_depth(self, one):
        with pytest.raises(TreeError, match="height"):
            x_tree_prob(one, path(3), 1)

    def test_type_out_of_range(self, two_one):
        with pytest.raises(KernelError):
            x_tree_prob_at(two_one, 2, LEAF, 1)

    def test_fractionally_isomorphic_regular_pair(self, bipartite_two):
        constant = constant_kernel(2)
        for depth in range(1, 4):
            for tree in enumerate_trees(depth, 8):
                assert x_tree_prob(constant, tree, depth) == pytest.approx(
                    x_tree_prob(bipartite_two, tree, depth), abs=1e-12
                )

    def test_asymmetric_kernel(self):
        kernel = uniform_kernel([[0, 2], [0, 0]], symmetric=False)
        # Type 0 has Poisson(1) children, type 1 none.
        assert x_tree_prob_at(kernel, 0, star(1), 1) == pytest.approx(math.exp(-1), abs=1e-12)
        assert x_tree_prob_at(kernel, 1, LEAF, 1) == pytest.approx(1.0)


class TestMergedTrees:
    @pytest.mark.parametrize(
        "first, second",
        [
            (star(1), star(2)),
            (plant(star(1)), star(1)),
            (plant(star(2)), plant(star(1))),
            (path(3), path(3)),
            (merge([path(3), star(1)]), plant(LEAF)),
        ],
    )
    def test_probability_is_multiplicative_up_to_e_coefficients(self, two_one, first, second):
        joined = merge([first, second])
        ratio = float(e_coefficient(joined) / (e_coefficient(first) * e_coefficient(second)))
        for i in range(two_one.n):
            lhs = x_tree_prob_at(two_one, i, joined, 2) * math.exp(-float(degree(two_one, i)))
            rhs = ratio * x_tree_prob_at(two_one, i, first, 2) * x_tree_prob_at(two_one, i, second, 2)
            assert lhs == pytest.approx(rhs, abs=1e-12)


class TestStableColors:
    @pytest.mark.parametrize(
        "kernel",
        [
            split_type(uniform_kernel([[2, 1], [1, 0]]), 0, 3),
            uniform_kernel([[2, 1, 0], [1, 0, 2], [0, 2, 1]]),
            uniform_kernel([[0, 3, 0, 0], [3, 0, 0, 0], [0, 0, 2, 1], [0, 0, 1, 2]]),
        ],
    )
    def test_types_of_one_color_share_their_ball_law(self, kernel):
        partition, _ = refine(kernel)
        shared = [members for members in partition.classes() if len(members) > 1]
        assert shared
        for members in shared:
            laws = [x_ball_distribution_at(kernel, i, 3, 7) for i in members]
            codes = set().union(*(law.entries for law in laws))
            for law in laws[1:]:
                for code in codes:
                    assert law.probability(code) == pytest.approx(laws[0].probability(code), abs=1e-9)
                assert law.residual == pytest.approx(laws[0].residual, abs=1e-9)

class TestUTreeProb:
    def test_leaf_is_impossible(self, one):
        assert u_tree_prob(one, LEAF, 1) == 0.0

    @pytest.mark.parametrize("leaves", [1, 2, 3])
    def test_star_on_constant_kernel(self, one, leaves):
        expected = math.exp(-1) / math.factorial(leaves - 1)
        assert u_tree_prob(one, star(leaves), 1) == pytest.approx(expected, abs=1e-12)

    def test_scale_invariant(self, one):
        for tree in enumerate_trees(2, 5):
            assert u_tree_prob(constant_kernel(7), tree, 2) == pytest.approx(u_tree_prob(one, tree, 2), abs=1e-12)

    def test_blocks_behave_like_constant_kernel(self, one, thirteen_seven):
        for depth in (1, 2):
            for tree in enumerate_trees(depth, 6):
                assert u_tree_prob(thirteen_seven, tree, depth) == pytest.approx(
                    u_tree_prob(one, tree, depth), abs=1e-12
                )

    def test_needs_positive_min_degree(self):
        kernel = uniform_kernel([[1, 0], [0, 0]])
        with pytest.raises(KernelError):
            u_tree_prob(kernel, star(1), 1)


class TestBallDistributions:
    def test_depth_one_tail_goes_to_residual(self, one):
        law = x_ball_distribution(one, 1, 4)
        assert set(law.entries) == {"()", "(())", "(()())", "(()()())"}
        tail = 1 - sum(math.exp(-1) / math.factorial(s) for s in range(4))
        assert law.residual == pytest.approx(tail, abs=1e-12)

    def test_at_type(self, two_one):
        law = x_ball_distribution_at(two_one, 1, 1, 3)
        assert law.probability("()") == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_u_law_has_no_leaf(self, one):
        law = u_ball_distribution(one, 2, 6)
        assert "()" not in law.entries
        assert sum(law.entries.values()) + law.residual == pytest.approx(1.0)

    def test_sums_to_one_when_bounds_are_generous(self, two_one):
        law = x_ball_distribution(two_one, 2, 12)
        assert sum(law.entries.values()) == pytest.approx(1.0, abs=1e-2)


class TestSeparatingTree:
    def test_leaf_separates_at_depth_one(self, one, two_one):
        found = separating_tree_search(two_one, one, 3, 8)
        assert found is not None
        assert found.tree == LEAF
        assert found.depth == 1
        assert found.p_u == pytest.approx((math.exp(-1.5) + math.exp(-0.5)) / 2, abs=1e-9)
        assert found.p_w == pytest.approx(math.exp(-1), abs=1e-9)

    def test_no_tree_for_fractionally_isomorphic_pair(self, bipartite_two):
        assert separating_tree_search(constant_kernel(2), bipartite_two, 3, 8) is None

    def test_rejects_bad_bounds(self, one):
        with pytest.raises(TreeError):
            separating_tree_search(one, one, 0, 4)


class TestTypeSplitting:
    def test_split_kernels_share_every_ball_probability(self):
        rng = random.Random(31)
        trees = {depth: enumerate_trees(depth, 8) for depth in (1, 2, 3)}
        for _ in range(20):
            n = rng.randint(1, 3)
            w = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1):
                    w[i][j] = w[j][i] = rng.randint(0, 3)
            kernel = uniform_kernel(w)
            split = split_type(kernel, rng.randrange(n), rng.randint(2, 3))
            law, split_law = XTreeLaw(kernel), XTreeLaw(split)
            for depth, candidates in trees.items():
                for tree in candidates:
                    assert abs(law.probability(tree, depth) - split_law.probability(tree, depth)) <= 1e-9
