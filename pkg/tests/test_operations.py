"""Tests for app.services.kernels.operations."""

import math
from fractions import Fraction

import pytest

from app.errors import InconsistentKernelError, KernelError
from app.services.kernels.operations import (
    block_diagonal,
    components,
    connected,
    cw_constant,
    degree,
    degree_distribution,
    degrees,
    heart,
    l1_norm,
    markov_bounds,
    markov_renormalize,
    max_degree,
    min_degree,
    permute,
    rescale_restrict,
    restrict,
    scale,
    split_type,
)
from app.services.kernels.step_kernel import StepKernel, constant_kernel, uniform_kernel


class TestDegrees:
    def test_constant_kernel_degree(self):
        assert degree(constant_kernel(Fraction(7, 3)), 0) == Fraction(7, 3)

    def test_two_type_degrees(self, two_one):
        assert degree(two_one, 0) == Fraction(3, 2)
        assert degree(two_one, 1) == Fraction(1, 2)

    def test_norm_and_extremes(self, two_one):
        assert l1_norm(two_one) == 1
        assert min_degree(two_one) == Fraction(1, 2)
        assert max_degree(two_one) == Fraction(3, 2)

    def test_constant_kernel_extremes_coincide(self):
        kernel = constant_kernel(4)
        assert l1_norm(kernel) == min_degree(kernel) == max_degree(kernel) == 4

    def test_zero_kernel(self):
        kernel = uniform_kernel([[0, 0], [0, 0]])
        assert l1_norm(kernel) == min_degree(kernel) == max_degree(kernel) == 0

    def test_norm_is_mass_weighted_degree_sum(self, thirteen_seven):
        expected = sum(m * d for m, d in zip(thirteen_seven.mu, degrees(thirteen_seven)))
        assert l1_norm(thirteen_seven) == expected

    def test_degree_distribution(self, two_one):
        assert degree_distribution(two_one) == {Fraction(1, 2): Fraction(1, 2), Fraction(3, 2): Fraction(1, 2)}


class TestComponents:
    def test_block_kernel(self, thirteen_seven):
        decomposition = components(thirteen_seven)
        assert decomposition.isolated == frozenset()
        assert decomposition.components == (frozenset({0}), frozenset({1}))
        assert decomposition.masses == (Fraction(1, 5), Fraction(4, 5))

    def test_connected_kernel(self, one):
        assert components(one).components == (frozenset({0}),)
        assert connected(one)

    def test_isolated_type(self):
        decomposition = components(uniform_kernel([[0, 0], [0, 3]]))
        assert decomposition.isolated == frozenset({0})
        assert decomposition.components == (frozenset({1}),)
        assert decomposition.isolated_mass == Fraction(1, 2)
        assert decomposition.part_of(0) == -1

    def test_block_kernel_is_not_connected(self, thirteen_seven):
        assert not connected(thirteen_seven)


class TestRestriction:
    def test_restrict_and_rescale(self, thirteen_seven):
        piece = restrict(thirteen_seven, {0})
        assert piece.mu == (1,)
        assert piece.w == ((13,),)
        assert rescale_restrict(thirteen_seven, {0}).w == ((Fraction(13, 5),),)

    def test_rescaled_piece_keeps_degrees(self, thirteen_seven):
        assert degree(rescale_restrict(thirteen_seven, {0}), 0) == degree(thirteen_seven, 0)

    def test_full_type_set_is_identity(self, two_one):
        assert restrict(two_one, {0, 1}) == two_one
        assert rescale_restrict(two_one, {0, 1}) == two_one

    def test_empty_type_set(self, two_one):
        with pytest.raises(KernelError, match="empty"):
            restrict(two_one, set())

    def test_scale_rejects_nonpositive_factor(self, two_one):
        with pytest.raises(KernelError, match="positive"):
            scale(two_one, 0)


class TestRenormalizations:
    def test_markov_of_constant_is_one(self):
        assert markov_renormalize(constant_kernel(5)).w == ((1,),)

    def test_markov_divides_columns_by_degree(self, two_one):
        assert markov_renormalize(two_one).w == (
            (Fraction(4, 3), Fraction(2)),
            (Fraction(2, 3), Fraction(0)),
        )

    def test_markov_block_kernel(self, thirteen_seven):
        assert markov_renormalize(thirteen_seven).w == ((5, 0), (0, Fraction(5, 4)))

    def test_markov_columns_have_unit_mass(self, two_one):
        dagger = markov_renormalize(two_one)
        for j in range(dagger.n):
            assert sum(dagger.w[i][j] * dagger.mu[i] for i in range(dagger.n)) == 1

    def test_markov_zero_over_zero(self):
        dagger = markov_renormalize(uniform_kernel([[0, 0], [0, 3]]))
        assert dagger.w == ((0, 0), (0, 2))

    def test_markov_bounds(self, two_one):
        assert markov_bounds(two_one) == (Fraction(2), Fraction(1, 3))

    def test_heart_of_block_kernel(self, thirteen_seven):
        hearted = heart(thirteen_seven)
        assert hearted.w == ((5, 0), (0, Fraction(5, 4)))
        assert degrees(hearted) == [1, 1]

    def test_heart_of_constant(self):
        assert heart(constant_kernel(3)).w == ((1,),)

    def test_heart_keeps_normalized_connected_kernel(self, two_one):
        assert heart(two_one) == two_one

    def test_heart_skips_isolated_types(self):
        assert heart(uniform_kernel([[0, 0], [0, 3]])).w == ((0, 0), (0, 2))


class TestCwConstant:
    def test_regular_kernel(self, bipartite_two):
        assert cw_constant(bipartite_two) == pytest.approx(1.0, abs=1e-12)

    def test_two_type_kernel(self, two_one):
        assert cw_constant(two_one) == pytest.approx(math.sqrt(5) / 2, abs=1e-12)

    @pytest.mark.parametrize("t", [Fraction(1, 3), 2, 7])
    def test_scale_invariance(self, two_one, t):
        assert cw_constant(scale(two_one, t)) == pytest.approx(cw_constant(two_one), abs=1e-12)

    def test_zero_kernel(self):
        with pytest.raises(KernelError):
            cw_constant(constant_kernel(0))


class TestConstructions:
    def test_permute_relabels(self, two_one):
        swapped = permute(two_one, [1, 0])
        assert swapped.w == ((0, 1), (1, 2))

    def test_permute_rejects_non_permutation(self, two_one):
        with pytest.raises(KernelError):
            permute(two_one, [0, 0])

    def test_split_type_shares_mass(self, two_one):
        split = split_type(two_one, 0, parts=3)
        assert split.n == 4
        assert split.mu == (Fraction(1, 6), Fraction(1, 2), Fraction(1, 6), Fraction(1, 6))
        assert degrees(split) == [Fraction(3, 2), Fraction(1, 2), Fraction(3, 2), Fraction(3, 2)]

    def test_block_diagonal_round_trips_through_rescale_restrict(self, two_one, one):
        union = block_diagonal([two_one, one], [Fraction(1, 3), Fraction(2, 3)])
        assert isinstance(union, StepKernel)
        assert rescale_restrict(union, {0, 1}) == two_one
        assert rescale_restrict(union, {2}) == one

    def test_block_diagonal_rejects_bad_masses(self, one):
        with pytest.raises(KernelError):
            block_diagonal([one, one], [Fraction(1, 2), Fraction(1, 3)])
