"""Tests for app.services.simulation (seeded samplers and their statistics).

Statistical checks use fixed seeds and tolerances of at least four standard
errors, so they are deterministic and far from the boundary.
"""

import math
from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest
from pydantic import ValidationError

from app.errors import TreeError
from app.models.ball_distribution import BallDistribution
from app.models.simulation import SimConfig
from app.services.kernels.step_kernel import StepKernel, constant_kernel, uniform_kernel
from app.services.probabilities.balls import u_ball_distribution, x_ball_distribution
from app.services.probabilities.tree_probs import XTreeLaw
from app.services.simulation.branching import GenerationCounter, Sample, XSampler, sample_u, sample_x
from app.services.simulation.rng import blocks, run_blocks, stream
from app.services.simulation.statistics import (
    coarsen,
    empirical_ball_distribution,
    extinction_stats,
    simulate,
    tv_distance,
)
from app.services.trees.enumeration import enumerate_trees
from app.services.trees.rooted_tree import LEAF, star


def sigma(p: float, samples: int) -> float:
    return math.sqrt(p * (1 - p) / samples)


EXACT_LAWS = {"x": x_ball_distribution, "u": u_ball_distribution}

AGREEMENT_KERNELS = {
    "mixed_degrees": uniform_kernel([[2, 1], [1, 1]]),
    "unequal_masses": StepKernel((Fraction(1, 3), Fraction(2, 3)), ((4, 1), (1, 1))),
    "three_types": uniform_kernel([[1, 2, 0], [2, 0, 1], [0, 1, 3]]),
}


class TestRng:
    def test_block_layout(self):
        layout = blocks(1100, 512)
        assert [(b.start, b.stop) for b in layout] == [(0, 512), (512, 1024), (1024, 1100)]
        assert sum(b.size for b in layout) == 1100

    def test_streams_are_reproducible(self):
        assert stream(7, 3).random() == stream(7, 3).random()
        assert stream(7, 3).random() != stream(7, 4).random()

    def test_results_in_block_order(self):
        def worker(rng, block):
            return block.index

        assert run_blocks(5000, 1, 4, worker) == list(range(len(blocks(5000))))


class TestSamplers:
    def test_zero_kernel_gives_a_single_vertex(self):
        rng = np.random.default_rng(0)
        assert sample_x(constant_kernel(0), 3, rng) == LEAF

    def test_depth_zero(self, one):
        assert sample_x(one, 0, np.random.default_rng(0)) == LEAF

    def test_node_cap_truncates(self):
        rng = np.random.default_rng(0)
        assert sample_x(constant_kernel(50), 1, rng, max_nodes=1) is None

    def test_sample_height_is_bounded(self, two_one):
        rng = np.random.default_rng(5)
        for _ in range(50):
            assert sample_x(two_one, 2, rng).height <= 2

    def test_u_root_always_has_a_child(self, one):
        rng = np.random.default_rng(11)
        for _ in range(50):
            assert sample_u(one, 2, rng).root_degree >= 1

    def test_generation_sizes(self, one):
        sample = XSampler(one, 3, 10**6).draw(np.random.default_rng(3), root_type=0)
        assert len(sample.generation_sizes) == 3

    def test_generation_counter_has_no_code(self, one):
        sample = GenerationCounter(one, 10, 10**6).draw(np.random.default_rng(3))
        assert sample.code == ""
        assert not sample.truncated
        assert len(sample.generation_sizes) == 10


class TestSimulate:
    def test_leaf_frequency_on_constant_kernel(self, one):
        samples = 20_000
        report = simulate(one, "x", SimConfig(seed=1, samples=samples, depth=1))
        p = math.exp(-1)
        assert abs(report.distribution.probability("()") - p) < 4 * sigma(p, samples)

    def test_frequencies_match_exact_law(self, two_one):
        samples = 20_000
        report = simulate(two_one, "x", SimConfig(seed=2024, samples=samples, depth=2))
        law = XTreeLaw(two_one)
        for tree in enumerate_trees(2, 6):
            p = law.probability(tree, 2)
            if p > 0.01:
                assert abs(report.distribution.probability(tree.code) - p) < 5 * sigma(p, samples)

    def test_u_process_star(self, one):
        samples = 20_000
        report = simulate(one, "u", SimConfig(seed=9, samples=samples, depth=1))
        assert report.distribution.probability("()") == 0.0
        p = math.exp(-1)
        assert abs(report.distribution.probability(star(1).code) - p) < 4 * sigma(p, samples)

    def test_blocks_behave_like_constant_kernel(self, one, thirteen_seven):
        cfg = SimConfig(seed=77, samples=20_000, depth=2)
        assert tv_distance(simulate(thirteen_seven, "u", cfg).distribution, simulate(one, "u", cfg).distribution) < 0.04

    def test_u_minus_matches_markov_renormalized_process(self, two_one):
        a = simulate(two_one, "u-minus", SimConfig(seed=3, samples=20_000, depth=2))
        b = simulate(two_one, "xdagger", SimConfig(seed=4, samples=20_000, depth=2))
        assert tv_distance(a.distribution, b.distribution) < 0.05

    def test_zero_kernel(self):
        report = simulate(constant_kernel(0), "x", SimConfig(seed=0, samples=100, depth=2))
        assert report.distribution.entries == {"()": 1.0}
        assert report.extinction_by_generation == [1.0, 1.0]

    def test_depth_zero(self, two_one):
        report = simulate(two_one, "x", SimConfig(seed=0, samples=100, depth=0))
        assert report.distribution.entries == {"()": 1.0}
        assert report.mean_generation_size == []

    def test_identical_for_any_thread_count(self, two_one):
        single = simulate(two_one, "x", SimConfig(seed=42, samples=3000, depth=2, threads=1))
        pooled = simulate(two_one, "x", SimConfig(seed=42, samples=3000, depth=2, threads=4))
        assert single.model_dump() == pooled.model_dump()

    def test_seed_changes_results(self, two_one):
        a = simulate(two_one, "x", SimConfig(seed=1, samples=2000, depth=2))
        b = simulate(two_one, "x", SimConfig(seed=2, samples=2000, depth=2))
        assert a.distribution != b.distribution

    def test_truncated_samples_go_to_residual(self):
        report = simulate(constant_kernel(50), "x", SimConfig(seed=0, samples=100, depth=2, max_nodes=10))
        assert report.truncated_samples == 100
        assert report.distribution.entries == {}
        assert report.distribution.residual == pytest.approx(1.0)
        assert report.mean_generation_size is None

    def test_truncated_samples_leave_generation_means_alone(self, one):
        def draw(rng):
            if rng.random() < 0.5:
                return Sample(None, (0,))
            return Sample(star(2).code, (2,))

        with patch("app.services.simulation.statistics.sampler_for", return_value=draw):
            report = simulate(one, "x", SimConfig(seed=3, samples=1000, depth=1))

        assert 0 < report.truncated_samples < 1000
        assert report.mean_generation_size == [2.0]
        assert report.extinction_by_generation == [0.0]
        assert report.distribution.residual == pytest.approx(report.truncated_samples / 1000)

    def test_symmetric_kernel_required_for_u(self):
        kernel = uniform_kernel([[0, 2], [1, 0]], symmetric=False)
        with pytest.raises(ValueError, match="symmetric"):
            simulate(kernel, "u", SimConfig(seed=0, samples=10))

    def test_empirical_ball_distribution(self, one):
        draw = XSampler(one, 1, 100).draw
        law = empirical_ball_distribution(draw, SimConfig(seed=5, samples=500, depth=1))
        assert law.depth == 1
        assert sum(law.entries.values()) == pytest.approx(1.0)

    def test_seed_must_be_nonnegative(self):
        with pytest.raises(ValidationError):
            SimConfig(seed=-1)


class TestExactLawAgreement:
    @pytest.mark.parametrize("name", sorted(AGREEMENT_KERNELS))
    @pytest.mark.parametrize("process", ["x", "u"])
    def test_depth_two_frequencies(self, process, name):
        kernel = AGREEMENT_KERNELS[name]
        samples = 20_000
        report = simulate(kernel, process, SimConfig(seed=4242, samples=samples, depth=2))
        exact = EXACT_LAWS[process](kernel, 2, 8)
        checked = 0
        for code, p in exact.entries.items():
            if p > 0.01:
                checked += 1
                assert abs(report.distribution.probability(code) - p) < 4 * sigma(p, samples), code
        assert checked >= 5


class TestExtinction:
    def test_critical_process(self, two_one):
        report = extinction_stats(two_one, 200, SimConfig(seed=8, samples=2000))
        curve = report.extinction_by_generation
        assert len(curve) == 200
        assert curve[-1] >= 0.95
        assert all(a <= b for a, b in zip(curve, curve[1:]))

    def test_mean_generation_size_is_one(self, one):
        report = extinction_stats(one, 5, SimConfig(seed=12, samples=4000))
        for mean in report.mean_generation_size:
            assert mean == pytest.approx(1.0, abs=0.2)

    def test_mean_generation_size_with_mixed_degrees(self):
        kernel = uniform_kernel([[2, 1], [1, 1]])
        report = extinction_stats(kernel, 5, SimConfig(seed=21, samples=4000))
        for mean in report.mean_generation_size:
            assert mean == pytest.approx(1.0, abs=0.2)

    def test_zero_kernel_dies_at_once(self):
        report = extinction_stats(constant_kernel(0), 3, SimConfig(seed=0, samples=50))
        assert report.extinction_by_generation == [1.0, 1.0, 1.0]
        assert report.distribution is None

    def test_horizon_must_be_positive(self, one):
        with pytest.raises(ValueError):
            extinction_stats(one, 0, SimConfig(seed=0))


class TestTvDistance:
    def test_identical(self):
        law = BallDistribution(depth=1, entries={"()": 0.5, "(())": 0.5})
        assert tv_distance(law, law) == 0.0

    def test_disjoint(self):
        a = BallDistribution(depth=1, entries={"()": 1.0})
        b = BallDistribution(depth=1, entries={"(())": 1.0})
        assert tv_distance(a, b) == pytest.approx(1.0)

    def test_residual_is_a_class(self):
        a = BallDistribution(depth=1, entries={"()": 0.5}, residual=0.5)
        b = BallDistribution(depth=1, entries={"()": 1.0})
        assert tv_distance(a, b) == pytest.approx(0.5)

    def test_depth_mismatch(self):
        with pytest.raises(TreeError):
            tv_distance(BallDistribution(depth=1, entries={"()": 1.0}), BallDistribution(depth=2, entries={"()": 1.0}))

    def test_coarsen(self):
        law = BallDistribution(depth=1, entries={"()": 0.5, "(())": 0.3, "(()())": 0.2})
        coarse = coarsen(law, 2)
        assert coarse.entries == {"()": 0.5, "(())": 0.3}
        assert coarse.residual == pytest.approx(0.2)
