"""Shared pytest fixtures: a handful of kernels used across the suite.

The ``reset_rate_limits`` fixture is applied automatically so that router
tests never trip the slowapi limits set for production traffic.
"""

from fractions import Fraction

import pytest

from app.dependencies.rate_limit import limiter
from app.services.kernels.step_kernel import StepKernel, constant_kernel, uniform_kernel


@pytest.fixture(autouse=True)
def reset_rate_limits():
    limiter.reset()
    yield
    limiter.reset()


@pytest.fixture
def one():
    """W ≡ 1."""
    return constant_kernel(1)


@pytest.fixture
def two_one():
    """w = [[2, 1], [1, 0]] with uniform masses: degrees 3/2 and 1/2."""
    return uniform_kernel([[2, 1], [1, 0]])


@pytest.fixture
def bipartite_two():
    """Bipartite kernel w = [[0, 4], [4, 0]] with uniform masses: 2-regular."""
    return uniform_kernel([[0, 4], [4, 0]])


@pytest.fixture
def thirteen_seven():
    """Two constant blocks w = [[13, 0], [0, 7]] with masses 1/5 and 4/5."""
    return StepKernel((Fraction(1, 5), Fraction(4, 5)), ((13, 0), (0, 7)))


@pytest.fixture
def kernel_json():
    """Builder for kernel documents with rationals written as strings."""

    def build(mu, w, symmetric=True) -> dict:
        return {"mu": [str(m) for m in mu], "w": [[str(x) for x in row] for row in w], "symmetric": symmetric}

    return build
