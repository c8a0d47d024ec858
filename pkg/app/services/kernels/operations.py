"""Pointwise and structural operations on step kernels.

Everything here is exact: degrees, norms, components, restrictions and the
two renormalizations (Markov ``W†`` and per-component ``W♡``) are computed
with :class:`fractions.Fraction`.  The only float result is ``c_W``, which
involves a square root.
"""

import logging
import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Sequence, TypeVar

import networkx as nx

from app.errors import InconsistentKernelError, KernelError
from app.services.kernels.step_kernel import Rational, StepAkernel, StepKernel

logger = logging.getLogger(__name__)

K = TypeVar("K", bound=StepAkernel)


class ComponentDecomposition(NamedTuple):
    """Connected components of a kernel's support graph.

    ``isolated`` holds the degree-0 types; ``components`` are sorted by their
    smallest member and ``masses`` is aligned with ``components``.
    """

    isolated: frozenset[int]
    components: tuple[frozenset[int], ...]
    masses: tuple[Fraction, ...]
    isolated_mass: Fraction = Fraction(0)

    def part_of(self, i: int) -> int:
        """Index of the component holding type *i*, or ``-1`` for isolated types."""
        for index, part in enumerate(self.components):
            if i in part:
                return index
        return -1


# ---------------------------------------------------------------------------
# Degrees and norms
# ---------------------------------------------------------------------------


def degree(kernel: StepAkernel, i: int) -> Fraction:
    """``deg(i) = sum_j w[i][j] * mu[j]``."""
    kernel.check_type(i)
    return sum((x * m for x, m in zip(kernel.w[i], kernel.mu)), Fraction(0))


def degrees(kernel: StepAkernel) -> List[Fraction]:
    return [degree(kernel, i) for i in range(kernel.n)]


def l1_norm(kernel: StepAkernel) -> Fraction:
    """``||W||_1 = sum_{i,j} mu[i] mu[j] w[i][j]``."""
    return sum((m * d for m, d in zip(kernel.mu, degrees(kernel))), Fraction(0))


def min_degree(kernel: StepAkernel) -> Fraction:
    return min(degrees(kernel))


def max_degree(kernel: StepAkernel) -> Fraction:
    return max(degrees(kernel))


def max_entry(kernel: StepAkernel) -> Fraction:
    return max(max(row) for row in kernel.w)


def degree_distribution(kernel: StepAkernel) -> dict[Fraction, Fraction]:
    """Mass carried by each degree value, keys in increasing order."""
    masses: dict[Fraction, Fraction] = defaultdict(Fraction)
    for m, d in zip(kernel.mu, degrees(kernel)):
        masses[d] += m
    return dict(sorted(masses.items()))


def require_positive_min_degree(kernel: StepAkernel, what: str) -> None:
    if min_degree(kernel) <= 0:
        raise KernelError(f"{what} requires a kernel with positive minimum degree")


# ---------------------------------------------------------------------------
# Connected components
# ---------------------------------------------------------------------------


def support_graph(kernel: StepAkernel) -> nx.Graph:
    """Undirected graph on the types with an edge wherever ``w`` is positive."""
    graph = nx.Graph()
    graph.add_nodes_from(range(kernel.n))
    for i in range(kernel.n):
        for j in range(kernel.n):
            if kernel.w[i][j] > 0:
                graph.add_edge(i, j)
    return graph


def components(kernel: StepAkernel) -> ComponentDecomposition:
    """Split the types into the isolated part and the connected components."""
    degs = degrees(kernel)
    isolated = frozenset(i for i, d in enumerate(degs) if d == 0)
    graph = support_graph(kernel)
    graph.remove_nodes_from(isolated)
    parts = sorted((frozenset(c) for c in nx.connected_components(graph)), key=min)
    masses = tuple(sum((kernel.mu[i] for i in part), Fraction(0)) for part in parts)
    lost = sum((kernel.mu[i] for i in isolated), Fraction(0))
    return ComponentDecomposition(isolated, tuple(parts), masses, lost)


def connected(kernel: StepAkernel) -> bool:
    """One component covering every type."""
    decomposition = components(kernel)
    return not decomposition.isolated and len(decomposition.components) == 1


# ---------------------------------------------------------------------------
# Restriction and rescaling
# ---------------------------------------------------------------------------


def _type_list(kernel: StepAkernel, types: Iterable[int]) -> List[int]:
    chosen = sorted(set(types))
    if not chosen:
        raise KernelError("cannot restrict a kernel to an empty set of types")
    for i in chosen:
        kernel.check_type(i)
    return chosen


def restrict(kernel: K, types: Iterable[int]) -> K:
    """``U|Y``: keep the types in *types*, renormalize their masses to one, keep ``w``."""
    chosen = _type_list(kernel, types)
    mass = sum((kernel.mu[i] for i in chosen), Fraction(0))
    labels = [kernel.label(i) for i in chosen] if kernel.labels is not None else None
    return kernel.with_data(
        [kernel.mu[i] / mass for i in chosen],
        [[kernel.w[i][j] for j in chosen] for i in chosen],
        labels,
    )


def rescale_restrict(kernel: K, types: Iterable[int]) -> K:
    """``U[[Y]] = mu(Y) * U|Y``; degrees survive when *types* is a union of components."""
    chosen = _type_list(kernel, types)
    mass = sum((kernel.mu[i] for i in chosen), Fraction(0))
    return scale(restrict(kernel, chosen), mass)


def scale(kernel: K, t: Rational) -> K:
    """Multiply every intensity by the positive rational *t*."""
    factor = Fraction(t)
    if factor <= 0:
        raise KernelError(f"scale factor must be positive, got {factor}")
    return kernel.with_data(
        kernel.mu,
        [[x * factor for x in row] for row in kernel.w],
        kernel.labels,
    )


# ---------------------------------------------------------------------------
# Renormalizations
# ---------------------------------------------------------------------------


def markov_renormalize(kernel: StepKernel) -> StepAkernel:
    """``W†[i][j] = w[i][j] / deg(j)`` with the convention ``0/0 = 0``.

    Columns of types with positive degree have unit mass against ``mu``.
    """
    degs = degrees(kernel)
    rows = []
    for i in range(kernel.n):
        row = []
        for j in range(kernel.n):
            x = kernel.w[i][j]
            row.append(x / degs[j] if x else Fraction(0))
        rows.append(row)
    return StepAkernel(kernel.mu, tuple(tuple(r) for r in rows), kernel.labels)


def markov_bounds(kernel: StepKernel) -> tuple[Fraction, Fraction]:
    """``(sup W†, min_degree(W†))``."""
    dagger = markov_renormalize(kernel)
    return max_entry(dagger), min_degree(dagger)


def heart(kernel: StepKernel) -> StepKernel:
    """Per-component renormalization ``W♡``.

    On a component ``L`` the kernel is multiplied by ``mu(L) / int_{L x L} W``;
    entries across components are zero.
    """
    decomposition = components(kernel)
    factors: List[Fraction] = []
    for part, mass in zip(decomposition.components, decomposition.masses):
        internal = sum(
            (kernel.mu[i] * kernel.mu[j] * kernel.w[i][j] for i in part for j in part),
            Fraction(0),
        )
        if internal <= 0:
            raise InconsistentKernelError(
                f"component {sorted(part)} has zero internal integral"
            )
        factors.append(mass / internal)

    part_of = [decomposition.part_of(i) for i in range(kernel.n)]
    rows = []
    for i in range(kernel.n):
        row = []
        for j in range(kernel.n):
            p = part_of[i]
            row.append(kernel.w[i][j] * factors[p] if p >= 0 and p == part_of[j] else Fraction(0))
        rows.append(row)
    return StepKernel(kernel.mu, tuple(tuple(r) for r in rows), kernel.labels)


def cw_constant(kernel: StepAkernel) -> float:
    """``c_W = sqrt(sum_i mu[i] deg(i)^2) / ||W||_1``."""
    norm = l1_norm(kernel)
    if norm == 0:
        raise KernelError("c_W is undefined for the zero kernel")
    second_moment = sum((m * d * d for m, d in zip(kernel.mu, degrees(kernel))), Fraction(0))
    return math.sqrt(second_moment / (norm * norm))


# ---------------------------------------------------------------------------
# Constructions that preserve or combine kernels
# ---------------------------------------------------------------------------


def permute(kernel: K, order: Sequence[int]) -> K:
    """Relabel types: new type ``a`` is old type ``order[a]``."""
    if sorted(order) != list(range(kernel.n)):
        raise KernelError(f"{list(order)} is not a permutation of {kernel.n} types")
    labels = [kernel.label(i) for i in order] if kernel.labels is not None else None
    return kernel.with_data(
        [kernel.mu[i] for i in order],
        [[kernel.w[i][j] for j in order] for i in order],
        labels,
    )


def split_type(kernel: K, i: int, parts: int = 2) -> K:
    """Replace type *i* by *parts* identical copies sharing its mass.

    The copy keeping index *i* is followed by the new copies appended at the end.
    """
    kernel.check_type(i)
    if parts < 1:
        raise KernelError("parts must be at least 1")
    n = kernel.n
    source = list(range(n)) + [i] * (parts - 1)
    share = kernel.mu[i] / parts
    mu = [share if a == i or a >= n else kernel.mu[a] for a in range(len(source))]
    w = [[kernel.w[a][b] for b in source] for a in source]
    labels = None
    if kernel.labels is not None:
        labels = [kernel.labels[a] for a in range(n)] + [
            f"{kernel.labels[i]}#{c}" for c in range(1, parts)
        ]
    return kernel.with_data(mu, w, labels)


def block_diagonal(kernels: Sequence[StepKernel], masses: Sequence[Rational]) -> StepKernel:
    """Disjoint union in which block ``c`` carries mass ``masses[c]``.

    Block intensities are divided by their mass, so that
    ``rescale_restrict(result, block c) == kernels[c]`` and degrees are kept.
    """
    if len(kernels) != len(masses) or not kernels:
        raise KernelError("block_diagonal needs one mass per kernel")
    weights = [Fraction(m) for m in masses]
    if any(m <= 0 for m in weights) or sum(weights) != 1:
        raise KernelError(f"block masses {weights} must be positive and sum to 1")

    offsets = []
    total = 0
    for kernel in kernels:
        offsets.append(total)
        total += kernel.n
    mu: List[Fraction] = []
    w = [[Fraction(0)] * total for _ in range(total)]
    for kernel, mass, offset in zip(kernels, weights, offsets):
        mu.extend(m * mass for m in kernel.mu)
        for i in range(kernel.n):
            for j in range(kernel.n):
                w[offset + i][offset + j] = kernel.w[i][j] / mass
    logger.debug("Built block-diagonal kernel", extra={"blocks": len(kernels), "types": total})
    return StepKernel(tuple(mu), tuple(tuple(row) for row in w))
