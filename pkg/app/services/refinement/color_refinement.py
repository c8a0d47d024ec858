"""Exact iterated-degree (color) refinement.

Starting from the trivial partition, every round recolors each type by the
vector of its exact weighted degrees into the current color classes.  Color
ids are assigned by sorting the distinct ``(signature, previous color)``
keys, so the numbering depends only on the iterated degrees present and not
on the order of the types.  That makes two refinements directly comparable:
equal templates come out with equal ids.

The engine works on raw ``(weights, w)`` data so that it can refine
unnormalized structures too (the disjoint union of two kernels keeps each
side's own masses; graphs use unit weights).
"""

from collections import defaultdict
from fractions import Fraction
from numbers import Rational as RationalNumber
from typing import List, NamedTuple, Sequence

from app.errors import KernelError
from app.services.kernels.step_kernel import StepAkernel


class StablePartition(NamedTuple):
    """Stable coloring; ``history[r]`` is the coloring after ``r`` rounds."""

    color: tuple[int, ...]
    rounds: int
    history: tuple[tuple[int, ...], ...] = ()

    @property
    def k(self) -> int:
        return max(self.color) + 1 if self.color else 0

    def classes(self) -> List[List[int]]:
        members: List[List[int]] = [[] for _ in range(self.k)]
        for i, c in enumerate(self.color):
            members[c].append(i)
        return members


class Template(NamedTuple):
    """Quotient data ``(D, p)`` of a stable partition.

    ``p[a]`` is the mass of color ``a``; ``D[a][b]`` is the weighted degree of
    any type of color ``a`` into color ``b``.
    """

    p: tuple[Fraction, ...]
    D: tuple[tuple[Fraction, ...], ...]

    @property
    def k(self) -> int:
        return len(self.p)


def _signatures(
    colors: Sequence[int],
    classes: int,
    weights: Sequence[RationalNumber],
    w: Sequence[Sequence[RationalNumber]],
) -> List[tuple]:
    keys = []
    for i, row in enumerate(w):
        into = [Fraction(0)] * classes
        for j, x in enumerate(row):
            if x:
                into[colors[j]] += x * weights[j]
        keys.append((tuple(into), colors[i]))
    return keys


def refine_weighted(
    weights: Sequence[RationalNumber],
    w: Sequence[Sequence[RationalNumber]],
) -> StablePartition:
    """Run color refinement to its fixed point on weighted data."""
    n = len(weights)
    colors: tuple[int, ...] = (0,) * n
    classes = 1 if n else 0
    rounds = 0
    history = [colors]
    while True:
        keys = _signatures(colors, classes, weights, w)
        distinct = sorted(set(keys))
        index = {key: position for position, key in enumerate(distinct)}
        refined = tuple(index[key] for key in keys)
        if len(distinct) == classes:
            history[-1] = refined
            return StablePartition(refined, rounds, tuple(history))
        colors, classes = refined, len(distinct)
        rounds += 1
        history.append(colors)


def color_masses(partition: StablePartition, weights: Sequence[RationalNumber]) -> dict[int, Fraction]:
    masses: dict[int, Fraction] = defaultdict(Fraction)
    for i, c in enumerate(partition.color):
        masses[c] += Fraction(weights[i])
    return dict(masses)


def template_of(
    partition: StablePartition,
    weights: Sequence[RationalNumber],
    w: Sequence[Sequence[RationalNumber]],
) -> Template:
    """Quotient ``(D, p)``; well defined exactly because *partition* is stable."""
    k = partition.k
    masses = color_masses(partition, weights)
    p = [masses[c] for c in range(k)]
    representative = {}
    for i, c in enumerate(partition.color):
        representative.setdefault(c, i)
    D = []
    for a in range(k):
        row = [Fraction(0)] * k
        for j, x in enumerate(w[representative[a]]):
            row[partition.color[j]] += Fraction(x) * Fraction(weights[j])
        D.append(tuple(row))
    return Template(tuple(p), tuple(D))


def refine(kernel: StepAkernel) -> tuple[StablePartition, Template]:
    """Stable partition and template of a step akernel (rows are the slices)."""
    partition = refine_weighted(kernel.mu, kernel.w)
    return partition, template_of(partition, kernel.mu, kernel.w)


def partition_refines(finer: StablePartition, coarser: StablePartition) -> bool:
    """True iff every class of *finer* sits inside one class of *coarser*."""
    if len(finer.color) != len(coarser.color):
        raise KernelError(
            f"partitions over {len(finer.color)} and {len(coarser.color)} types are not comparable"
        )
    image: dict[int, int] = {}
    for a, b in zip(finer.color, coarser.color):
        if image.setdefault(a, b) != b:
            return False
    return True
