"""Fractional-isomorphism decisions on step kernels.

* :func:`frac_iso` refines the block-diagonal disjoint union of two akernels,
  each side keeping its own (unnormalized) masses, and compares the mass each
  side contributes to every stable color.
* :func:`proj_frac_iso` forces the scalar ``t = ||U||_1 / ||W||_1``.
* :func:`piecewise_proj_frac_iso` and :func:`kernel_factor_check` work
  component by component and compare the total mass of each class.
"""

import logging
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Sequence, TypeVar

from app.errors import KernelError
from app.services.kernels.operations import (
    components,
    l1_norm,
    rescale_restrict,
    restrict,
    scale,
)
from app.services.kernels.step_kernel import StepAkernel, StepKernel
from app.services.refinement.color_refinement import (
    StablePartition,
    Template,
    refine_weighted,
    template_of,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")


class FracIsoWitness(NamedTuple):
    """Joint refinement of ``U ⊔ W`` with the mass each side puts on every color."""

    equal: bool
    partition: StablePartition
    template: Template
    mass_u: tuple[Fraction, ...]
    mass_w: tuple[Fraction, ...]


class ComponentClass(NamedTuple):
    """One class of components that are (projectively) fractionally isomorphic."""

    members_u: tuple[tuple[int, ...], ...]
    members_w: tuple[tuple[int, ...], ...]
    mass_u: Fraction
    mass_w: Fraction


class ComponentGrouping(NamedTuple):
    equal: bool
    isolated_mass_u: Fraction
    isolated_mass_w: Fraction
    classes: tuple[ComponentClass, ...]


# ---------------------------------------------------------------------------
# Plain fractional isomorphism
# ---------------------------------------------------------------------------


def frac_iso_witness(u: StepAkernel, w: StepAkernel) -> FracIsoWitness:
    n, m = u.n, w.n
    weights = list(u.mu) + list(w.mu)
    zero = Fraction(0)
    matrix = [list(row) + [zero] * m for row in u.w] + [[zero] * n + list(row) for row in w.w]
    partition = refine_weighted(weights, matrix)
    template = template_of(partition, weights, matrix)

    mass_u = [Fraction(0)] * partition.k
    mass_w = [Fraction(0)] * partition.k
    for i, c in enumerate(partition.color):
        if i < n:
            mass_u[c] += weights[i]
        else:
            mass_w[c] += weights[i]
    return FracIsoWitness(mass_u == mass_w, partition, template, tuple(mass_u), tuple(mass_w))


def frac_iso(u: StepAkernel, w: StepAkernel) -> bool:
    """Do ``U`` and ``W`` have the same iterated degree measure?"""
    return frac_iso_witness(u, w).equal


# ---------------------------------------------------------------------------
# Projective and piecewise-projective variants
# ---------------------------------------------------------------------------


def proj_frac_iso(u: StepKernel, w: StepKernel) -> Optional[Fraction]:
    """Return ``t > 0`` with ``U`` fractionally isomorphic to ``tW``, or ``None``.

    Fractionally isomorphic kernels share their L1 norm, so the only candidate
    is ``||U||_1 / ||W||_1``.
    """
    norm_u, norm_w = l1_norm(u), l1_norm(w)
    if norm_u == 0 or norm_w == 0:
        raise KernelError("projective fractional isomorphism needs two nonzero kernels")
    t = norm_u / norm_w
    return t if frac_iso(u, scale(w, t)) else None


def _group(items: Sequence[T], same: Callable[[T, T], bool]) -> List[List[int]]:
    """Greedy grouping of *items* under the equivalence relation *same*."""
    groups: List[List[int]] = []
    for index, item in enumerate(items):
        for group in groups:
            if same(items[group[0]], item):
                group.append(index)
                break
        else:
            groups.append([index])
    return groups


def _component_grouping(
    u: StepKernel,
    w: StepKernel,
    piece: Callable[[StepKernel, frozenset[int]], StepAkernel],
) -> ComponentGrouping:
    decomposition_u, decomposition_w = components(u), components(w)
    entries = []
    for side, kernel, decomposition in (("u", u, decomposition_u), ("w", w, decomposition_w)):
        for part, mass in zip(decomposition.components, decomposition.masses):
            entries.append((side, tuple(sorted(part)), mass, piece(kernel, part)))

    groups = _group([entry[3] for entry in entries], frac_iso)
    classes = []
    for group in groups:
        members = [entries[index] for index in group]
        classes.append(
            ComponentClass(
                members_u=tuple(e[1] for e in members if e[0] == "u"),
                members_w=tuple(e[1] for e in members if e[0] == "w"),
                mass_u=sum((e[2] for e in members if e[0] == "u"), Fraction(0)),
                mass_w=sum((e[2] for e in members if e[0] == "w"), Fraction(0)),
            )
        )
    equal = decomposition_u.isolated_mass == decomposition_w.isolated_mass and all(
        c.mass_u == c.mass_w for c in classes
    )
    return ComponentGrouping(
        equal,
        decomposition_u.isolated_mass,
        decomposition_w.isolated_mass,
        tuple(classes),
    )


def _normalized_restriction(kernel: StepKernel, part: frozenset[int]) -> StepAkernel:
    piece = restrict(kernel, part)
    return scale(piece, 1 / l1_norm(piece))


def piecewise_grouping(u: StepKernel, w: StepKernel) -> ComponentGrouping:
    """Group components by projective fractional isomorphism of ``U|L_i``."""
    return _component_grouping(u, w, _normalized_restriction)


def piecewise_proj_frac_iso(u: StepKernel, w: StepKernel) -> bool:
    """Equal total mass per projective class of components, and equal isolated mass."""
    return piecewise_grouping(u, w).equal


def factor_grouping(u: StepKernel, w: StepKernel) -> ComponentGrouping:
    """Group components by plain fractional isomorphism of ``U[[L_i]]``."""
    return _component_grouping(u, w, rescale_restrict)


def kernel_factor_check(u: StepKernel, w: StepKernel) -> bool:
    """Component-wise criterion that coincides with :func:`frac_iso`."""
    result = factor_grouping(u, w).equal
    logger.debug("Factor check", extra={"result": result, "types_u": u.n, "types_w": w.n})
    return result
