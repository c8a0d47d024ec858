"""Finite-type ("step") kernels with exact rational data.

A step kernel on ``n`` types is a vector of type masses ``mu`` (positive,
summing to one) and an ``n x n`` matrix ``w`` of nonnegative intensities.
Each type stands for an atom of mass ``mu[i]`` of the ground space, so every
integral over the ground space becomes a finite sum weighted by ``mu``.

:class:`StepAkernel` allows an asymmetric ``w`` (offspring of type ``i`` are
read from the row ``w[i][.]``); :class:`StepKernel` adds the symmetry
invariant.  Both are immutable and safe to share between threads.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from app.errors import KernelError

Rational = Union[Fraction, int, str]


def _as_fraction(value: Rational, where: str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise KernelError(f"{where}: {value!r} is not a rational number") from exc


@dataclass(frozen=True)
class StepAkernel:
    """Possibly asymmetric step kernel.

    Invariants: ``sum(mu) == 1`` exactly, every ``mu[i] > 0`` and every
    ``w[i][j] >= 0``.
    """

    mu: tuple[Fraction, ...]
    w: tuple[tuple[Fraction, ...], ...]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        mu = tuple(_as_fraction(m, f"mu[{i}]") for i, m in enumerate(self.mu))
        if not mu:
            raise KernelError("a kernel needs at least one type")
        n = len(mu)
        if len(self.w) != n:
            raise KernelError(f"w has {len(self.w)} rows, expected {n}")
        rows = []
        for i, row in enumerate(self.w):
            if len(row) != n:
                raise KernelError(f"w[{i}] has {len(row)} entries, expected {n}")
            rows.append(tuple(_as_fraction(x, f"w[{i}][{j}]") for j, x in enumerate(row)))
        w = tuple(rows)

        for i, m in enumerate(mu):
            if m <= 0:
                raise KernelError(f"mu[{i}] = {m} must be positive")
        if sum(mu) != 1:
            raise KernelError(f"mu sums to {sum(mu)}, expected 1")
        for i, row in enumerate(w):
            for j, x in enumerate(row):
                if x < 0:
                    raise KernelError(f"w[{i}][{j}] = {x} is negative")
        if self.labels is not None and len(self.labels) != n:
            raise KernelError(f"{len(self.labels)} labels for {n} types")

        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "w", w)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def is_symmetric(self) -> bool:
        return all(self.w[i][j] == self.w[j][i] for i in range(self.n) for j in range(i))

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def check_type(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise KernelError(f"type index {i} out of range for {self.n} types")

    # -- float views used by the probability recursions and samplers -------

    def mu_array(self) -> np.ndarray:
        return np.array([float(m) for m in self.mu])

    def offspring_means(self) -> np.ndarray:
        """Poisson means ``w[i][j] * mu[j]`` as a float matrix (row = parent type)."""
        return np.array([[float(x * m) for x, m in zip(row, self.mu)] for row in self.w])

    def with_data(
        self,
        mu: Iterable[Rational],
        w: Iterable[Iterable[Rational]],
        labels: Optional[Sequence[str]] = None,
    ) -> "StepAkernel":
        """Build a kernel of the same kind from new data."""
        return type(self)(
            tuple(mu),
            tuple(tuple(row) for row in w),
            tuple(labels) if labels is not None else None,
        )


@dataclass(frozen=True)
class StepKernel(StepAkernel):
    """Symmetric step kernel: ``w[i][j] == w[j][i]`` for all types."""

    def __post_init__(self) -> None:
        super().__post_init__()
        for i in range(self.n):
            for j in range(i):
                if self.w[i][j] != self.w[j][i]:
                    raise KernelError(
                        f"w is not symmetric: w[{i}][{j}] = {self.w[i][j]} "
                        f"but w[{j}][{i}] = {self.w[j][i]}"
                    )


def constant_kernel(d: Rational) -> StepKernel:
    """The one-type kernel ``W == d``."""
    return StepKernel((Fraction(1),), ((Fraction(d),),))


def uniform_kernel(w: Sequence[Sequence[Rational]], symmetric: bool = True) -> StepAkernel:
    """Kernel with equal type masses and intensities *w*."""
    n = len(w)
    cls = StepKernel if symmetric else StepAkernel
    return cls(tuple(Fraction(1, n) for _ in range(n)), tuple(tuple(row) for row in w))
