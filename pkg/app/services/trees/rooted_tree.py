"""Rooted trees stored in canonical form.

Children are kept sorted by their canonical code, so the representation *is*
the isomorphism class: two trees are isomorphic as rooted trees exactly when
their codes (nested parentheses, AHU style) are equal.
"""

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, NamedTuple, Sequence

from app.errors import TreeError


@dataclass(frozen=True, eq=False)
class RootedTree:
    children: tuple["RootedTree", ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.children, key=lambda child: child.code))
        object.__setattr__(self, "children", ordered)

    @cached_property
    def code(self) -> str:
        return "(" + "".join(child.code for child in self.children) + ")"

    @cached_property
    def vertices(self) -> int:
        return 1 + sum(child.vertices for child in self.children)

    @cached_property
    def height(self) -> int:
        return 1 + max(child.height for child in self.children) if self.children else 0

    @property
    def root_degree(self) -> int:
        return len(self.children)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootedTree) and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __repr__(self) -> str:
        return f"RootedTree({self.code!r})"


LEAF = RootedTree()


class MultiplicityProfile(NamedTuple):
    """Distinct child subtrees of the root with their multiplicities."""

    entries: tuple[tuple[RootedTree, int], ...]

    @property
    def root_degree(self) -> int:
        return sum(count for _, count in self.entries)


def canonical_code(tree: RootedTree) -> str:
    return tree.code


def parse_code(code: str) -> RootedTree:
    """Inverse of :func:`canonical_code` for any balanced parenthesis string."""
    stack: List[List[RootedTree]] = []
    result = None
    for position, char in enumerate(code.strip()):
        if result is not None:
            raise TreeError(f"unexpected text after the root in {code!r} at {position}")
        if char == "(":
            stack.append([])
        elif char == ")":
            if not stack:
                raise TreeError(f"unbalanced ')' in {code!r} at {position}")
            node = RootedTree(tuple(stack.pop()))
            if stack:
                stack[-1].append(node)
            else:
                result = node
        else:
            raise TreeError(f"invalid character {char!r} in tree code {code!r}")
    if result is None or stack:
        raise TreeError(f"unbalanced tree code {code!r}")
    return result


def plant(tree: RootedTree) -> RootedTree:
    """``T↑``: a new root whose only child is the old root."""
    return RootedTree((tree,))


def merge(trees: Sequence[RootedTree]) -> RootedTree:
    """``T1 ⊕ ... ⊕ Tl``: identify the roots."""
    if not trees:
        raise TreeError("merge needs at least one tree")
    return RootedTree(tuple(child for tree in trees for child in tree.children))


def star(leaves: int) -> RootedTree:
    return RootedTree((LEAF,) * leaves)


def path(vertices: int) -> RootedTree:
    """Path rooted at an endpoint."""
    if vertices < 1:
        raise TreeError("a path needs at least one vertex")
    tree = LEAF
    for _ in range(vertices - 1):
        tree = plant(tree)
    return tree


def multiplicity_profile(tree: RootedTree) -> MultiplicityProfile:
    counts = Counter(tree.children)
    return MultiplicityProfile(tuple((child, counts[child]) for child in sorted(counts, key=lambda t: t.code)))


def e_coefficient(tree: RootedTree) -> Fraction:
    """``prod 1/l!`` over the root's child multiplicities."""
    value = Fraction(1)
    for _, count in multiplicity_profile(tree).entries:
        value /= math.factorial(count)
    return value


def remove_child(tree: RootedTree, child: RootedTree) -> RootedTree:
    """The tree with one copy of *child* detached from the root."""
    remaining = list(tree.children)
    remaining.remove(child)
    return RootedTree(tuple(remaining))
