"""Vertex sets partitioned by attribute value, and fair subsets of them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .bigraph import as_fraction
from .errors import PreconditionViolated


@dataclass(frozen=True)
class AttributedSet:
    """One sorted member tuple per attribute value, in domain order."""

    classes: tuple[tuple[int, ...], ...]

    @classmethod
    def from_members(cls, members: Iterable[int], attr: Sequence[int], domain_size: int) -> "AttributedSet":
        buckets: list[list[int]] = [[] for _ in range(domain_size)]
        for m in members:
            buckets[attr[m]].append(m)
        return cls(tuple(tuple(sorted(b)) for b in buckets))

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[int]]) -> "AttributedSet":
        return cls(tuple(tuple(sorted(c)) for c in classes))

    @property
    def domain_size(self) -> int:
        return len(self.classes)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def members(self) -> tuple[int, ...]:
        return tuple(sorted(itertools.chain.from_iterable(self.classes)))

    def __len__(self) -> int:
        return sum(len(c) for c in self.classes)

    def issubset(self, other: "AttributedSet") -> bool:
        return len(self.classes) == len(other.classes) and all(
            set(a) <= set(b) for a, b in zip(self.classes, other.classes)
        )

    def difference(self, other: "AttributedSet") -> "AttributedSet":
        return AttributedSet(tuple(tuple(x for x in a if x not in set(b)) for a, b in zip(self.classes, other.classes)))


def _fair_sizes(sizes: Sequence[int], k: int, delta: int) -> bool:
    return min(sizes) >= k and max(sizes) - min(sizes) <= delta


def _ratio_ok(sizes: Sequence[int], theta: Fraction) -> bool:
    total = sum(sizes)
    if total == 0:
        return False
    return all(c * theta.denominator >= theta.numerator * total for c in sizes)


def is_fair_set(s: AttributedSet, k: int, delta: int) -> bool:
    return _fair_sizes(s.sizes(), k, delta)


def is_proportion_fair_set(s: AttributedSet, k: int, delta: int, theta) -> bool:
    sizes = s.sizes()
    return _fair_sizes(sizes, k, delta) and _ratio_ok(sizes, as_fraction(theta))


def fair_sizes(sizes: Sequence[int], k: int, delta: int, theta: Fraction | None = None) -> bool:
    """Fairness on class sizes alone; ``theta`` of None or 0 skips the ratio."""
    if not _fair_sizes(sizes, k, delta):
        return False
    return not theta or _ratio_ok(sizes, theta)


def mfs_check(s: AttributedSet, hat_s: AttributedSet, k: int, delta: int, theta=None) -> bool:
    """Is ``hat_s`` a maximal fair subset of ``s``?

    ``hat_s`` must already be fair; callers check that first. With ``theta``
    the ratio bound is part of fairness, for both ``hat_s`` and its
    extensions.
    """
    if not hat_s.issubset(s):
        raise PreconditionViolated("hat_s is not a subset of s")
    theta = None if theta is None else as_fraction(theta)
    return mfs_check_sizes(s.sizes(), hat_s.sizes(), k, delta, theta)


def mfs_check_sizes(
    host: Sequence[int], hat: Sequence[int], k: int, delta: int, theta: Fraction | None = None
) -> bool:
    """:func:`mfs_check` on class sizes, for callers that already hold counts."""
    if min(hat) < k:
        return False
    leftover = [a - b for a, b in zip(host, hat)]
    # one extra vertex per class keeps every pairwise difference and ratio bound
    if all(n > 0 for n in leftover):
        return False
    for i, n in enumerate(leftover):
        if n > 0:
            grown = list(hat)
            grown[i] += 1
            if fair_sizes(grown, k, delta, theta):
                return False
    return True


def class_sizes_for_combination(sizes: Sequence[int], k: int, delta: int, theta=None) -> list[int] | None:
    """Per-class subset sizes picked by :func:`combination`, or None if a class is below ``k``."""
    if not sizes or min(sizes) < k:
        return None
    msize = min(sizes)
    cap = msize + delta
    if theta is not None:
        theta = as_fraction(theta)
        if theta > 0:
            if msize == 0:
                return None
            cap = min(cap, math.floor(msize * (1 - theta) / theta))
    return [min(n, cap) for n in sizes]


def combination(s: AttributedSet, k: int, delta: int, theta=None) -> Iterator[AttributedSet]:
    """Lazily yield the candidate maximal fair subsets of ``s``.

    The smallest class is taken whole, every other class contributes all of
    its subsets of size ``min(|class|, msize + delta)`` (further capped by the
    ratio bound when ``theta`` is given), and the per-class choices are
    combined as a Cartesian product. Classes vary in domain order with the
    last class fastest; each class's subsets come in lexicographic order.
    """
    csizes = class_sizes_for_combination(s.sizes(), k, delta, theta)
    if csizes is None:
        return
    per_class = [itertools.combinations(cls, n) for cls, n in zip(s.classes, csizes)]
    for choice in itertools.product(*per_class):
        yield AttributedSet(choice)


def combination_count(s: AttributedSet, k: int, delta: int, theta=None) -> int:
    csizes = class_sizes_for_combination(s.sizes(), k, delta, theta)
    if csizes is None:
        return 0
    return math.prod(math.comb(n, c) for n, c in zip(s.sizes(), csizes))
