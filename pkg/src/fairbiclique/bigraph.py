"""Attributed bipartite graph with in-place vertex removal.

Vertices on each side get dense internal ids ``0..n-1`` in ascending order of
their external ids. Removal only flips a liveness flag; adjacency lists are
never rewritten, so a graph can be cheaply copied for an independent peeling
pass (``copy`` shares everything but the liveness flags).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import EmptyGraph, EmptySet, MissingAttribute


class Side(enum.IntEnum):
    UPPER = 0
    LOWER = 1

    @property
    def other(self) -> "Side":
        return Side(1 - self)


@dataclass(frozen=True, order=True)
class VertexRef:
    side: Side
    index: int


class Model(enum.Enum):
    SSFBC = "ssfbc"
    BSFBC = "bsfbc"
    PSSFBC = "pssfbc"
    PBSFBC = "pbsfbc"

    @property
    def bi_side(self) -> bool:
        return self in (Model.BSFBC, Model.PBSFBC)

    @property
    def proportion(self) -> bool:
        return self in (Model.PSSFBC, Model.PBSFBC)


def as_fraction(value) -> Fraction:
    """Exact rational from an int, float, str or Fraction (0.4 -> 2/5)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class FairnessParams:
    alpha: int
    beta: int
    delta: int
    theta: Fraction = Fraction(0)
    model: Model = Model.SSFBC

    def __post_init__(self):
        for name in ("alpha", "beta", "delta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
        theta = as_fraction(self.theta)
        if not 0 <= theta <= Fraction(1, 2):
            raise ValueError(f"theta must lie in [0, 0.5], got {self.theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "model", Model(self.model))

    @property
    def ratio(self) -> Fraction | None:
        """The proportion bound, or None for the count-only models."""
        return self.theta if self.model.proportion else None


class AttributedBipartiteGraph:
    """Two-sided graph; per-side data is stored in ``(upper, lower)`` pairs.

    ``adjacency[side][i]`` is the sorted neighbour list of vertex ``i`` on
    ``side`` (ids on the opposite side), ``attrs[side][i]`` an index into
    ``domains[side]``.
    """

    def __init__(
        self,
        adjacency: tuple[list[list[int]], list[list[int]]],
        attrs: tuple[list[int], list[int]],
        domains: tuple[tuple, tuple],
        external_ids: tuple[list, list],
    ):
        self.adjacency = adjacency
        self.attrs = attrs
        self.domains = domains
        self.external_ids = external_ids
        self.alive = ([True] * len(adjacency[0]), [True] * len(adjacency[1]))

    @property
    def upper_count(self) -> int:
        return len(self.adjacency[Side.UPPER])

    @property
    def lower_count(self) -> int:
        return len(self.adjacency[Side.LOWER])

    @property
    def edge_count(self) -> int:
        return sum(len(ns) for ns in self.adjacency[Side.UPPER])

    def count(self, side: Side) -> int:
        return len(self.adjacency[side])

    def domain_size(self, side: Side) -> int:
        return len(self.domains[side])

    def copy(self) -> "AttributedBipartiteGraph":
        """A graph sharing structure with this one but owning its liveness flags."""
        g = AttributedBipartiteGraph.__new__(AttributedBipartiteGraph)
        g.adjacency = self.adjacency
        g.attrs = self.attrs
        g.domains = self.domains
        g.external_ids = self.external_ids
        g.alive = (list(self.alive[0]), list(self.alive[1]))
        return g

    def is_alive(self, side: Side, i: int) -> bool:
        return self.alive[side][i]

    def remove(self, side: Side, i: int) -> None:
        self.alive[side][i] = False

    def alive_vertices(self, side: Side) -> list[int]:
        flags = self.alive[side]
        return [i for i in range(len(flags)) if flags[i]]

    def neighbors(self, side: Side, i: int) -> list[int]:
        other = self.alive[1 - side]
        return [j for j in self.adjacency[side][i] if other[j]]

    def degree(self, side: Side, i: int) -> int:
        if not self.alive[side][i]:
            return 0
        other = self.alive[1 - side]
        return sum(1 for j in self.adjacency[side][i] if other[j])

    def survivors(self) -> tuple[int, int]:
        return sum(self.alive[0]), sum(self.alive[1])

    def alive_edge_count(self) -> int:
        return sum(self.degree(Side.UPPER, u) for u in self.alive_vertices(Side.UPPER))

    def neighbor_masks(self, side: Side) -> list[int]:
        """Bitmask of alive neighbours per vertex of ``side`` (0 for dead vertices)."""
        other = self.alive[1 - side]
        masks = []
        for i, ns in enumerate(self.adjacency[side]):
            m = 0
            if self.alive[side][i]:
                for j in ns:
                    if other[j]:
                        m |= 1 << j
            masks.append(m)
        return masks

    def alive_mask(self, side: Side) -> int:
        m = 0
        for i, flag in enumerate(self.alive[side]):
            if flag:
                m |= 1 << i
        return m

    def external(self, ref: VertexRef):
        return self.external_ids[ref.side][ref.index]

    def __repr__(self) -> str:
        u, v = self.survivors()
        return (
            f"AttributedBipartiteGraph(|U|={self.upper_count}, |V|={self.lower_count}, "
            f"|E|={self.edge_count}, alive=({u}, {v}))"
        )


def _ordered_domain(labels: Iterable[Hashable]) -> tuple:
    labels = set(labels)
    try:
        return tuple(sorted(labels))
    except TypeError:
        return tuple(sorted(labels, key=str))


def build_graph(
    edges: Iterable[tuple[Hashable, Hashable]],
    upper_attrs: Mapping[Hashable, Hashable],
    lower_attrs: Mapping[Hashable, Hashable],
    upper_domain: Sequence[Hashable] | None = None,
    lower_domain: Sequence[Hashable] | None = None,
) -> AttributedBipartiteGraph:
    """Build a graph from ``(upper_id, lower_id)`` pairs and per-side label maps.

    Only vertices that occur in ``edges`` become graph vertices. The attribute
    domains default to every label present in the maps, sorted; pass them
    explicitly to include labels no vertex carries.
    """
    pairs = set(edges)
    if not pairs:
        raise EmptyGraph()
    upper_ids = sorted({u for u, _ in pairs})
    lower_ids = sorted({v for _, v in pairs})

    domains = []
    attrs = []
    for side, ids, amap, domain in (
        (Side.UPPER, upper_ids, upper_attrs, upper_domain),
        (Side.LOWER, lower_ids, lower_attrs, lower_domain),
    ):
        for x in ids:
            if x not in amap:
                raise MissingAttribute(x, side)
        dom = tuple(domain) if domain is not None else _ordered_domain(amap.values())
        index = {label: i for i, label in enumerate(dom)}
        try:
            attrs.append([index[amap[x]] for x in ids])
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]!r} not in the {side.name.lower()} domain") from None
        domains.append(dom)

    upper_index = {x: i for i, x in enumerate(upper_ids)}
    lower_index = {x: i for i, x in enumerate(lower_ids)}
    upper_adj: list[list[int]] = [[] for _ in upper_ids]
    lower_adj: list[list[int]] = [[] for _ in lower_ids]
    for u, v in pairs:
        i, j = upper_index[u], lower_index[v]
        upper_adj[i].append(j)
        lower_adj[j].append(i)
    for ns in upper_adj:
        ns.sort()
    for ns in lower_adj:
        ns.sort()

    return AttributedBipartiteGraph(
        (upper_adj, lower_adj),
        (attrs[0], attrs[1]),
        (domains[0], domains[1]),
        (upper_ids, lower_ids),
    )


def attribute_degree(g: AttributedBipartiteGraph, u: VertexRef, a: int) -> int:
    """Number of alive neighbours of ``u`` whose attribute index is ``a``."""
    if not g.alive[u.side][u.index]:
        return 0
    other = u.side.other
    alive = g.alive[other]
    labels = g.attrs[other]
    return sum(1 for j in g.adjacency[u.side][u.index] if alive[j] and labels[j] == a)


def common_neighbors(g: AttributedBipartiteGraph, s: Iterable[VertexRef]) -> list[VertexRef]:
    refs = list(s)
    if not refs:
        raise EmptySet("common_neighbors of an empty set")
    side = refs[0].side
    if any(r.side != side for r in refs):
        raise ValueError("common_neighbors needs vertices from one side")
    common = set(g.neighbors(side, refs[0].index))
    for r in refs[1:]:
        common.intersection_update(g.neighbors(side, r.index))
    return [VertexRef(side.other, j) for j in sorted(common)]


@dataclass(frozen=True, order=True)
class Biclique:
    """Internal upper and lower ids, each side sorted; compare and hash canonically."""

    upper: tuple[int, ...]
    lower: tuple[int, ...]

    @classmethod
    def of(cls, upper: Iterable[int], lower: Iterable[int]) -> "Biclique":
        return cls(tuple(sorted(upper)), tuple(sorted(lower)))

    def contains(self, other: "Biclique") -> bool:
        return set(other.upper) <= set(self.upper) and set(other.lower) <= set(self.lower)
