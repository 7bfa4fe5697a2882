"""Shared fixtures: small named graphs and a seeded random instance generator."""

from __future__ import annotations

import random
from dataclasses import dataclass

from hypothesis import strategies as st

from fairbiclique import AttributedBipartiteGraph, build_graph
from fairbiclique.bigraph import Side

LOWER_BASE = 100


@dataclass
class Instance:
    seed: int
    graph: AttributedBipartiteGraph
    p: float

    def __repr__(self) -> str:
        return f"Instance(seed={self.seed}, |U|={self.graph.upper_count}, |V|={self.graph.lower_count}, p={self.p})"


def random_instance(seed: int, max_side: int = 8, min_side: int = 2) -> Instance:
    """Bipartite graph with two attribute values per side; never edgeless."""
    rng = random.Random(seed)
    nu = rng.randint(min_side, max_side)
    nv = rng.randint(min_side, max_side)
    p = rng.choice((0.3, 0.5, 0.7))
    edges = [(u, LOWER_BASE + v) for u in range(nu) for v in range(nv) if rng.random() < p]
    if not edges:
        edges = [(rng.randrange(nu), LOWER_BASE + rng.randrange(nv))]
    ua = {u: rng.randint(0, 1) for u in range(nu)}
    va = {LOWER_BASE + v: rng.randint(0, 1) for v in range(nv)}
    return Instance(seed, build_graph(edges, ua, va, [0, 1], [0, 1]), p)


def graph_from(edges, upper_attrs, lower_attrs, upper_domain=None, lower_domain=None):
    return build_graph(edges, upper_attrs, lower_attrs, upper_domain, lower_domain)


def k23(lower_labels=("a", "a", "b")) -> AttributedBipartiteGraph:
    """Complete K_{2,3}: upper 1,2 (both 'a'), lower 7,8,9."""
    edges = [(u, v) for u in (1, 2) for v in (7, 8, 9)]
    return build_graph(edges, {1: "a", 2: "a"}, dict(zip((7, 8, 9), lower_labels)))


def p4() -> AttributedBipartiteGraph:
    """Path u1 - v1 - u2 - v2."""
    return build_graph([(1, 11), (2, 11), (2, 12)], {1: "a", 2: "a"}, {11: "a", 12: "a"})


def external(g: AttributedBipartiteGraph, bicliques):
    """Bicliques as sorted (upper external ids, lower external ids) tuples."""
    out = []
    for b in bicliques:
        up = tuple(sorted(g.external_ids[Side.UPPER][i] for i in b.upper))
        lo = tuple(sorted(g.external_ids[Side.LOWER][i] for i in b.lower))
        out.append((up, lo))
    return sorted(out)


@st.composite
def small_graphs(draw, max_side: int = 6, domain: int = 2):
    nu = draw(st.integers(1, max_side))
    nv = draw(st.integers(1, max_side))
    pairs = [(u, LOWER_BASE + v) for u in range(nu) for v in range(nv)]
    edges = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=len(pairs), unique=True))
    ua = {u: draw(st.integers(0, domain - 1)) for u in range(nu)}
    va = {LOWER_BASE + v: draw(st.integers(0, domain - 1)) for v in range(nv)}
    return build_graph(edges, ua, va, list(range(domain)), list(range(domain)))
