"""Graph reduction before search: fair alpha-beta cores and colorful cores.

All passes peel the given graph in place by clearing liveness flags, so
callers that need the raw graph afterwards should prune a ``g.copy()``.
"""

from __future__ import annotations

import enum
import random
import time
from collections import deque
from dataclasses import dataclass, field, replace

from .bigraph import AttributedBipartiteGraph, Side


class Mode(enum.Enum):
    SINGLE_SIDE = "single"
    BI_SIDE = "bi"


class PruneMethod(enum.Enum):
    FCORE = "fcore"
    CFCORE = "cfcore"


@dataclass
class PeelSummary:
    removed_upper: int = 0
    removed_lower: int = 0

    @property
    def removed(self) -> int:
        return self.removed_upper + self.removed_lower


def fcore(
    g: AttributedBipartiteGraph,
    alpha: int,
    beta: int,
    mode: Mode = Mode.SINGLE_SIDE,
    rng: random.Random | None = None,
) -> PeelSummary:
    """Peel ``g`` down to its fair alpha-beta core (bi-fair in BI_SIDE mode).

    Upper vertices need at least ``beta`` alive neighbours of every lower
    attribute value. Lower vertices need ``alpha`` alive neighbours in total,
    or ``alpha`` of every upper attribute value in BI_SIDE mode.

    ``rng`` randomises the order in which doomed vertices are processed; the
    result does not depend on it.
    """
    U, L = Side.UPPER, Side.LOWER
    bi = mode is Mode.BI_SIDE
    n_up_dom = g.domain_size(U)
    n_lo_dom = g.domain_size(L)
    up_alive, lo_alive = g.alive[U], g.alive[L]
    up_attr, lo_attr = g.attrs[U], g.attrs[L]

    # counts[side][i][a]; in single-side mode lower vertices keep one bucket
    up_cnt = []
    for u, ns in enumerate(g.adjacency[U]):
        c = [0] * n_lo_dom
        if up_alive[u]:
            for v in ns:
                if lo_alive[v]:
                    c[lo_attr[v]] += 1
        up_cnt.append(c)
    lo_cnt = []
    for v, ns in enumerate(g.adjacency[L]):
        c = [0] * (n_up_dom if bi else 1)
        if lo_alive[v]:
            for u in ns:
                if up_alive[u]:
                    c[up_attr[u] if bi else 0] += 1
        lo_cnt.append(c)

    def violates_up(u):
        return min(up_cnt[u]) < beta

    def violates_lo(v):
        return min(lo_cnt[v]) < alpha

    doomed = ([False] * g.upper_count, [False] * g.lower_count)
    queue: list[tuple[Side, int]] = []
    for u in range(g.upper_count):
        if up_alive[u] and violates_up(u):
            doomed[U][u] = True
            queue.append((U, u))
    for v in range(g.lower_count):
        if lo_alive[v] and violates_lo(v):
            doomed[L][v] = True
            queue.append((L, v))

    if rng is not None:
        rng.shuffle(queue)
    summary = PeelSummary()
    while queue:
        if rng is not None:
            k = rng.randrange(len(queue))
            queue[k], queue[-1] = queue[-1], queue[k]
        side, i = queue.pop()
        g.remove(side, i)
        if side is U:
            summary.removed_upper += 1
            slot = up_attr[i] if bi else 0
            for v in g.adjacency[U][i]:
                if lo_alive[v] and not doomed[L][v]:
                    lo_cnt[v][slot] -= 1
                    if violates_lo(v):
                        doomed[L][v] = True
                        queue.append((L, v))
        else:
            summary.removed_lower += 1
            a = lo_attr[i]
            for u in g.adjacency[L][i]:
                if up_alive[u] and not doomed[U][u]:
                    up_cnt[u][a] -= 1
                    if violates_up(u):
                        doomed[U][u] = True
                        queue.append((U, u))
    return summary


@dataclass
class TwoHopGraph:
    """Unipartite projection of one side of a bipartite graph.

    Vertex ``i`` stands for vertex ``origin[i]`` of ``side`` in the source
    graph and inherits its attribute.
    """

    adjacency: list[list[int]]
    attrs: list[int]
    origin: list[int]
    side: Side
    domain_size: int
    coloring: list[int] | None = None

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def induced(self, keep) -> "TwoHopGraph":
        keep = sorted(keep)
        index = {old: new for new, old in enumerate(keep)}
        adjacency = [[index[j] for j in self.adjacency[i] if j in index] for i in keep]
        coloring = None if self.coloring is None else [self.coloring[i] for i in keep]
        return TwoHopGraph(
            adjacency,
            [self.attrs[i] for i in keep],
            [self.origin[i] for i in keep],
            self.side,
            self.domain_size,
            coloring,
        )


def build_two_hop(
    g: AttributedBipartiteGraph,
    alpha: int,
    mode: Mode = Mode.SINGLE_SIDE,
    side: Side = Side.LOWER,
) -> TwoHopGraph:
    """Connect two alive ``side`` vertices that share at least ``alpha`` neighbours.

    In BI_SIDE mode the threshold must hold separately for every attribute
    value of the opposite side.
    """
    other = side.other
    verts = g.alive_vertices(side)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adjacency: list[list[int]] = [[] for _ in range(n)]

    if alpha <= 0:
        for i in range(n):
            adjacency[i] = [j for j in range(n) if j != i]
    else:
        bi = mode is Mode.BI_SIDE
        slots = g.domain_size(other) if bi else 1
        other_attr = g.attrs[other]
        nbrs = [g.neighbors(side, v) for v in verts]
        other_nbrs: dict[int, list[int]] = {}
        for i, v in enumerate(verts):
            common: dict[int, list[int]] = {}
            for w in nbrs[i]:
                ws = other_nbrs.get(w)
                if ws is None:
                    ws = other_nbrs[w] = [index[x] for x in g.neighbors(other, w)]
                slot = other_attr[w] if bi else 0
                for j in ws:
                    if j > i:
                        c = common.get(j)
                        if c is None:
                            c = common[j] = [0] * slots
                        c[slot] += 1
            for j, c in common.items():
                if min(c) >= alpha:
                    adjacency[i].append(j)
                    adjacency[j].append(i)
        for ns in adjacency:
            ns.sort()

    return TwoHopGraph(adjacency, [g.attrs[side][v] for v in verts], verts, side, g.domain_size(side))


def greedy_color(h: TwoHopGraph) -> TwoHopGraph:
    """Smallest-free-colour greedy colouring, highest degree first (ties by id)."""
    order = sorted(range(h.vertex_count), key=lambda i: (-len(h.adjacency[i]), i))
    colors = [-1] * h.vertex_count
    for i in order:
        used = {colors[j] for j in h.adjacency[i] if colors[j] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    return replace(h, coloring=colors)


def ego_colorful_core(h: TwoHopGraph, k: int) -> set[int]:
    """Vertices of the ego colorful ``k``-core of a coloured 2-hop graph.

    A vertex stays while, for every attribute value, its closed neighbourhood
    shows at least ``k`` distinct colours among vertices with that value.
    """
    if h.coloring is None:
        raise ValueError("ego_colorful_core needs a coloured graph")
    n = h.vertex_count
    if k <= 0:
        return set(range(n))
    color = h.coloring
    attrs = h.attrs
    dom = h.domain_size

    # M[u][(a, c)] and ED[u][a]
    M: list[dict[tuple[int, int], int]] = []
    ED: list[list[int]] = []
    for u in range(n):
        m: dict[tuple[int, int], int] = {(attrs[u], color[u]): 1}
        for v in h.adjacency[u]:
            key = (attrs[v], color[v])
            m[key] = m.get(key, 0) + 1
        ed = [0] * dom
        for a, _ in m:
            ed[a] += 1
        M.append(m)
        ED.append(ed)

    alive = [True] * n
    queue = deque(u for u in range(n) if min(ED[u]) < k)
    for u in queue:
        alive[u] = False
    while queue:
        u = queue.popleft()
        key = (attrs[u], color[u])
        for v in h.adjacency[u]:
            if not alive[v]:
                continue
            m = M[v]
            m[key] -= 1
            if m[key] == 0:
                del m[key]
                ED[v][key[0]] -= 1
                if ED[v][key[0]] < k:
                    alive[v] = False
                    queue.append(v)
    return {u for u in range(n) if alive[u]}


def colorful_pass(
    g: AttributedBipartiteGraph,
    side: Side,
    threshold: int,
    k: int,
    mode: Mode,
) -> int:
    """Drop ``side`` vertices outside the ego colorful ``k``-core of their 2-hop graph.

    Returns the number of vertices removed from ``g``.
    """
    h = build_two_hop(g, threshold, mode, side)
    min_deg = h.domain_size * k - 1
    # one simultaneous filter on the initial degrees, no cascading
    keep = [i for i in range(h.vertex_count) if h.degree(i) >= min_deg]
    hh = greedy_color(h.induced(keep))
    core = {hh.origin[i] for i in ego_colorful_core(hh, k)}
    removed = 0
    for v in h.origin:
        if v not in core:
            g.remove(side, v)
            removed += 1
    return removed


@dataclass
class PruneReport:
    method: PruneMethod
    fcore_survivors: tuple[int, int] = (0, 0)
    final_survivors: tuple[int, int] = (0, 0)
    fcore_ms: float = 0.0
    total_ms: float = 0.0
    rounds: int = 1
    stages: list[tuple[str, tuple[int, int]]] = field(default_factory=list)


def _cfcore_round(g, alpha, beta, mode, report: PruneReport, t0: float | None = None):
    fcore(g, alpha, beta, mode)
    report.stages.append(("fcore", g.survivors()))
    if t0 is not None:
        report.fcore_ms = (time.perf_counter() - t0) * 1000
        report.fcore_survivors = g.survivors()
    colorful_pass(g, Side.LOWER, alpha, beta, mode)
    report.stages.append(("colorful-lower", g.survivors()))
    if mode is Mode.BI_SIDE:
        colorful_pass(g, Side.UPPER, beta, alpha, mode)
        report.stages.append(("colorful-upper", g.survivors()))
    fcore(g, alpha, beta, mode)
    report.stages.append(("fcore", g.survivors()))


def cfcore(
    g: AttributedBipartiteGraph,
    alpha: int,
    beta: int,
    mode: Mode = Mode.SINGLE_SIDE,
    iterate: bool = False,
) -> PruneReport:
    """Colorful fair alpha-beta core (bi-colorful in BI_SIDE mode), in place."""
    return prune(g, alpha, beta, mode, PruneMethod.CFCORE, iterate=iterate)


def prune(
    g: AttributedBipartiteGraph,
    alpha: int,
    beta: int,
    mode: Mode,
    method: PruneMethod = PruneMethod.CFCORE,
    iterate: bool = False,
) -> PruneReport:
    report = PruneReport(method)
    t0 = time.perf_counter()
    if method is PruneMethod.FCORE:
        fcore(g, alpha, beta, mode)
        report.stages.append(("fcore", g.survivors()))
        report.fcore_ms = (time.perf_counter() - t0) * 1000
        report.fcore_survivors = report.final_survivors = g.survivors()
        report.total_ms = report.fcore_ms
        return report

    _cfcore_round(g, alpha, beta, mode, report, t0)
    while iterate:
        before = g.survivors()
        _cfcore_round(g, alpha, beta, mode, report)
        if g.survivors() == before:
            break
        report.rounds += 1
    report.final_survivors = g.survivors()
    report.total_ms = (time.perf_counter() - t0) * 1000
    return report
