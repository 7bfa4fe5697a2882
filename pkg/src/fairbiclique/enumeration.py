"""Branch-and-bound enumeration of maximal and fair maximal bicliques.

The search grows the lower side ``R`` one candidate at a time while the
upper side ``L`` is kept as the common neighbourhood of ``R``. Upper sets are
Python ints used as bitmasks over internal upper ids, so intersection and the
"fully connected" test are single big-int operations.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable

from .bigraph import AttributedBipartiteGraph, Biclique, FairnessParams, Model, Side
from .errors import PreconditionViolated, TimeLimitExceeded
from .fairset import AttributedSet, combination, fair_sizes, mfs_check_sizes
from .pruning import Mode, PruneMethod, PruneReport, prune

__all__ = [
    "Algorithm",
    "Biclique",
    "EnumConfig",
    "EnumResult",
    "Ordering",
    "PruneMethod",
    "bfair_bcem",
    "bfair_bcem_pp",
    "enumerate_maximal_bicliques",
    "fair_bcem",
    "fair_bcem_pp",
    "nsf_baseline",
    "run_enumeration",
]


class Ordering(enum.Enum):
    ID = "id"
    DEG = "deg"


class Algorithm(enum.Enum):
    BASELINE = "baseline"
    BCEM = "bcem"
    BCEMPP = "bcempp"


@dataclass(frozen=True)
class EnumConfig:
    params: FairnessParams
    ordering: Ordering = Ordering.DEG
    algorithm: Algorithm = Algorithm.BCEMPP
    prune: PruneMethod = PruneMethod.CFCORE
    time_limit: float | None = None
    prune_iterate: bool = False

    def __post_init__(self):
        if self.params.model.proportion and self.algorithm is not Algorithm.BCEMPP:
            raise PreconditionViolated(f"{self.params.model.value} is only implemented for bcempp")


@dataclass
class EnumResult:
    bicliques: list[Biclique] = field(default_factory=list)
    count: int = 0
    nodes_expanded: int = 0
    prune_report: PruneReport | None = None
    prune_ms: float = 0.0
    search_ms: float = 0.0
    complete: bool = True
    config: EnumConfig | None = None

    @property
    def fcore_survivors(self) -> tuple[int, int]:
        return self.prune_report.fcore_survivors if self.prune_report else (0, 0)

    @property
    def final_survivors(self) -> tuple[int, int]:
        return self.prune_report.final_survivors if self.prune_report else (0, 0)

    def canonical(self) -> list[Biclique]:
        return sorted(set(self.bicliques))


class _Timeout(Exception):
    pass


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Search:
    """State shared by one enumeration run over an already pruned graph."""

    def __init__(
        self,
        g: AttributedBipartiteGraph,
        result: EnumResult,
        ordering: Ordering,
        deadline: float | None,
        sink: Callable[[Biclique], None] | None,
        collect: bool,
    ):
        self.g = g
        self.result = result
        self.deadline = deadline
        self.sink = sink
        self.collect = collect
        self.lo_attr = g.attrs[Side.LOWER]
        self.up_attr = g.attrs[Side.UPPER]
        self.lo_dom = g.domain_size(Side.LOWER)
        self.up_dom = g.domain_size(Side.UPPER)
        self.nbr = g.neighbor_masks(Side.LOWER)
        self.all_upper = g.alive_mask(Side.UPPER)
        lower = g.alive_vertices(Side.LOWER)
        if ordering is Ordering.DEG:
            lower.sort(key=lambda v: (-self.nbr[v].bit_count(), v))
        self.lower = lower

    def tick(self) -> None:
        self.result.nodes_expanded += 1
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise _Timeout()

    def emit(self, lmask: int, lower) -> None:
        b = Biclique(tuple(_bits(lmask)), tuple(sorted(lower)))
        self.result.count += 1
        if self.collect:
            self.result.bicliques.append(b)
        if self.sink is not None:
            self.sink(b)

    def sizes(self, vs) -> list[int]:
        c = [0] * self.lo_dom
        for v in vs:
            c[self.lo_attr[v]] += 1
        return c

    def common(self, vs) -> int:
        m = self.all_upper
        for v in vs:
            m &= self.nbr[v]
        return m

    def closure(self, lmask: int) -> list[int]:
        """Alive lower vertices adjacent to every vertex of ``lmask``."""
        return [v for v in self.lower if self.nbr[v] & lmask == lmask]

    def room(self, rsizes, cands, k: int) -> bool:
        c = list(rsizes)
        for v in cands:
            c[self.lo_attr[v]] += 1
        return min(c) >= k

    # FairBCEM
    def bcem(self, L: int, R: list[int], P: list[int], Q: list[int], p: "_Lower") -> None:
        need = p.need
        nbr = self.nbr
        P = list(P)
        Q = list(Q)
        while P:
            x = P[0]
            self.tick()
            Lx = L & nbr[x]
            if Lx.bit_count() >= need:
                q_fc, q_next = [], []
                for u in Q:
                    c = Lx & nbr[u]
                    if c == Lx:
                        q_fc.append(u)
                    if c.bit_count() >= need:
                        q_next.append(u)
                covered = [False] * self.lo_dom
                for u in q_fc:
                    covered[self.lo_attr[u]] = True
                if not all(covered):
                    R2 = R + [x]
                    p_fc, p_next = [], []
                    for v in P[1:]:
                        c = Lx & nbr[v]
                        if c == Lx:
                            p_fc.append(v)
                        if c.bit_count() >= need:
                            p_next.append(v)
                    if len(p_fc) == len(p_next) and p.fair(self.sizes(R2 + p_fc)):
                        R2 = R2 + p_fc
                        p_fc, p_next = [], []
                    r_sizes = self.sizes(R2)
                    if p.fair(r_sizes) and p.maximal_in(self.sizes(R2 + p_fc + q_fc), r_sizes):
                        p.found(Lx, R2)
                    if p_next and self.room(r_sizes, p_next, p.beta):
                        self.bcem(Lx, R2, p_next, q_next, p)
            P.pop(0)
            Q.append(x)

    # FairBCEM++ skeleton: every maximal biclique with enough room, once
    def bcem_pp(self, L: int, R: list[int], P: list[int], Q: list[int], need: int, k: int, on_maximal) -> None:
        nbr = self.nbr
        P = list(P)
        Q = list(Q)
        while P:
            x = P[0]
            self.tick()
            Lx = L & nbr[x]
            consumed = {x}
            if Lx.bit_count() >= need:
                q_next = []
                for u in Q:
                    c = Lx & nbr[u]
                    if c == Lx:
                        break
                    if c:
                        q_next.append(u)
                else:
                    R2 = R + [x]
                    outside = L & ~Lx
                    p_next = []
                    for v in P[1:]:
                        c = Lx & nbr[v]
                        if c == Lx:
                            R2.append(v)
                            if not outside & nbr[v]:
                                consumed.add(v)
                        elif c.bit_count() >= need:
                            p_next.append(v)
                    on_maximal(Lx, R2)
                    if p_next and self.room(self.sizes(R2), p_next, k):
                        self.bcem_pp(Lx, R2, p_next, q_next, need, k, on_maximal)
            Q.extend(v for v in P if v in consumed)
            P = [v for v in P if v not in consumed]

    # no-shortcut baseline: the whole set-enumeration tree over lower vertices
    def nsf(self, L: int, R: list[int], P: list[int], p: "_Lower") -> None:
        nbr = self.nbr
        for i, x in enumerate(P):
            self.tick()
            Lx = L & nbr[x]
            if not Lx:
                continue
            R2 = R + [x]
            r_sizes = self.sizes(R2)
            if Lx.bit_count() >= p.need and p.fair(r_sizes):
                if p.maximal_in(self.sizes(self.closure(Lx)), r_sizes):
                    p.found(Lx, R2)
            self.nsf(Lx, R2, P[i + 1 :], p)


class _Lower:
    """Lower-side fairness for one run, plus what to do with each fair biclique found."""

    def __init__(self, search: _Search, params: FairnessParams, found):
        self.search = search
        self.alpha = params.alpha
        self.beta = params.beta
        self.delta = params.delta
        self.theta = params.ratio
        self.need = max(params.alpha, 1)
        self.found = found

    def fair(self, sizes) -> bool:
        return fair_sizes(sizes, self.beta, self.delta, self.theta)

    def maximal_in(self, host_sizes, sizes) -> bool:
        return mfs_check_sizes(host_sizes, sizes, self.beta, self.delta, self.theta)

    def split(self, lmask: int, R: list[int]) -> None:
        """Handle a maximal biclique whose lower side may be unfair."""
        s = self.search
        if self.fair(s.sizes(R)):
            self.found(lmask, R)
            return
        aset = AttributedSet.from_members(R, s.lo_attr, s.lo_dom)
        for r in combination(aset, self.beta, self.delta, self.theta):
            members = r.members()
            if members and s.common(members) == lmask:
                self.found(lmask, members)


def _upper_step(search: _Search, params: FairnessParams):
    """Turn each single-side fair biclique into the bi-side ones it contains."""
    theta = params.ratio

    def found(lmask: int, R) -> None:
        upper = AttributedSet.from_members(_bits(lmask), search.up_attr, search.up_dom)
        r_sizes = search.sizes(R)
        for l in combination(upper, params.alpha, params.delta, theta):
            members = l.members()
            if not members:
                continue
            lm = 0
            for u in members:
                lm |= 1 << u
            host = search.sizes(search.closure(lm))
            if mfs_check_sizes(host, r_sizes, params.beta, params.delta, theta):
                search.emit(lm, R)

    return found


def _run(
    g: AttributedBipartiteGraph,
    cfg: EnumConfig,
    body: Callable[[_Search], None],
    sink,
    collect: bool,
) -> EnumResult:
    start = time.perf_counter()
    deadline = None if cfg.time_limit is None else start + cfg.time_limit
    p = cfg.params
    work = g.copy()
    mode = Mode.BI_SIDE if p.model.bi_side else Mode.SINGLE_SIDE
    result = EnumResult(config=cfg)
    result.prune_report = prune(work, p.alpha, p.beta, mode, cfg.prune, iterate=cfg.prune_iterate)
    result.prune_ms = result.prune_report.total_ms
    t1 = time.perf_counter()
    search = _Search(work, result, cfg.ordering, deadline, sink, collect)
    try:
        body(search)
    except _Timeout:
        result.complete = False
        result.search_ms = (time.perf_counter() - t1) * 1000
        raise TimeLimitExceeded(result) from None
    result.search_ms = (time.perf_counter() - t1) * 1000
    return result


def _check(cfg: EnumConfig, models, algorithm: Algorithm | None) -> None:
    if cfg.params.model not in models:
        raise PreconditionViolated(f"model {cfg.params.model.value} not handled here")
    if algorithm is not None and cfg.algorithm is not algorithm:
        raise PreconditionViolated(f"expected algorithm {algorithm.value}, got {cfg.algorithm.value}")


def _single_side_pp(search: _Search, p: FairnessParams, found) -> None:
    low = _Lower(search, p, found)
    search.bcem_pp(search.all_upper, [], search.lower, [], low.need, p.beta, low.split)


def _single_side_bcem(search: _Search, p: FairnessParams, found) -> None:
    low = _Lower(search, p, found)
    search.bcem(search.all_upper, [], search.lower, [], low)


def _single_side_nsf(search: _Search, p: FairnessParams, found) -> None:
    low = _Lower(search, p, found)
    search.nsf(search.all_upper, [], search.lower, low)


def fair_bcem(g, cfg: EnumConfig, sink=None, collect: bool = True) -> EnumResult:
    """Single-side fair bicliques by the basic branch and bound."""
    _check(cfg, {Model.SSFBC}, Algorithm.BCEM)
    return _run(g, cfg, lambda s: _single_side_bcem(s, cfg.params, s.emit), sink, collect)


def fair_bcem_pp(g, cfg: EnumConfig, sink=None, collect: bool = True) -> EnumResult:
    """Single-side (optionally proportion) fair bicliques via maximal bicliques."""
    _check(cfg, {Model.SSFBC, Model.PSSFBC}, Algorithm.BCEMPP)
    return _run(g, cfg, lambda s: _single_side_pp(s, cfg.params, s.emit), sink, collect)


def bfair_bcem(g, cfg: EnumConfig, sink=None, collect: bool = True) -> EnumResult:
    _check(cfg, {Model.BSFBC}, Algorithm.BCEM)
    return _run(g, cfg, lambda s: _single_side_bcem(s, cfg.params, _upper_step(s, cfg.params)), sink, collect)


def bfair_bcem_pp(g, cfg: EnumConfig, sink=None, collect: bool = True) -> EnumResult:
    _check(cfg, {Model.BSFBC, Model.PBSFBC}, Algorithm.BCEMPP)
    return _run(g, cfg, lambda s: _single_side_pp(s, cfg.params, _upper_step(s, cfg.params)), sink, collect)


def nsf_baseline(g, cfg: EnumConfig, sink=None, collect: bool = True) -> EnumResult:
    """Exhaustive search with fairness and maximality checked only at emission.

    Handles both single-side and bi-side models; pruning before the search
    is the same as for the other algorithms.
    """
    _check(cfg, set(Model), None)

    def body(s: _Search) -> None:
        found = _upper_step(s, cfg.params) if cfg.params.model.bi_side else s.emit
        _single_side_nsf(s, cfg.params, found)

    return _run(g, cfg, body, sink, collect)


def enumerate_maximal_bicliques(
    g: AttributedBipartiteGraph,
    min_upper: int = 0,
    min_lower_per_attr: int = 0,
    ordering: Ordering = Ordering.DEG,
    time_limit: float | None = None,
    sink=None,
    collect: bool = True,
) -> EnumResult:
    """Maximal bicliques of the alive part of ``g`` meeting the size bounds.

    No pruning is applied. Both sides of every result are nonempty.
    """
    start = time.perf_counter()
    deadline = None if time_limit is None else start + time_limit
    result = EnumResult()
    search = _Search(g.copy(), result, ordering, deadline, sink, collect)

    def on_maximal(lmask: int, R) -> None:
        if min(search.sizes(R)) >= min_lower_per_attr:
            search.emit(lmask, R)

    try:
        search.bcem_pp(search.all_upper, [], search.lower, [], max(min_upper, 1), min_lower_per_attr, on_maximal)
    except _Timeout:
        result.complete = False
        result.search_ms = (time.perf_counter() - start) * 1000
        raise TimeLimitExceeded(result) from None
    result.search_ms = (time.perf_counter() - start) * 1000
    return result


_DISPATCH = {
    (False, Algorithm.BASELINE): nsf_baseline,
    (False, Algorithm.BCEM): fair_bcem,
    (False, Algorithm.BCEMPP): fair_bcem_pp,
    (True, Algorithm.BASELINE): nsf_baseline,
    (True, Algorithm.BCEM): bfair_bcem,
    (True, Algorithm.BCEMPP): bfair_bcem_pp,
}


def run_enumeration(g, cfg: EnumConfig, sink=None, collect: bool = True) -> EnumResult:
    """Pick the enumerator matching ``cfg.params.model`` and ``cfg.algorithm``."""
    fn = _DISPATCH[(cfg.params.model.bi_side, cfg.algorithm)]
    return fn(g, cfg, sink=sink, collect=collect)
