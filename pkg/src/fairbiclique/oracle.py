"""Exhaustive reference enumerators for small instances.

Nothing here touches the search or fair-set code; every predicate is spelled
out again from the definitions so the two can be cross-checked.
"""

from __future__ import annotations

from fractions import Fraction

from .bigraph import AttributedBipartiteGraph, Biclique, FairnessParams, Side, as_fraction
from .errors import InstanceTooLarge
from .fairset import AttributedSet

MAX_GRAPH_VERTICES = 20
MAX_SET_SIZE = 16


def _masks(g: AttributedBipartiteGraph):
    if g.upper_count + g.lower_count > MAX_GRAPH_VERTICES:
        raise InstanceTooLarge(
            f"oracle limited to {MAX_GRAPH_VERTICES} vertices, got {g.upper_count + g.lower_count}"
        )
    up_alive = [u for u in range(g.upper_count) if g.is_alive(Side.UPPER, u)]
    lo_alive = [v for v in range(g.lower_count) if g.is_alive(Side.LOWER, v)]
    up_set = set(up_alive)
    # upper neighbourhood of each alive lower vertex, as a bitmask
    nbr = {}
    for v in lo_alive:
        m = 0
        for u in g.adjacency[Side.LOWER][v]:
            if u in up_set:
                m |= 1 << u
        nbr[v] = m
    classes = []
    for side, alive in ((Side.UPPER, up_alive), (Side.LOWER, lo_alive)):
        cm = [0] * g.domain_size(side)
        for i in alive:
            cm[g.attrs[side][i]] |= 1 << i
        classes.append(cm)
    full_up = sum(1 << u for u in up_alive)
    return lo_alive, nbr, full_up, classes[0], classes[1]


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _class_ok(mask: int, class_masks: list[int], k: int, delta: int, theta: Fraction | None) -> bool:
    counts = [(mask & c).bit_count() for c in class_masks]
    if any(c < k for c in counts):
        return False
    if max(counts) - min(counts) > delta:
        return False
    if theta is not None and theta > 0:
        total = sum(counts)
        for c in counts:
            if Fraction(c, total) < theta:
                return False
    return True


def _maximal(cands: list[tuple[int, int]]) -> list[tuple[int, int]]:
    # a dominated pair is dominated by some maximal one, so compare only with those
    cands = sorted(set(cands), key=lambda p: -(p[0].bit_count() + p[1].bit_count()))
    kept: list[tuple[int, int]] = []
    for lm, rm in cands:
        if not any((lm & kl) == lm and (rm & kr) == rm for kl, kr in kept):
            kept.append((lm, rm))
    return kept


def _to_bicliques(pairs) -> list[Biclique]:
    return sorted(Biclique(_bits(lm), _bits(rm)) for lm, rm in pairs)


def oracle_fair_bicliques(
    g: AttributedBipartiteGraph, params: FairnessParams, naive: bool = False
) -> list[Biclique]:
    """Every fair biclique of ``params.model`` by exhaustive scan, sorted.

    For the single-side models only ``L = N(R)`` is tried for each lower set
    ``R``; ``naive=True`` tries every nonempty ``L`` inside ``N(R)`` instead.
    """
    lo_alive, nbr, full_up, up_classes, lo_classes = _masks(g)
    theta = params.theta if params.model.proportion else None
    bi = params.model.bi_side
    cands = []
    n = len(lo_alive)
    for bits in range(1, 1 << n):
        rm = 0
        common = full_up
        for i in range(n):
            if bits >> i & 1:
                v = lo_alive[i]
                rm |= 1 << v
                common &= nbr[v]
        if not common or not _class_ok(rm, lo_classes, params.beta, params.delta, theta):
            continue
        if bi or naive:
            sub = common
            while sub:
                if bi:
                    ok = _class_ok(sub, up_classes, params.alpha, params.delta, theta)
                else:
                    ok = sub.bit_count() >= params.alpha
                if ok:
                    cands.append((sub, rm))
                sub = (sub - 1) & common
        elif common.bit_count() >= params.alpha:
            cands.append((common, rm))
    return _to_bicliques(_maximal(cands))


def oracle_maximal_bicliques(g: AttributedBipartiteGraph) -> list[Biclique]:
    """All maximal bicliques with both sides nonempty, sorted."""
    lo_alive, nbr, full_up, _, _ = _masks(g)
    cands = []
    n = len(lo_alive)
    for bits in range(1, 1 << n):
        rm = 0
        common = full_up
        for i in range(n):
            if bits >> i & 1:
                rm |= 1 << lo_alive[i]
                common &= nbr[lo_alive[i]]
        sub = common
        while sub:
            cands.append((sub, rm))
            sub = (sub - 1) & common
    return _to_bicliques(_maximal(cands))


def oracle_maximal_fair_subsets(s: AttributedSet, k: int, delta: int, theta=None) -> list[AttributedSet]:
    """Inclusion-maximal fair subsets of ``s`` by scanning all subsets."""
    members = [(m, a) for a, cls in enumerate(s.classes) for m in cls]
    if len(members) > MAX_SET_SIZE:
        raise InstanceTooLarge(f"oracle limited to sets of {MAX_SET_SIZE}, got {len(members)}")
    theta = None if theta is None else as_fraction(theta)
    d = len(s.classes)
    n = len(members)
    class_masks = [0] * d
    for i, (_, a) in enumerate(members):
        class_masks[a] |= 1 << i
    fair = []
    for mask in range(1 << n):
        counts = [(mask & c).bit_count() for c in class_masks]
        if min(counts) < k or max(counts) - min(counts) > delta:
            continue
        if theta is not None and theta > 0:
            total = sum(counts)
            if total == 0 or any(Fraction(c, total) < theta for c in counts):
                continue
        fair.append(mask)
    fair.sort(key=lambda m: -m.bit_count())
    maximal: list[int] = []
    for m in fair:
        if not any(m & big == m and m != big for big in maximal):
            maximal.append(m)
    out = []
    for m in maximal:
        buckets = [[] for _ in range(d)]
        for i in _bits(m):
            buckets[members[i][1]].append(members[i][0])
        out.append(AttributedSet.from_classes(buckets))
    return sorted(out, key=lambda x: x.classes)
