"""Exit criteria, one test each, printing a PASS/FAIL line per criterion.

Random instances are generated from fixed seeds (listed in every failure
message) so any mismatch can be replayed with ``helpers.random_instance``.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from fairbiclique import (
    Algorithm,
    AttributedSet,
    EnumConfig,
    FairnessParams,
    Model,
    Ordering,
    PruneMethod,
    TimeLimitExceeded,
    bfair_bcem,
    bfair_bcem_pp,
    combination,
    enumerate_maximal_bicliques,
    fair_bcem,
    fair_bcem_pp,
    nsf_baseline,
    oracle_fair_bicliques,
    oracle_maximal_bicliques,
    oracle_maximal_fair_subsets,
    run_enumeration,
)
from fairbiclique.bigraph import Side
from fairbiclique.fairset import class_sizes_for_combination
from fairbiclique.io import DatasetSpec, RandomAttrs, load_dataset
from fairbiclique.pruning import Mode, fcore, prune
from helpers import random_instance

pytestmark = pytest.mark.acceptance

SS_SEEDS = range(1000, 1300)
BI_SEEDS = range(5000, 5300)
GRID = list(itertools.product((1, 2, 3), (1, 2, 3), (0, 1, 2)))
THETAS = (Fraction(0), Fraction(3, 10), Fraction(2, 5))
U, L = Side.UPPER, Side.LOWER

_oracle_cache: dict = {}


@pytest.fixture(scope="module")
def ss_instances():
    return [random_instance(s, max_side=8) for s in SS_SEEDS]


@pytest.fixture(scope="module")
def bi_instances():
    return [random_instance(s, max_side=7) for s in BI_SEEDS]


def oracle(inst, p: FairnessParams):
    key = (inst.seed, inst.graph.upper_count, inst.graph.lower_count, p)
    if key not in _oracle_cache:
        _oracle_cache[key] = oracle_fair_bicliques(inst.graph, p)
    return _oracle_cache[key]


def cfg(p, algo, order=Ordering.DEG, prune_method=PruneMethod.CFCORE):
    return EnumConfig(p, order, algo, prune_method)


def report(capsys, number, title, failures, detail="", status=None):
    status = status or ("PASS" if not failures else "FAIL")
    with capsys.disabled():
        print(f"\n[acceptance {number}] {status}: {title}" + (f" ({detail})" if detail else ""))
        for f in failures[:5]:
            print(f"    {f}")


def compare(found, expected):
    """Exact set equality with no duplicate emissions."""
    return sorted(found) == expected


def test_1_oracle_equivalence_ssfbc(ss_instances, capsys):
    t0 = time.perf_counter()
    failures = []
    algos = {"fair_bcem": (fair_bcem, Algorithm.BCEM), "fair_bcem_pp": (fair_bcem_pp, Algorithm.BCEMPP), "nsf": (nsf_baseline, Algorithm.BASELINE)}
    for inst in ss_instances:
        for a, b, d in GRID:
            p = FairnessParams(a, b, d)
            expected = oracle(inst, p)
            for name, (fn, algo) in algos.items():
                got = fn(inst.graph, cfg(p, algo)).bicliques
                if not compare(got, expected):
                    failures.append(f"{inst} {p} {name}")
    elapsed = time.perf_counter() - t0
    report(capsys, 1, "SSFBC enumerators equal the oracle", failures, f"{len(ss_instances)} graphs x {len(GRID)} params, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 300


def test_2_oracle_equivalence_other_models(bi_instances, capsys):
    t0 = time.perf_counter()
    failures = []
    checks = 0
    for inst in bi_instances:
        g = inst.graph
        for a, b, d in GRID:
            p = FairnessParams(a, b, d, model=Model.BSFBC)
            expected = oracle(inst, p)
            for name, fn, algo in (("bfair_bcem", bfair_bcem, Algorithm.BCEM), ("bfair_bcem_pp", bfair_bcem_pp, Algorithm.BCEMPP)):
                checks += 1
                if not compare(fn(g, cfg(p, algo)).bicliques, expected):
                    failures.append(f"{inst} {p} {name}")
            for theta in THETAS:
                for model, fn in ((Model.PSSFBC, fair_bcem_pp), (Model.PBSFBC, bfair_bcem_pp)):
                    p = FairnessParams(a, b, d, theta, model)
                    checks += 1
                    if not compare(fn(g, cfg(p, Algorithm.BCEMPP)).bicliques, oracle(inst, p)):
                        failures.append(f"{inst} {p} {fn.__name__}")
    elapsed = time.perf_counter() - t0
    report(capsys, 2, "BSFBC/PSSFBC/PBSFBC enumerators equal the oracle", failures, f"{checks} comparisons, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 600


def _survivors(g, p, method):
    h = g.copy()
    mode = Mode.BI_SIDE if p.model.bi_side else Mode.SINGLE_SIDE
    prune(h, p.alpha, p.beta, mode, method)
    return set(h.alive_vertices(U)), set(h.alive_vertices(L))


def test_3_pruning_safety(ss_instances, bi_instances, capsys):
    failures = []
    cases = [(inst, FairnessParams(a, b, d)) for inst in ss_instances for a, b, d in GRID]
    for inst in bi_instances:
        for a, b, d in GRID:
            cases.append((inst, FairnessParams(a, b, d, model=Model.BSFBC)))
            for theta in THETAS:
                cases.append((inst, FairnessParams(a, b, d, theta, Model.PSSFBC)))
                cases.append((inst, FairnessParams(a, b, d, theta, Model.PBSFBC)))
    for inst, p in cases:
        fu, fl = _survivors(inst.graph, p, PruneMethod.FCORE)
        cu, cl = _survivors(inst.graph, p, PruneMethod.CFCORE)
        if not (cu <= fu and cl <= fl):
            failures.append(f"{inst} {p}: cfcore kept a vertex fcore removed")
        for bq in oracle(inst, p):
            if not (set(bq.upper) <= cu and set(bq.lower) <= cl):
                failures.append(f"{inst} {p}: {bq} lost by pruning")
    report(capsys, 3, "pruning never drops a fair biclique vertex; cfcore within fcore", failures, f"{len(cases)} cases")
    assert not failures


def test_4_combination_completeness(capsys):
    rng = random.Random(4242)
    failures = []
    n_sets = 1000
    for i in range(n_sets):
        total = rng.randint(0, 12)
        a = rng.randint(0, total)
        s = AttributedSet.from_classes([range(a), range(a, total)])
        k = rng.randint(0, 3)
        delta = rng.randint(0, 3)
        theta = rng.choice([Fraction(1, 5), Fraction(3, 10), Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)])
        for th in (None, theta):
            got = list(combination(s, k, delta, th))
            csizes = class_sizes_for_combination(s.sizes(), k, delta, th)
            expected_count = 0 if csizes is None else math.prod(math.comb(n, c) for n, c in zip(s.sizes(), csizes))
            if sorted(got, key=lambda x: x.classes) != oracle_maximal_fair_subsets(s, k, delta, th):
                failures.append(f"set #{i} sizes={s.sizes()} k={k} delta={delta} theta={th}: family differs")
            if len(got) != expected_count or len(set(got)) != len(got):
                failures.append(f"set #{i} sizes={s.sizes()} k={k} delta={delta} theta={th}: count {len(got)} != {expected_count}")
    report(capsys, 4, "combination equals the maximal fair subsets (two classes)", failures, f"{n_sets} sets, with and without theta")
    assert not failures


def test_5_degenerate_equivalences(ss_instances, capsys):
    failures = []
    for inst in ss_instances:
        g = inst.graph
        maximal = oracle_maximal_bicliques(g)
        if enumerate_maximal_bicliques(g).canonical() != maximal:
            failures.append(f"{inst}: maximal-biclique enumeration differs from oracle")
        p = FairnessParams(1, 0, g.lower_count)
        if oracle(inst, p) != maximal:
            failures.append(f"{inst}: oracle SSFBC at alpha=1, beta=0 differs from maximal bicliques")
        for fn, algo in ((fair_bcem, Algorithm.BCEM), (fair_bcem_pp, Algorithm.BCEMPP), (nsf_baseline, Algorithm.BASELINE)):
            if not compare(fn(g, cfg(p, algo)).bicliques, maximal):
                failures.append(f"{inst}: {fn.__name__} at alpha=1, beta=0, delta=|V| differs from maximal bicliques")
    checked = 0
    for inst in ss_instances:
        g = inst.graph
        for a, b, d in GRID:
            half = FairnessParams(a, b, d, Fraction(1, 2), Model.PSSFBC)
            exact = FairnessParams(a, b, 0)
            got = fair_bcem_pp(g, cfg(half, Algorithm.BCEMPP)).bicliques
            checked += 1
            if not compare(got, oracle(inst, exact)):
                failures.append(f"{inst} {half}: differs from SSFBC with delta=0")
    report(capsys, 5, "degenerate parameters reduce to maximal bicliques / delta=0", failures, f"{len(ss_instances)} + {checked} cases")
    assert not failures


def _contained(inner, outer):
    outer_sets = [(set(o.upper), set(o.lower)) for o in outer]
    return all(any(set(b.upper) <= ou and set(b.lower) <= ol for ou, ol in outer_sets) for b in inner)


def test_6_structural_containment(ss_instances, bi_instances, capsys):
    failures = []
    checked = 0
    for inst in list(ss_instances) + list(bi_instances):
        g = inst.graph
        maximal = enumerate_maximal_bicliques(g).bicliques
        for a, b, d in GRID:
            ss = fair_bcem_pp(g, cfg(FairnessParams(a, b, d), Algorithm.BCEMPP)).bicliques
            bs = bfair_bcem_pp(g, cfg(FairnessParams(a, b, d, model=Model.BSFBC), Algorithm.BCEMPP)).bicliques
            checked += 1
            if not _contained(bs, ss):
                failures.append(f"{inst} alpha={a} beta={b} delta={d}: BSFBC outside every SSFBC")
            if not _contained(ss, maximal):
                failures.append(f"{inst} alpha={a} beta={b} delta={d}: SSFBC outside every maximal biclique")
    report(capsys, 6, "BSFBC within SSFBC within maximal bicliques", failures, f"{checked} cases")
    assert not failures


def test_7_ordering_and_pruning_invariance(ss_instances, bi_instances, capsys):
    failures = []
    with_results = 0
    nsf_not_less = 0
    variants = list(itertools.product(Ordering, PruneMethod))
    for inst in ss_instances:
        g = inst.graph
        for a, b, d in GRID:
            p = FairnessParams(a, b, d)
            for algo in Algorithm:
                outs = {v: run_enumeration(g, cfg(p, algo, *v)).canonical() for v in variants}
                if len(set(map(tuple, outs.values()))) != 1:
                    failures.append(f"{inst} {p} {algo.value}: results depend on ordering/pruning")
            nsf = nsf_baseline(g, cfg(p, Algorithm.BASELINE))
            if nsf.count:
                with_results += 1
                bcem = fair_bcem(g, cfg(p, Algorithm.BCEM))
                nsf_not_less += nsf.nodes_expanded >= bcem.nodes_expanded
    for inst in bi_instances:
        g = inst.graph
        for a, b, d in GRID:
            p = FairnessParams(a, b, d, model=Model.BSFBC)
            for algo in Algorithm:
                outs = {v: run_enumeration(g, cfg(p, algo, *v)).canonical() for v in variants}
                if len(set(map(tuple, outs.values()))) != 1:
                    failures.append(f"{inst} {p} {algo.value}: results depend on ordering/pruning")
            for theta in THETAS[1:]:
                for model in (Model.PSSFBC, Model.PBSFBC):
                    pp = FairnessParams(a, b, d, theta, model)
                    outs = {v: run_enumeration(g, cfg(pp, Algorithm.BCEMPP, *v)).canonical() for v in variants}
                    if len(set(map(tuple, outs.values()))) != 1:
                        failures.append(f"{inst} {pp}: results depend on ordering/pruning")
    share = nsf_not_less / with_results if with_results else 1.0
    if share < 0.95:
        failures.append(f"nsf expanded at least as many nodes as fair_bcem on only {share:.1%} of instances")
    report(capsys, 7, "id/degree ordering and fcore/cfcore pruning give identical results", failures, f"nsf >= fair_bcem nodes on {share:.1%} of {with_results} instances with results")
    assert not failures


def test_8_peeling_determinism(ss_instances, bi_instances, capsys):
    failures = []
    rng = random.Random(88)
    checked = 0
    for inst in list(ss_instances) + list(bi_instances):
        g = inst.graph
        for (a, b), mode in itertools.product(itertools.product((1, 2, 3), repeat=2), Mode):
            base = g.copy()
            fcore(base, a, b, mode)
            ref = (base.alive[U], base.alive[L])
            if fcore(base, a, b, mode).removed:
                failures.append(f"{inst} alpha={a} beta={b} {mode.value}: second pass removed vertices")
            for _ in range(20):
                h = g.copy()
                fcore(h, a, b, mode, rng=random.Random(rng.random()))
                if (h.alive[U], h.alive[L]) != ref:
                    failures.append(f"{inst} alpha={a} beta={b} {mode.value}: shuffled peel differs")
                    break
            checked += 1
    report(capsys, 8, "fcore is order-independent and idempotent", failures, f"{checked} cases x 20 shuffles")
    assert not failures


def _youtube_path() -> Path | None:
    candidates = [os.environ.get("FAIRBICLIQUE_YOUTUBE"), "datasets/youtube/out.youtube-groupmemberships", "data/out.youtube-groupmemberships"]
    for c in candidates:
        if c and Path(c).is_file():
            return Path(c)
    return None


@pytest.mark.dataset
def test_9_youtube_scale(capsys):
    path = _youtube_path()
    if path is None:
        report(capsys, 9, "Youtube dataset run", [], "dataset not present; set FAIRBICLIQUE_YOUTUBE", status="SKIP")
        pytest.skip("Youtube dataset not downloaded")
    g = load_dataset(DatasetSpec(str(path), RandomAttrs(seed=1)))
    p = FairnessParams(8, 8, 2)
    t0 = time.perf_counter()
    failures = []
    try:
        r = fair_bcem_pp(g, EnumConfig(p, time_limit=600), collect=False)
        detail = f"{r.count} SSFBCs, survivors {r.final_survivors}, {time.perf_counter() - t0:.1f}s"
    except TimeLimitExceeded as exc:
        failures.append("did not finish within 10 minutes")
        detail = f"{exc.result.count} results before the limit"
    report(capsys, 9, "FairBCEM++ on Youtube at alpha=beta=8, delta=2 within 10 minutes", failures, detail)
    assert not failures
