"""Fairness-aware maximal biclique enumeration on attributed bipartite graphs."""

from .bigraph import (
    AttributedBipartiteGraph,
    Biclique,
    FairnessParams,
    Model,
    Side,
    VertexRef,
    attribute_degree,
    build_graph,
    common_neighbors,
)
from .enumeration import (
    Algorithm,
    EnumConfig,
    EnumResult,
    Ordering,
    bfair_bcem,
    bfair_bcem_pp,
    enumerate_maximal_bicliques,
    fair_bcem,
    fair_bcem_pp,
    nsf_baseline,
    run_enumeration,
)
from .errors import (
    EmptyGraph,
    EmptySet,
    FairBicliqueError,
    InstanceTooLarge,
    MissingAttribute,
    ParseError,
    PreconditionViolated,
    TimeLimitExceeded,
)
from .fairset import AttributedSet, combination, is_fair_set, is_proportion_fair_set, mfs_check
from .oracle import oracle_fair_bicliques, oracle_maximal_bicliques, oracle_maximal_fair_subsets
from .pruning import Mode, PruneMethod, build_two_hop, cfcore, ego_colorful_core, fcore, greedy_color, prune

__version__ = "0.1.0"
