"""Reading datasets and writing results and benchmark tables."""

from __future__ import annotations

import csv
import json
import random
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence, Union

from .bigraph import AttributedBipartiteGraph, Biclique, Side, build_graph
from .errors import MissingAttribute, ParseError

DEFAULT_COMMENTS = ("%", "#")


@dataclass(frozen=True)
class FileAttrs:
    upper_path: str
    lower_path: str


@dataclass(frozen=True)
class RandomAttrs:
    seed: int
    upper_domain_size: int = 2
    lower_domain_size: int = 2

    def __post_init__(self):
        if self.upper_domain_size < 1 or self.lower_domain_size < 1:
            raise ValueError("attribute domain sizes must be at least 1")


AttrMode = Union[FileAttrs, RandomAttrs]


@dataclass(frozen=True)
class DatasetSpec:
    edge_path: str
    attr_mode: AttrMode
    comment_prefixes: tuple[str, ...] = DEFAULT_COMMENTS

    @property
    def seed(self) -> int | None:
        return self.attr_mode.seed if isinstance(self.attr_mode, RandomAttrs) else None


def _data_lines(path, comment_prefixes):
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith(tuple(comment_prefixes)):
                continue
            yield line_no, line


def parse_edge_list(path, comment_prefixes: Sequence[str] = DEFAULT_COMMENTS) -> list[tuple[int, int]]:
    """``upper lower`` integer pairs, one per line.

    KONECT files sometimes carry weight or timestamp columns; those are
    rejected rather than silently dropped.
    """
    edges = []
    for line_no, line in _data_lines(path, comment_prefixes):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, line, "expected exactly two columns")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_no, line, "ids must be integers") from None
        if u < 0 or v < 0:
            raise ParseError(line_no, line, "ids must be nonnegative")
        edges.append((u, v))
    return edges


def parse_attribute_file(path, comment_prefixes: Sequence[str] = DEFAULT_COMMENTS) -> dict[int, str]:
    labels = {}
    for line_no, line in _data_lines(path, comment_prefixes):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, line, "expected 'id label'")
        try:
            vid = int(parts[0])
        except ValueError:
            raise ParseError(line_no, line, "id must be an integer") from None
        labels[vid] = parts[1]
    return labels


def write_attribute_file(path, labels: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for vid in sorted(labels):
            fh.write(f"{vid} {labels[vid]}\n")


def assign_attributes(upper_ids: Iterable[int], lower_ids: Iterable[int], mode: AttrMode):
    """Label maps and domains ``(upper_map, lower_map, upper_domain, lower_domain)``.

    Random labels come from one generator per side seeded with ``seed`` and
    the side name, drawn over the ids in ascending order, so the same seed
    and id set always give the same labelling.
    """
    upper_ids, lower_ids = sorted(set(upper_ids)), sorted(set(lower_ids))
    if isinstance(mode, RandomAttrs):
        out = []
        for side, ids, size in (("upper", upper_ids, mode.upper_domain_size), ("lower", lower_ids, mode.lower_domain_size)):
            rng = random.Random(f"{mode.seed}:{side}")
            out.append({x: rng.randrange(size) for x in ids})
        return out[0], out[1], list(range(mode.upper_domain_size)), list(range(mode.lower_domain_size))

    maps, domains = [], []
    for side, ids, path in ((Side.UPPER, upper_ids, mode.upper_path), (Side.LOWER, lower_ids, mode.lower_path)):
        labels = parse_attribute_file(path)
        for x in ids:
            if x not in labels:
                raise MissingAttribute(x, side)
        maps.append({x: labels[x] for x in ids})
        domains.append(sorted(set(labels.values())))
    return maps[0], maps[1], domains[0], domains[1]


def load_dataset(spec: DatasetSpec) -> AttributedBipartiteGraph:
    edges = parse_edge_list(spec.edge_path, spec.comment_prefixes)
    um, lm, ud, ld = assign_attributes((u for u, _ in edges), (v for _, v in edges), spec.attr_mode)
    return build_graph(edges, um, lm, ud, ld)


def _external(g: AttributedBipartiteGraph, b: Biclique):
    up = sorted(g.external_ids[Side.UPPER][i] for i in b.upper)
    lo = sorted(g.external_ids[Side.LOWER][i] for i in b.lower)
    return up, lo


def _fmt_value(v) -> str:
    return "none" if v is None else str(v)


def write_results(
    bicliques: Iterable[Biclique],
    g: AttributedBipartiteGraph,
    path,
    fmt: str = "lines",
    meta: dict | None = None,
    complete: bool = True,
    summary: dict | None = None,
) -> int:
    """Write bicliques with external ids; returns the number written.

    ``lines`` output is sorted and carries ``meta`` as ``# key=value``
    header lines, so equal result sets under equal parameters give
    byte-identical files. ``jsonl`` writes one object per biclique and a
    closing ``{"summary": ...}`` object holding ``meta`` and ``summary``.
    """
    meta = dict(meta or {})
    rows = [_external(g, b) for b in set(bicliques)]
    if fmt == "lines":
        lines = sorted(f"U:{','.join(map(str, up))}|V:{','.join(map(str, lo))}" for up, lo in rows)
        with open(path, "w", encoding="utf-8") as fh:
            for key in sorted(meta):
                fh.write(f"# {key}={_fmt_value(meta[key])}\n")
            if not complete:
                fh.write("# incomplete\n")
            for line in lines:
                fh.write(line + "\n")
    elif fmt == "jsonl":
        rows.sort()
        with open(path, "w", encoding="utf-8") as fh:
            for up, lo in rows:
                fh.write(json.dumps({"upper": up, "lower": lo}) + "\n")
            tail = {"count": len(rows), "complete": complete, **meta, **(summary or {})}
            fh.write(json.dumps({"summary": tail}, default=str) + "\n")
    else:
        raise ValueError(f"unknown result format {fmt!r}")
    return len(rows)


def _parse_ids(text: str) -> tuple:
    if not text:
        return ()
    return tuple(int(x) if x.lstrip("-").isdigit() else x for x in text.split(","))


def read_results(path) -> tuple[dict[str, str], list[tuple[tuple, tuple]]]:
    """Inverse of ``write_results(..., fmt="lines")``: header dict and id pairs."""
    header: dict[str, str] = {}
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                key, _, value = body.partition("=")
                header[key] = value
                continue
            if not line.startswith("U:") or "|V:" not in line:
                raise ParseError(line_no, line, "expected 'U:...|V:...'")
            up, lo = line[2:].split("|V:", 1)
            pairs.append((_parse_ids(up), _parse_ids(lo)))
    return header, pairs


@dataclass
class RunRecord:
    dataset: str
    model: str
    algorithm: str
    ordering: str
    alpha: int
    beta: int
    delta: int
    theta: str
    seed: str
    survivors_fcore: int
    survivors_cfcore: int
    prune_ms: float
    search_ms: float
    results: int
    nodes_expanded: int


BENCH_HEADER = [f.name for f in fields(RunRecord)]


def write_bench_csv(records: Iterable[RunRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_HEADER)
        w.writeheader()
        for rec in records:
            row = asdict(rec)
            row["prune_ms"] = f"{rec.prune_ms:.3f}"
            row["search_ms"] = f"{rec.search_ms:.3f}"
            w.writerow(row)


def read_bench_csv(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def ensure_parent(path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p
