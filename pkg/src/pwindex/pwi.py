"""Prize Winner Index.

Every (paper, laureate) pair contributes ``2 ** -d`` to each author of the
paper, where ``d`` is the author's co-authorship distance to the laureate
(0 for the laureate, 1 for a co-author, ...; no path contributes nothing).

Two readings of that distance are offered:

``REALIZED`` (default)
    The path has to leave through the paper itself: ``d = 1 + min D[b]``
    over the other authors ``b`` of the paper. A solo paper reaches nobody
    unless its author is the laureate.
``GLOBAL``
    ``d`` is the author's network distance, the same for all their papers,
    so ``pwi = n_papers * sum(2 ** -D[a])``.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
import math
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from pwindex import _kernels
from pwindex.authors import MergeMap, normalize_name
from pwindex.graph import UNREACHABLE, CoauthorGraph, DistanceTable, build_graph
from pwindex.ingest import PaperRecord

log = logging.getLogger(__name__)

DEFAULT_LAUREATE_LABEL = "Derek de Solla Price Memorial Medal"


class DistanceMode(str, enum.Enum):
    REALIZED = "realized"
    GLOBAL = "global"


@dataclass(frozen=True)
class LaureateSet:
    keys: frozenset[str]
    label: str = ""

    @classmethod
    def of(cls, names: Iterable[str], label: str = "") -> "LaureateSet":
        return cls(frozenset(normalize_name(n) for n in names), label)

    @classmethod
    def parse(cls, text: str, label: str = "") -> "LaureateSet":
        """One name per line, raw or already normalized; ``#`` starts a comment."""
        names = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                names.append(line)
        return cls.of(names, label)

    @classmethod
    def read(cls, path: str | Path) -> "LaureateSet":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8-sig"), label=path.stem)

    @classmethod
    def default(cls) -> "LaureateSet":
        text = resources.files("pwindex.data").joinpath("price_medal.txt").read_text("utf-8")
        return cls.parse(text, label=DEFAULT_LAUREATE_LABEL)

    def merged(self, merge_map: Optional[MergeMap]) -> "LaureateSet":
        if merge_map is None:
            return self
        return LaureateSet(frozenset(merge_map(k) for k in self.keys), self.label)

    def __len__(self) -> int:
        return len(self.keys)


@dataclass(frozen=True)
class PwiRow:
    author: str
    pwi: float
    n_papers: int
    n_coauthors: int
    is_laureate: bool
    pwi_per_paper: Optional[float] = None
    pwi_per_coauthor: Optional[float] = None


def weight(d) -> float:
    """``2 ** -d``; an infinite or unreachable distance weighs 0."""
    if d is None or d == math.inf or d == UNREACHABLE:
        return 0.0
    d = int(d)
    if d < 0:
        raise ValueError(f"negative distance {d}")
    return math.ldexp(1.0, -d)


def paper_distance(
    author: str,
    paper_id: str,
    laureate: str,
    graph: CoauthorGraph,
    tables: DistanceTable | Mapping[str, np.ndarray],
    mode: DistanceMode = DistanceMode.REALIZED,
) -> float | int:
    """Distance of ``author`` to ``laureate`` as seen from one paper.

    Returns an int, or ``math.inf`` when the paper does not connect them.
    """
    authors = graph.paper_authors(paper_id)
    if author not in authors:
        raise ValueError(f"{author} is not an author of {paper_id}")
    if author == laureate:
        return 0
    row = tables.row(laureate) if isinstance(tables, DistanceTable) else tables[laureate]

    def finite(i: int) -> float | int:
        d = int(row[i])
        return math.inf if d == UNREACHABLE else d

    mode = DistanceMode(mode)
    if mode is DistanceMode.GLOBAL:
        return finite(graph.index[author])
    others = [finite(graph.index[b]) for b in authors if b != author]
    return 1 + min(others) if others else math.inf


def _sort_key(row: PwiRow):
    return (-row.pwi, -row.n_papers, row.author)


def compute_pwi(
    records: Sequence[PaperRecord],
    laureates: LaureateSet | Iterable[str],
    mode: DistanceMode | str = DistanceMode.REALIZED,
    max_d: Optional[int] = None,
    graph: Optional[CoauthorGraph] = None,
) -> list[PwiRow]:
    """PWI for every author in ``records`` (``author_keys`` must be filled).

    Distances above ``max_d`` count as no path. Rows come sorted by PWI
    descending, then paper count descending, then key.
    """
    mode = DistanceMode(mode)
    if not isinstance(laureates, LaureateSet):
        laureates = LaureateSet(frozenset(laureates))
    if graph is None:
        graph = build_graph(records)
    if graph.n_nodes == 0:
        return []
    if not laureates.keys:
        log.warning("empty laureate set: every PWI is 0")
    if max_d is not None and max_d < 0:
        raise ValueError("max_d must be non-negative")

    present = sorted(k for k in laureates.keys if k in graph.index)
    missing = len(laureates.keys) - len(present)
    if laureates.keys and missing:
        log.info("%d of %d laureates do not occur in the dataset", missing, len(laureates.keys))
    if laureates.keys and not present:
        log.warning("no laureate occurs in the dataset: every PWI is 0")

    pwi = np.zeros(graph.n_nodes, dtype=np.float64)
    cap = -1 if max_d is None else int(max_d)
    realized = mode is DistanceMode.REALIZED
    for w in present:
        dist = _kernels.bfs(graph.indptr, graph.indices, graph.index[w])
        _kernels.accumulate(
            graph.paper_ptr, graph.paper_nodes, dist, graph.index[w], realized, cap, pwi
        )

    n_papers = graph.paper_counts()
    degrees = graph.degrees()
    rows = [
        PwiRow(
            author=key,
            pwi=float(pwi[i]),
            n_papers=int(n_papers[i]),
            n_coauthors=int(degrees[i]),
            is_laureate=key in laureates.keys,
        )
        for i, key in enumerate(graph.keys)
    ]
    rows.sort(key=_sort_key)
    return rows


def relative_variants(rows: Iterable[PwiRow]) -> list[PwiRow]:
    return [
        replace(
            r,
            pwi_per_paper=r.pwi / r.n_papers,
            pwi_per_coauthor=r.pwi / r.n_coauthors if r.n_coauthors else None,
        )
        for r in rows
    ]


def fmt2(x: Optional[float]) -> str:
    """Two decimals, halves rounded away from zero; empty for missing."""
    if x is None:
        return ""
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


ROW_FIELDS = ["author", "pwi", "papers", "coauthors", "laureate", "pwi_per_paper", "pwi_per_coauthor"]


def write_rows_csv(rows: Iterable[PwiRow], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for r in rows:
        writer.writerow([
            r.author,
            fmt2(r.pwi),
            r.n_papers,
            r.n_coauthors,
            "yes" if r.is_laureate else "no",
            fmt2(r.pwi_per_paper),
            fmt2(r.pwi_per_coauthor),
        ])


def rows_to_json(rows: Iterable[PwiRow]) -> str:
    out = [
        {
            "author": r.author,
            "pwi": r.pwi,
            "papers": r.n_papers,
            "coauthors": r.n_coauthors,
            "laureate": r.is_laureate,
            "pwi_per_paper": r.pwi_per_paper,
            "pwi_per_coauthor": r.pwi_per_coauthor,
        }
        for r in rows
    ]
    return json.dumps(out, indent=2)

