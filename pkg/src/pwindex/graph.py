"""Co-authorship graph and breadth-first distance tables."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from pwindex import _kernels
from pwindex._kernels import UNREACHABLE
from pwindex.ingest import PaperRecord

log = logging.getLogger(__name__)

__all__ = [
    "UNREACHABLE",
    "CoauthorGraph",
    "DistanceTable",
    "UnknownAuthorError",
    "build_graph",
    "count_coauthors",
    "distance_table",
    "distances_from",
    "write_edge_list",
]


class UnknownAuthorError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class CoauthorGraph:
    """Undirected co-authorship graph over dense integer node ids.

    ``keys[i]`` is the author key of node ``i`` (keys are sorted).
    Adjacency is CSR (``indptr``, ``indices``); the paper incidence is CSR
    too, paper ``j`` (id ``paper_ids[j]``) having authors
    ``paper_nodes[paper_ptr[j]:paper_ptr[j + 1]]``.
    """

    keys: tuple[str, ...]
    index: dict[str, int]
    indptr: np.ndarray
    indices: np.ndarray
    paper_ids: tuple[str, ...]
    paper_ptr: np.ndarray
    paper_nodes: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.keys)

    @property
    def n_edges(self) -> int:
        return int(self.indices.shape[0]) // 2

    def __contains__(self, key: str) -> bool:
        return key in self.index

    def node(self, key: str) -> int:
        try:
            return self.index[key]
        except KeyError:
            raise UnknownAuthorError(key) from None

    def neighbors(self, key: str) -> set[str]:
        i = self.node(key)
        return {self.keys[j] for j in self.indices[self.indptr[i]:self.indptr[i + 1]]}

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def paper_counts(self) -> np.ndarray:
        return np.bincount(self.paper_nodes, minlength=self.n_nodes)

    def paper_authors(self, paper_id: str) -> list[str]:
        j = self.paper_ids.index(paper_id)
        lo, hi = self.paper_ptr[j], self.paper_ptr[j + 1]
        return [self.keys[i] for i in self.paper_nodes[lo:hi]]

    def edges(self) -> Iterable[tuple[str, str]]:
        for i in range(self.n_nodes):
            for j in self.indices[self.indptr[i]:self.indptr[i + 1]]:
                if i < j:
                    yield self.keys[i], self.keys[j]


@lru_cache(maxsize=256)
def _pair_template(k: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(k, 1)


def build_graph(records: Sequence[PaperRecord]) -> CoauthorGraph:
    """Build the graph from records whose ``author_keys`` are filled."""
    papers = sorted(records, key=lambda r: (r.record_id, r.synthetic_id, tuple(r.author_keys)))
    keys = tuple(sorted({k for r in papers for k in r.author_keys}))
    index = {k: i for i, k in enumerate(keys)}
    n = len(keys)

    paper_ptr = np.zeros(len(papers) + 1, dtype=np.int64)
    node_lists = []
    for j, rec in enumerate(papers):
        # Repeated keys on one paper count once.
        ids = np.unique(np.fromiter((index[k] for k in rec.author_keys), dtype=np.int64))
        node_lists.append(ids)
        paper_ptr[j + 1] = paper_ptr[j] + ids.size
    paper_nodes = np.concatenate(node_lists) if node_lists else np.zeros(0, dtype=np.int64)

    src_parts, dst_parts = [], []
    for ids in node_lists:
        if ids.size < 2:
            continue
        a, b = _pair_template(ids.size)
        src_parts.append(ids[a])
        dst_parts.append(ids[b])
    if src_parts:
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
        code = np.unique(np.concatenate([src * n + dst, dst * n + src]))
        rows, cols = np.divmod(code, n)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    # np.unique sorted by (row, col), so cols is already CSR order.
    return CoauthorGraph(
        keys=keys,
        index=index,
        indptr=indptr,
        indices=cols.astype(np.int64),
        paper_ids=tuple(r.record_id for r in papers),
        paper_ptr=paper_ptr,
        paper_nodes=paper_nodes,
    )


def count_coauthors(graph: CoauthorGraph, author: str) -> int:
    i = graph.node(author)
    return int(graph.indptr[i + 1] - graph.indptr[i])


def distances_from(graph: CoauthorGraph, laureate: str) -> np.ndarray:
    """Hop distance from ``laureate`` to every node; ``UNREACHABLE`` if none.

    A laureate who is not in the graph yields an all-``UNREACHABLE`` array.
    """
    if laureate not in graph.index:
        log.warning("laureate %s does not occur in the dataset", laureate)
        return np.full(graph.n_nodes, UNREACHABLE, dtype=np.int32)
    return _kernels.bfs(graph.indptr, graph.indices, graph.index[laureate])


@dataclass(frozen=True, eq=False)
class DistanceTable:
    laureates: tuple[str, ...]
    matrix: np.ndarray  # (n_laureates, n_nodes) int32

    def row(self, laureate: str) -> np.ndarray:
        return self.matrix[self.laureates.index(laureate)]


def distance_table(graph: CoauthorGraph, laureates: Iterable[str]) -> DistanceTable:
    names = tuple(sorted(set(laureates)))
    matrix = np.empty((len(names), graph.n_nodes), dtype=np.int32)
    for i, w in enumerate(names):
        matrix[i] = distances_from(graph, w)
    return DistanceTable(names, matrix)


def write_edge_list(graph: CoauthorGraph, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["author_a", "author_b"])
    writer.writerows(graph.edges())
