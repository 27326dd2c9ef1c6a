"""Hot loops: breadth-first distances and per-paper weight accumulation.

Each kernel has a numba implementation and a vectorized numpy one with the
same signature. The numba path is used when numba imports and the
environment variable ``PWINDEX_DISABLE_NUMBA`` is unset (or ``0``).

Graphs arrive in CSR form: ``indptr``/``indices`` for adjacency and
``paper_ptr``/``paper_nodes`` for the paper -> author incidence.
"""

from __future__ import annotations

import math
import os

import numpy as np

# Sentinel for "no path"; larger than any real distance so min() just works.
UNREACHABLE = np.int32(np.iinfo(np.int32).max)
_INF = int(UNREACHABLE)

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_AVAILABLE = numba is not None


def _numba_requested() -> bool:
    flag = os.environ.get("PWINDEX_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


USE_NUMBA = NUMBA_AVAILABLE and _numba_requested()


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# numpy


def bfs_numpy(indptr: np.ndarray, indices: np.ndarray, source: int) -> np.ndarray:
    n = indptr.shape[0] - 1
    dist = np.full(n, _INF, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offsets = np.repeat(starts - (np.cumsum(lens) - lens), lens)
        nbrs = indices[offsets + np.arange(total)]
        nbrs = np.unique(nbrs[dist[nbrs] == _INF])
        dist[nbrs] = level
        frontier = nbrs.astype(np.int64)
    return dist


def accumulate_numpy(
    paper_ptr: np.ndarray,
    paper_nodes: np.ndarray,
    dist: np.ndarray,
    laureate: int,
    realized: bool,
    max_d: int,
    out: np.ndarray,
) -> None:
    """Add one laureate's weights to ``out`` for every (paper, author) pair.

    ``max_d < 0`` means no cap.
    """
    if paper_nodes.size == 0:
        return
    d_inc = dist[paper_nodes].astype(np.int64)
    if realized:
        starts = paper_ptr[:-1]
        lens = np.diff(paper_ptr)
        m1 = np.minimum.reduceat(d_inc, starts)
        m1_rep = np.repeat(m1, lens)
        is_min = d_inc == m1_rep
        n_min = np.add.reduceat(is_min.astype(np.int64), starts)
        m2 = np.minimum.reduceat(np.where(is_min, _INF, d_inc), starts)
        m2 = np.where(n_min >= 2, m1, m2)
        # A sole minimum holder sees the runner-up; everyone else sees the minimum.
        sole = is_min & (np.repeat(n_min, lens) == 1)
        other = np.where(sole, np.repeat(m2, lens), m1_rep)
        d = np.where(other == _INF, _INF, other + 1)
        d[paper_nodes == laureate] = 0
    else:
        d = d_inc
    keep = d != _INF
    if max_d >= 0:
        keep &= d <= max_d
    w = np.ldexp(1.0, -d[keep])
    out += np.bincount(paper_nodes[keep], weights=w, minlength=out.shape[0])


# --------------------------------------------------------------------------
# numba


def _bfs_loop(indptr, indices, source):
    n = indptr.shape[0] - 1
    dist = np.full(n, 2147483647, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] == 2147483647:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return dist


def _accumulate_loop(paper_ptr, paper_nodes, dist, laureate, realized, max_d, out):
    inf = 2147483647
    n_papers = paper_ptr.shape[0] - 1
    for p in range(n_papers):
        s = paper_ptr[p]
        e = paper_ptr[p + 1]
        m1 = inf
        m2 = inf
        arg = -1
        if realized:
            for i in range(s, e):
                di = dist[paper_nodes[i]]
                if di < m1:
                    m2 = m1
                    m1 = di
                    arg = i
                elif di < m2:
                    m2 = di
        for i in range(s, e):
            a = paper_nodes[i]
            if not realized:
                d = dist[a]
            elif a == laureate:
                d = 0
            else:
                other = m2 if i == arg else m1
                d = inf if other == inf else other + 1
            if d == inf or (max_d >= 0 and d > max_d):
                continue
            out[a] += math.ldexp(1.0, -d)


if NUMBA_AVAILABLE:
    bfs_numba = numba.njit(cache=True, nogil=True)(_bfs_loop)
    accumulate_numba = numba.njit(cache=True, nogil=True)(_accumulate_loop)
else:  # pragma: no cover
    bfs_numba = _bfs_loop
    accumulate_numba = _accumulate_loop


def bfs(indptr: np.ndarray, indices: np.ndarray, source: int) -> np.ndarray:
    if USE_NUMBA:
        return bfs_numba(indptr, indices, np.int64(source))
    return bfs_numpy(indptr, indices, source)


def accumulate(paper_ptr, paper_nodes, dist, laureate, realized, max_d, out) -> None:
    if USE_NUMBA:
        accumulate_numba(
            paper_ptr, paper_nodes, dist, np.int64(laureate), bool(realized), np.int64(max_d), out
        )
    else:
        accumulate_numpy(paper_ptr, paper_nodes, dist, laureate, realized, max_d, out)
