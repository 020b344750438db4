"""Shortest homologically nontrivial cycles in a graph with Z2 x Z2 edge labels.

A closed walk is nontrivial when the XOR of its edge labels is nonzero.
Searching the 4-sheeted cover for a path from ``(s, 0)`` to ``(s, l != 0)``
gives the shortest such walk through ``s``.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from ._accel import USE_NUMBA, njit

NO_CYCLE = -1


def _csr(n_nodes, eu, ev, el):
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    el = np.asarray(el, dtype=np.int64)
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    lab = np.concatenate([el, el])
    order = np.argsort(src, kind="stable")
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    return np.cumsum(indptr), dst[order], lab[order]


@njit
def _cover_bfs_nb(indptr, indices, labels, sources, limit):
    n = indptr.shape[0] - 1
    dist = np.full(4 * n, -1, dtype=np.int64)
    queue = np.empty(4 * n, dtype=np.int64)
    best = limit
    for s in sources:
        dist[:] = -1
        dist[4 * s] = 0
        queue[0] = 4 * s
        head = 0
        tail = 1
        while head < tail:
            state = queue[head]
            head += 1
            d = dist[state]
            if d + 1 >= best:
                break
            v = state // 4
            lab = state % 4
            for k in range(indptr[v], indptr[v + 1]):
                nxt = 4 * indices[k] + (lab ^ labels[k])
                if dist[nxt] >= 0:
                    continue
                dist[nxt] = d + 1
                if indices[k] == s and (lab ^ labels[k]) != 0:
                    best = d + 1
                    break
                queue[tail] = nxt
                tail += 1
    return best


def _cover_bfs_np(n_nodes, eu, ev, el, sources, limit):
    # explicit cover graph, all-sources BFS through scipy
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    el = np.asarray(el, dtype=np.int64)
    rows, cols = [], []
    for lab in range(4):
        rows.append(4 * eu + lab)
        cols.append(4 * ev + (lab ^ el))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    adj = coo_matrix((np.ones(len(r)), (r, c)), shape=(4 * n_nodes, 4 * n_nodes)).tocsr()
    src = 4 * np.asarray(sources, dtype=np.int64)
    dist = shortest_path(adj, directed=False, unweighted=True, indices=src)
    best = limit
    for k, s in enumerate(np.asarray(sources)):
        for lab in (1, 2, 3):
            d = dist[k, 4 * s + lab]
            if np.isfinite(d) and d < best:
                best = int(d)
    return best


def shortest_nontrivial_cycle(n_nodes: int, eu, ev, el, sources, loop_labels=()) -> int:
    """Length of the shortest closed walk with nonzero label through any of
    ``sources``; ``loop_labels`` lists labels of single-edge self loops.

    Returns ``NO_CYCLE`` if none exists.
    """
    if any(int(l) != 0 for l in loop_labels):
        return 1
    limit = 1 << 60
    if len(eu) == 0 or len(sources) == 0:
        return NO_CYCLE
    if USE_NUMBA:
        indptr, indices, labels = _csr(n_nodes, eu, ev, el)
        best = _cover_bfs_nb(indptr, indices, labels, np.asarray(sources, dtype=np.int64), limit)
    else:
        best = _cover_bfs_np(n_nodes, eu, ev, el, sources, limit)
    return NO_CYCLE if best >= limit else int(best)
