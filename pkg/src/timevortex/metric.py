"""Shortest-path norm on the infinite space-time matching graph."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import NotDetectorDisplacement, NotInEvenComponent, RadiusExceeded
from .lattice import SpacetimeVec

E1 = (SpacetimeVec(-1, 0, 4), SpacetimeVec(0, 1, 4), SpacetimeVec(1, -1, 4))
E2 = (SpacetimeVec(1, 0, 2), SpacetimeVec(0, -1, 2), SpacetimeVec(-1, 1, 2))
E3 = (SpacetimeVec(1, 1, 0), SpacetimeVec(2, -1, 0), SpacetimeVec(-1, 2, 0))
EDGE_SETS = {"E1": E1, "E2": E2, "E3": E3}

# all 18 neighbour offsets, positive then negative
EDGES18 = np.array([e for E in (E1, E2, E3) for e in E] + [-e for E in (E1, E2, E3) for e in E],
                   dtype=np.int64)
_E2_SIGNED = np.array([e for e in E2] + [-e for e in E2], dtype=np.int64)


def edge_class(w) -> str | None:
    """Name of the edge set containing ``±w``, or None."""
    w = SpacetimeVec(*w)
    for name, E in EDGE_SETS.items():
        if w in E or -w in E:
            return name
    return None


class BasisCoords(NamedTuple):
    w1: int
    w2: int
    w3: int


def basis_coords(w) -> BasisCoords:
    """Coefficients of ``w`` in the basis ``(-1,0,4), (0,1,4), (1,-1,4)``."""
    i, j, t = w
    if t % 4:
        raise NotInEvenComponent(f"{tuple(w)}: time component not divisible by 4")
    s = t // 4
    if (s + i - j) % 3:
        raise NotInEvenComponent(f"{tuple(w)} is not in the lattice spanned by E1")
    w3 = (s + i - j) // 3
    return BasisCoords(w3 - i, j + w3, w3)


def _even_norm(i: int, j: int, t: int) -> int:
    w1, w2, w3 = basis_coords((i, j, t))
    return (abs(w1) + abs(w2) + abs(w3) + abs(w1 + w2 + w3)) // 2


def graph_norm(w) -> int:
    """Exact number of edges on a shortest path from ``0`` to ``w``."""
    i, j, t = (int(x) for x in w)
    if (t - 2 * (i - j)) % 6:
        raise NotDetectorDisplacement(f"{(i, j, t)} does not join two detectors")
    if t % 4 == 0:
        return _even_norm(i, j, t)
    return 1 + min(_even_norm(i + s * a, j + s * b, t + s * c) for (a, b, c) in E2 for s in (1, -1))


def speed_lower_bound(w) -> int:
    """``ceil(max(|i|/2, |j|/2, |t|/4))``; every edge moves at most that far."""
    i, j, t = w
    return max(-(-abs(i) // 2), -(-abs(j) // 2), -(-abs(t) // 4))


@njit
def _norm_nb(i, j, t):
    # caller guarantees (t - 2(i - j)) % 6 == 0
    if t % 4 == 0:
        s = t // 4
        w3 = (s + i - j) // 3
        w1 = w3 - i
        w2 = j + w3
        return (abs(w1) + abs(w2) + abs(w3) + abs(w1 + w2 + w3)) // 2
    best = 1 << 60
    for k in range(6):
        if k < 3:
            sg = 1
        else:
            sg = -1
        kk = k % 3
        if kk == 0:
            a, b = 1, 0
        elif kk == 1:
            a, b = 0, -1
        else:
            a, b = -1, 1
        ii = i + sg * a
        jj = j + sg * b
        tt = t + sg * 2
        s = tt // 4
        w3 = (s + ii - jj) // 3
        w1 = w3 - ii
        w2 = jj + w3
        v = (abs(w1) + abs(w2) + abs(w3) + abs(w1 + w2 + w3)) // 2
        if v < best:
            best = v
    return best + 1


def graph_norms(w: np.ndarray) -> np.ndarray:
    """Vectorised ``graph_norm`` for an ``(n, 3)`` integer array (inputs assumed valid)."""
    w = np.asarray(w, dtype=np.int64).reshape(-1, 3)
    if USE_NUMBA:
        return _norms_nb(w)
    return _norms_np(w)


@njit
def _norms_nb(w):
    out = np.empty(w.shape[0], dtype=np.int64)
    for k in range(w.shape[0]):
        out[k] = _norm_nb(w[k, 0], w[k, 1], w[k, 2])
    return out


def _even_norms_np(i, j, t):
    s = t // 4
    w3 = (s + i - j) // 3
    w1 = w3 - i
    w2 = j + w3
    return (np.abs(w1) + np.abs(w2) + np.abs(w3) + np.abs(w1 + w2 + w3)) // 2


def _norms_np(w):
    i, j, t = w[:, 0], w[:, 1], w[:, 2]
    out = _even_norms_np(i, j, t)
    odd = t % 4 != 0
    if odd.any():
        sub = w[odd]
        cand = sub[:, None, :] + _E2_SIGNED[None, :, :]
        vals = _even_norms_np(cand[..., 0], cand[..., 1], cand[..., 2])
        out[odd] = 1 + vals.min(axis=1)
    return out


# ---------------------------------------------------------------------------
# breadth-first search oracle


def graph_norm_bfs(w, radius: int) -> int:
    """Shortest path length from the origin to ``w`` by explicit BFS.

    Nodes whose speed lower bound to ``w`` exceeds the remaining budget are
    pruned, so the search is finite. Raises ``RadiusExceeded`` if ``w`` is
    farther than ``radius``.
    """
    i, j, t = (int(x) for x in w)
    if (t - 2 * (i - j)) % 6:
        raise NotDetectorDisplacement(f"{(i, j, t)} does not join two detectors")
    if USE_NUMBA:
        d = _bfs_nb(i, j, t, int(radius), EDGES18)
    else:
        d = _bfs_np(i, j, t, int(radius))
    if d < 0:
        raise RadiusExceeded(f"no path to {(i, j, t)} within {radius} edges")
    return d


@njit
def _bfs_nb(wi, wj, wt, radius, edges):
    if wi == 0 and wj == 0 and wt == 0:
        return 0
    R2 = 2 * radius
    R4 = 4 * radius
    ni = 2 * R2 + 1
    nt = 2 * R4 + 1
    visited = np.zeros(ni * ni * nt, dtype=np.bool_)
    cap = ni * ni * nt
    qi = np.empty(cap, dtype=np.int64)
    qj = np.empty(cap, dtype=np.int64)
    qt = np.empty(cap, dtype=np.int64)
    qi[0] = 0
    qj[0] = 0
    qt[0] = 0
    visited[(R2 * ni + R2) * nt + R4] = True
    head = 0
    tail = 1
    depth = 0
    while head < tail and depth < radius:
        layer_end = tail
        depth += 1
        while head < layer_end:
            ci = qi[head]
            cj = qj[head]
            ct = qt[head]
            head += 1
            for e in range(edges.shape[0]):
                x = ci + edges[e, 0]
                y = cj + edges[e, 1]
                z = ct + edges[e, 2]
                if x == wi and y == wj and z == wt:
                    return depth
                if abs(x) > R2 or abs(y) > R2 or abs(z) > R4:
                    continue
                # remaining distance lower bound
                lb = max((abs(wi - x) + 1) // 2, (abs(wj - y) + 1) // 2, (abs(wt - z) + 3) // 4)
                if depth + lb > radius:
                    continue
                key = ((x + R2) * ni + (y + R2)) * nt + (z + R4)
                if visited[key]:
                    continue
                visited[key] = True
                qi[tail] = x
                qj[tail] = y
                qt[tail] = z
                tail += 1
    return -1


def _bfs_np(wi, wj, wt, radius):
    if wi == 0 and wj == 0 and wt == 0:
        return 0
    R2, R4 = 2 * radius, 4 * radius
    ni, nt = 2 * R2 + 1, 2 * R4 + 1
    visited = np.zeros(ni * ni * nt, dtype=bool)
    target = np.array([wi, wj, wt])
    front = np.zeros((1, 3), dtype=np.int64)
    visited[(R2 * ni + R2) * nt + R4] = True
    for depth in range(1, radius + 1):
        cand = (front[:, None, :] + EDGES18[None, :, :]).reshape(-1, 3)
        if (cand == target).all(axis=1).any():
            return depth
        inbox = (np.abs(cand[:, 0]) <= R2) & (np.abs(cand[:, 1]) <= R2) & (np.abs(cand[:, 2]) <= R4)
        cand = cand[inbox]
        rem = np.abs(target - cand)
        lb = np.maximum.reduce([(rem[:, 0] + 1) // 2, (rem[:, 1] + 1) // 2, (rem[:, 2] + 3) // 4])
        cand = cand[depth + lb <= radius]
        keys = ((cand[:, 0] + R2) * ni + (cand[:, 1] + R2)) * nt + (cand[:, 2] + R4)
        keys, first = np.unique(keys, return_index=True)
        fresh = ~visited[keys]
        visited[keys[fresh]] = True
        front = cand[first[fresh]]
        if len(front) == 0:
            break
    return -1
