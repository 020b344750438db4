"""Matching decoder for X-detector syndromes.

Edge weights are log-likelihood ratios quantised to integers, so path sums
and the matching are exact. Shortest paths between defects are found by
Dijkstra from each defect; the logical label of a path is the XOR of its
edge labels, with ties between equal-length paths resolved towards the
smaller predecessor index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .dem import DetectorGraph, decompose_hyperedges
from .errors import OddDefectCount
from .matching import _min_weight_perfect_nb, min_weight_perfect_matching

WEIGHT_SCALE = 1000
UNREACHABLE = np.int64(1) << 40


def quantize_weight(q: float) -> int:
    """``round(WEIGHT_SCALE * ln((1 - q) / q))``, at least 1."""
    return max(1, int(round(WEIGHT_SCALE * math.log((1 - q) / q))))


@dataclass
class MatchingGraph:
    """CSR adjacency of the decoding graph with integer weights."""

    num_detectors: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_detector_graph(cls, g: DetectorGraph) -> "MatchingGraph":
        if not g.decomposed:
            g = decompose_hyperedges(g)
        # parallel edges with different labels are kept; Dijkstra picks the lighter
        src, dst, wts, labs = [], [], [], []
        for (u, v, lab), q in sorted(g.edges.items()):
            if q <= 0:
                continue
            w = quantize_weight(q)
            src += [u, v]
            dst += [v, u]
            wts += [w, w]
            labs += [lab, lab]
        V = g.num_detectors
        src = np.asarray(src, dtype=np.int64)
        order = np.lexsort((np.asarray(dst, dtype=np.int64), src)) if len(src) else np.zeros(0, np.int64)
        indptr = np.zeros(V + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        return cls(V, np.cumsum(indptr),
                   np.asarray(dst, dtype=np.int64)[order],
                   np.asarray(wts, dtype=np.int64)[order],
                   np.asarray(labs, dtype=np.int64)[order])


@dataclass
class DefectGraph:
    defects: np.ndarray  # detector ids
    pair_weights: np.ndarray  # (k, k) int64
    pair_labels: np.ndarray  # (k, k) int64, 2-bit labels


# ---------------------------------------------------------------------------
# kernels


@njit
def _heap_push(hd, hv, size, d, v):
    i = size
    hd[i] = d
    hv[i] = v
    while i > 0:
        p = (i - 1) // 2
        if hd[p] > hd[i] or (hd[p] == hd[i] and hv[p] > hv[i]):
            hd[p], hd[i] = hd[i], hd[p]
            hv[p], hv[i] = hv[i], hv[p]
            i = p
        else:
            break
    return size + 1


@njit
def _heap_pop(hd, hv, size):
    d = hd[0]
    v = hv[0]
    size -= 1
    hd[0] = hd[size]
    hv[0] = hv[size]
    i = 0
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < size and (hd[l] < hd[m] or (hd[l] == hd[m] and hv[l] < hv[m])):
            m = l
        if r < size and (hd[r] < hd[m] or (hd[r] == hd[m] and hv[r] < hv[m])):
            m = r
        if m == i:
            break
        hd[m], hd[i] = hd[i], hd[m]
        hv[m], hv[i] = hv[i], hv[m]
        i = m
    return d, v, size


@njit
def _pair_tables(indptr, indices, weights, labels, defects, dist, pred, plab, stamp, target, hd, hv, run):
    """Shortest-path weights and labels between all defects. ``run`` is a
    fresh stamp base; returns the next unused one."""
    k = defects.shape[0]
    W = np.full((k, k), UNREACHABLE, dtype=np.int64)
    L = np.zeros((k, k), dtype=np.int64)
    for a in range(k):
        W[a, a] = 0
    for a in range(k - 1):
        run += 1
        for b in range(a + 1, k):
            target[defects[b]] = run
        remaining = k - 1 - a
        s = defects[a]
        stamp[s] = run
        dist[s] = 0
        pred[s] = -1
        plab[s] = 0
        size = _heap_push(hd, hv, 0, 0, s)
        while size > 0 and remaining > 0:
            d, u, size = _heap_pop(hd, hv, size)
            if d != dist[u]:
                continue
            if target[u] == run:
                target[u] = run - 1
                remaining -= 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = d + weights[e]
                if stamp[v] != run or nd < dist[v]:
                    stamp[v] = run
                    dist[v] = nd
                    pred[v] = u
                    plab[v] = plab[u] ^ labels[e]
                    size = _heap_push(hd, hv, size, nd, v)
                elif nd == dist[v] and u < pred[v]:
                    pred[v] = u
                    plab[v] = plab[u] ^ labels[e]
        for b in range(a + 1, k):
            v = defects[b]
            if stamp[v] == run:
                W[a, b] = dist[v]
                W[b, a] = dist[v]
                L[a, b] = plab[v]
                L[b, a] = plab[v]
    return W, L, run


@njit
def _decode_batch_nb(indptr, indices, weights, labels, syndromes):
    shots, V = syndromes.shape
    out = np.zeros(shots, dtype=np.int64)
    dist = np.zeros(V, dtype=np.int64)
    pred = np.zeros(V, dtype=np.int64)
    plab = np.zeros(V, dtype=np.int64)
    stamp = np.zeros(V, dtype=np.int64)
    target = np.zeros(V, dtype=np.int64)
    cap = indices.shape[0] + V + 1
    hd = np.zeros(cap, dtype=np.int64)
    hv = np.zeros(cap, dtype=np.int64)
    run = 0
    for s in range(shots):
        cnt = 0
        for v in range(V):
            if syndromes[s, v]:
                cnt += 1
        if cnt == 0:
            continue
        if cnt % 2 == 1:
            out[s] = -1
            continue
        defects = np.empty(cnt, dtype=np.int64)
        c = 0
        for v in range(V):
            if syndromes[s, v]:
                defects[c] = v
                c += 1
        W, L, run = _pair_tables(indptr, indices, weights, labels, defects, dist, pred, plab,
                                 stamp, target, hd, hv, run + 1)
        run += 1
        partner = _min_weight_perfect_nb(W)
        lab = 0
        for a in range(cnt):
            if a < partner[a]:
                lab ^= L[a, partner[a]]
        out[s] = lab
    return out


# ---------------------------------------------------------------------------
# public API


class Decoder:
    """Reusable decoder bound to one detector graph."""

    def __init__(self, g: DetectorGraph):
        self.graph = g
        self.mg = MatchingGraph.from_detector_graph(g)
        V = self.mg.num_detectors
        self._buf = [np.zeros(V, dtype=np.int64) for _ in range(5)]
        cap = len(self.mg.indices) + V + 1
        self._heap = (np.zeros(cap, dtype=np.int64), np.zeros(cap, dtype=np.int64))
        self._run = 0

    def defect_pairs(self, syndrome) -> DefectGraph:
        syn = np.asarray(syndrome, dtype=bool)
        if syn.shape != (self.mg.num_detectors,):
            raise ValueError(f"syndrome length {syn.shape} != {self.mg.num_detectors} detectors")
        defects = np.flatnonzero(syn).astype(np.int64)
        if len(defects) % 2:
            raise OddDefectCount(f"{len(defects)} defects: the syndrome is corrupted")
        mg = self.mg
        W, L, self._run = _pair_tables(mg.indptr, mg.indices, mg.weights, mg.labels, defects,
                                       *self._buf, *self._heap, self._run + 1)
        self._run += 1
        return DefectGraph(defects, W, L)

    def decode(self, syndrome) -> tuple[int, int]:
        dg = self.defect_pairs(syndrome)
        lab = 0
        for a, b in mwpm_local(dg, tie_break="fast"):
            lab ^= int(dg.pair_labels[a, b])
        return lab & 1, lab >> 1

    def decode_batch(self, syndromes) -> np.ndarray:
        """Predicted 2-bit labels (as ints 0..3) for a ``(shots, V)`` array."""
        syn = np.ascontiguousarray(syndromes, dtype=np.bool_)
        if syn.ndim != 2 or syn.shape[1] != self.mg.num_detectors:
            raise ValueError("syndromes must have shape (shots, num_detectors)")
        mg = self.mg
        out = _decode_batch_nb(mg.indptr, mg.indices, mg.weights, mg.labels, syn)
        if (out < 0).any():
            raise OddDefectCount("a syndrome in the batch has an odd number of defects")
        return out


def mwpm_local(dg: DefectGraph, tie_break: str = "lex") -> list[tuple[int, int]]:
    """Matching as pairs of positions into ``dg.defects``."""
    return min_weight_perfect_matching(dg.pair_weights, tie_break)


def defect_pairs(g: DetectorGraph, syndrome) -> DefectGraph:
    return Decoder(g).defect_pairs(syndrome)


def mwpm(dg: DefectGraph, tie_break: str = "lex") -> list[tuple[int, int]]:
    """Minimum-weight perfect matching as pairs of detector ids."""
    return [(int(dg.defects[a]), int(dg.defects[b])) for a, b in mwpm_local(dg, tie_break)]


def decode(g: DetectorGraph, syndrome) -> tuple[int, int]:
    """Predicted logical flip ``(L0, L1)`` for one syndrome."""
    return Decoder(g).decode(syndrome)
